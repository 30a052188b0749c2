"""Action-level search: BFS and A* lookahead, execute loops, solvability probes,
and an exhaustive oracle.

Cost is counted in successor states generated: every child produced during a
planning call increments the ledger by one. Random rollouts generate no
successor sets and cost nothing.

The BFS kernel has two interchangeable expansion routines. Both enumerate
children in canonical order (parent-major, then block index, then x): a scalar
loop over Python-int bitmaps that works for any grid, and a numpy routine used
when the grid fits in 64 bits and the frontier is large. Their outputs are
bit-identical, so plans do not depend on which one ran.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from heapq import heappop, heappush

import numpy as np

from .seeding import derive_seed, fold_one, fold_parts
from .world import (
    Action,
    Inventory,
    PlacementTables,
    Region,
    WorldState,
    apply,
    legal_actions,
    is_match,
    placement_tables,
)

# frontier size at which the numpy expansion overtakes the scalar loop
_VEC_MIN_FRONTIER = 64
# consecutive zero-cost unsolved episodes tolerated before a probe gives up;
# a search that generates no states can never exhaust a state budget
_STALL_EPISODE_CAP = 64

ALGORITHMS = ("random", "bfs", "astar")


@dataclass
class CostLedger:
    """Mutable counter of successor states generated."""

    states: int = 0

    def add(self, n: int = 1) -> None:
        self.states += n


@dataclass(frozen=True)
class SearchConfig:
    algorithm: str = "bfs"
    bfs_depth: int = 3
    astar_budget: float = 4096
    episode_step_cap: int = 50
    rng_seed: int = 0
    admissible_heuristic: bool = False
    bfs_dedup: bool = False

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.bfs_depth < 1:
            raise ValueError("bfs_depth must be >= 1")
        if self.astar_budget < 1:
            raise ValueError("astar_budget must be >= 1")
        if self.episode_step_cap < 1:
            raise ValueError("episode_step_cap must be >= 1")


@dataclass(frozen=True)
class PlanOutcome:
    """Result of one planning call or one lookahead-execute episode."""

    actions: tuple[Action, ...]
    c_solution: int
    s_final: WorldState
    solved: bool


@dataclass(frozen=True)
class ProbeResult:
    """Result of repeated-episode solvability probing.

    ``c_planning`` is math.inf when the budget ran out; ``cost_spent`` is the
    real accumulated cost either way. ``successful_cost`` is the cost of the
    solving episode alone (0 on failure).
    """

    solved: bool
    c_planning: float
    plan: PlanOutcome | None
    cost_spent: int
    successful_cost: int
    episodes: int


@dataclass(frozen=True)
class OracleResult:
    solvable: bool
    min_blocks: int | None
    actions: tuple[Action, ...] | None


class CapExceeded(RuntimeError):
    """Exhaustive enumeration hit its node cap without proving either way."""


class _TieRandom:
    """Counter-based splitmix64 rng for tie breaking.

    Construction just stores the seed, so episodes without ties cost nothing;
    the draw count feeds the deterministic-episode shortcut in
    probe_solvability. Uniformity comes from Lemire's multiply-shift reduction.
    """

    __slots__ = ("_state", "draws")

    def __init__(self, seed: int):
        self._state = seed
        self.draws = 0

    def _next(self) -> int:
        self.draws += 1
        s = self._state = (self._state + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
        s = ((s ^ (s >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
        s = ((s ^ (s >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
        return s ^ (s >> 31)

    def random(self) -> float:
        return (self._next() >> 11) * (2.0**-53)

    def randrange(self, n: int) -> int:
        return (self._next() * n) >> 64


class _RegionTables:
    """Placement candidates filtered down to one region.

    ``cands`` keeps, in canonical order, only candidates that fit inside the
    region mask at some resting height:

        (ci, shifts, fps, keep, repl, barea, bh, oky)

    where ``oky`` is a bitmask over resting rows y with footprint inside the
    mask, folding the height bound and the region test into one lookup.
    Cached per (tables, mask) because probes re-enumerate the same region
    thousands of times.
    """

    __slots__ = ("cands", "np")

    def __init__(self, tables: PlacementTables, mask: int):
        mask_inv = tables.full ^ mask
        cands = []
        for ci, (shifts, maxy, fps, keep, repl, barea, bh) in enumerate(tables.cands):
            oky = 0
            for y in range(maxy + 1):
                if not fps[y] & mask_inv:
                    oky |= 1 << y
            if oky:
                cands.append((ci, shifts, fps, keep, repl, barea, bh, oky))
        self.cands = tuple(cands)
        self.np = None


class _NpRegionTables:
    """uint64 mirrors of _RegionTables for the vector expansion."""

    def __init__(self, rc: _RegionTables, height: int):
        self.ci = [c[0] for c in rc.cands]
        self.shifts = [tuple(np.uint64(s) for s in c[1]) for c in rc.cands]
        self.keep = [np.uint64(c[3]) for c in rc.cands]
        self.repl = [np.uint64(c[4]) for c in rc.cands]
        self.barea = [c[5] for c in rc.cands]
        self.bh = [np.uint64(c[6]) for c in rc.cands]
        self.oky = [np.uint64(c[7]) for c in rc.cands]
        self.fp = np.zeros((len(rc.cands), height + 1), dtype=np.uint64)
        for i, c in enumerate(rc.cands):
            for y, fp in enumerate(c[2]):
                self.fp[i, y] = fp
        self.maxy_u64 = [np.uint64(len(c[2]) - 1) for c in rc.cands]


class _Ctx:
    """A (tables, region) pair with the masks and tables the kernels need.

    ``child_cache`` memoizes the successor list of each occupancy seen during
    this context's lifetime (one probe or one planning call). Probes revisit
    the same states across episodes constantly; regenerating children from the
    cache is several times cheaper and the ledger still counts every
    regeneration, so costs are unchanged.
    """

    __slots__ = ("tables", "region", "mask", "mask_inv", "extent", "mask_area", "rc",
                 "child_cache", "search_cache")

    def __init__(self, tables: PlacementTables, region: Region):
        self.tables = tables
        self.region = region
        self.mask = region.mask
        self.mask_inv = tables.full ^ region.mask
        self.extent = region.extent
        self.mask_area = region.area
        cache = getattr(tables, "_region_cache", None)
        if cache is None:
            cache = tables._region_cache = {}
        rc = cache.get(region.mask)
        if rc is None:
            rc = cache[region.mask] = _RegionTables(tables, region.mask)
        self.rc = rc
        self.child_cache = {}
        self.search_cache = {}


def _ctx_for(state: WorldState, region: Region) -> _Ctx:
    sil = state.silhouette
    if region.silhouette != sil:
        raise ValueError("region belongs to a different silhouette")
    return _Ctx(placement_tables(sil.width, sil.height, state.inventory), region)


def _raw_from_state(ctx: _Ctx, state: WorldState) -> tuple[int, int, int]:
    return (
        state.occ,
        ctx.tables.pack_heights(state.heights),
        (state.occ & ctx.mask).bit_count(),
    )


def _is_clean(ctx: _Ctx, occ: int) -> bool:
    # a start with stray cells inside the region extent can never match
    return occ & ctx.extent & ~ctx.mask == 0


def _apply_raw(tables: PlacementTables, occ: int, hp: int, area: int, ci: int):
    shifts, maxy, fps, keep, repl, barea, bh = tables.cands[ci]
    hm = tables.hmask
    y = 0
    for s in shifts:
        v = (hp >> s) & hm
        if v > y:
            y = v
    fp = fps[y]
    return occ | fp, (hp & keep) | ((y + bh) * repl), area + barea


# ---- level expansion (scalar and vector) ----
#
# Levels are parallel sequences (occ, hp, area, parent, cand), either Python
# lists of ints or numpy uint64/int64 arrays. Both expansions emit children in
# the same canonical order: parent-major, then candidate order.


def _state_children(rc, hm, o, hp):
    """Successors of one state: parallel tuples (occ, hp, block_area, cand)."""
    co, ch, cb, cc = [], [], [], []
    for ci, shifts, fps, keep, repl, barea, bh, oky in rc.cands:
        y = 0
        for s in shifts:
            v = (hp >> s) & hm
            if v > y:
                y = v
        if (oky >> y) & 1:
            co.append(o | fps[y])
            ch.append((hp & keep) | ((y + bh) * repl))
            cb.append(barea)
            cc.append(ci)
    return co, ch, cb, cc


def _expand_scalar(ctx, occs, hps, areas):
    if type(occs) is not list:
        occs = occs.tolist()
        hps = hps.tolist()
        areas = areas.tolist()
    rc = ctx.rc
    hm = ctx.tables.hmask
    cache = ctx.child_cache
    co, ch, ca, cp, cc = [], [], [], [], []
    for pi in range(len(occs)):
        o = occs[pi]
        ent = cache.get(o)
        if ent is None:
            # heights are a function of occupancy, so occ alone keys the cache
            ent = cache[o] = _state_children(rc, hm, o, hps[pi])
        eo, eh, eb, ec = ent
        n = len(eo)
        if n:
            a = areas[pi]
            co.extend(eo)
            ch.extend(eh)
            ca.extend([a + b for b in eb])
            cp.extend([pi] * n)
            cc.extend(ec)
    return co, ch, ca, cp, cc


def _np_region(ctx: _Ctx) -> _NpRegionTables:
    npt = ctx.rc.np
    if npt is None:
        npt = ctx.rc.np = _NpRegionTables(ctx.rc, ctx.tables.height)
    return npt


def _expand_vector(ctx, occs, hps, areas):
    npt = _np_region(ctx)
    occ64 = np.asarray(occs, dtype=np.uint64)
    hp64 = np.asarray(hps, dtype=np.uint64)
    area64 = np.asarray(areas, dtype=np.int64)
    hmask = np.uint64(ctx.tables.hmask)
    one = np.uint64(1)
    chunks = []
    for i in range(len(npt.ci)):
        shifts = npt.shifts[i]
        ys = (hp64 >> shifts[0]) & hmask
        for s in shifts[1:]:
            np.maximum(ys, (hp64 >> s) & hmask, out=ys)
        maxy = npt.maxy_u64[i]
        ok = ys <= maxy
        ok &= (npt.oky[i] >> np.minimum(ys, maxy)) & one != 0
        idx = np.nonzero(ok)[0]
        if idx.size == 0:
            continue
        ysi = ys[idx]
        fp = npt.fp[i][ysi]
        chunks.append(
            (
                idx,
                occ64[idx] | fp,
                (hp64[idx] & npt.keep[i]) | (ysi + npt.bh[i]) * npt.repl[i],
                area64[idx] + npt.barea[i],
                npt.ci[i],
            )
        )
    if not chunks:
        return [], [], [], [], []
    parents = np.concatenate([c[0] for c in chunks])
    occ_all = np.concatenate([c[1] for c in chunks])
    hp_all = np.concatenate([c[2] for c in chunks])
    area_all = np.concatenate([c[3] for c in chunks])
    cand_all = np.concatenate([np.full(c[0].size, c[4], dtype=np.int64) for c in chunks])
    # chunks are candidate-major; reorder to the canonical parent-major order
    order = np.argsort(parents, kind="stable")
    return (
        occ_all[order],
        hp_all[order],
        area_all[order],
        parents[order],
        cand_all[order],
    )


def _expand(ctx, occs, hps, areas):
    if ctx.tables.fits64 and len(occs) >= _VEC_MIN_FRONTIER:
        return _expand_vector(ctx, occs, hps, areas)
    return _expand_scalar(ctx, occs, hps, areas)


def _level_max(areas) -> int:
    return int(areas.max()) if type(areas) is np.ndarray else max(areas)


def _eq_indices(areas, v):
    if type(areas) is np.ndarray:
        return np.nonzero(areas == v)[0].tolist()
    return [i for i, a in enumerate(areas) if a == v]


def _aslist(seq):
    return seq.tolist() if type(seq) is np.ndarray else seq


def _take(seq, idx):
    if type(seq) is np.ndarray:
        return seq[idx]
    return [seq[i] for i in idx]


# ---- BFS lookahead ----


# searches with more tied argmax nodes than this are not memoized
_TIE_CACHE_MAX = 512


def _bfs_search(ctx, occ0, hp0, area0, depth, rng, ledger, dedup=False):
    """Exhaustive lookahead to ``depth``; returns (cand_path, solved, occ, hp, area).

    The search tree from a given start is deterministic; only the final tie
    pick draws. Outcomes are therefore memoized per start occupancy (the cost
    is re-added to the ledger on every replay), which makes the repeated
    episodes of a probe cheap without changing any result.
    """
    ent = ctx.search_cache.get(occ0)
    if ent is not None:
        total, solved, ties = ent
        ledger.states += total
        path, occ_f, hp_f, area_f = (
            ties[rng.randrange(len(ties))] if len(ties) > 1 else ties[0]
        )
        return list(path), solved, occ_f, hp_f, area_f
    clean = _is_clean(ctx, occ0)
    if clean and area0 == ctx.mask_area:
        return [], True, occ0, hp0, area0
    lv_occ = [[occ0]]
    lv_hp = [[hp0]]
    lv_area = [[area0]]
    lv_parent = [[0]]
    lv_cand = [[0]]
    lv_max = [area0]
    matched_level = 0
    total = 0
    for _ in range(depth):
        co, ch, ca, cp, cc = _expand(ctx, lv_occ[-1], lv_hp[-1], lv_area[-1])
        n = len(co)
        if n == 0:
            break
        total += n
        ledger.states += n
        if dedup:
            seen = set()
            keep = [i for i, o in enumerate(_aslist(co)) if o not in seen and not seen.add(o)]
            if len(keep) < n:
                co, ch, ca, cp, cc = (
                    _take(co, keep), _take(ch, keep), _take(ca, keep),
                    _take(cp, keep), _take(cc, keep),
                )
        lv_occ.append(co)
        lv_hp.append(ch)
        lv_area.append(ca)
        lv_parent.append(cp)
        lv_cand.append(cc)
        lv_max.append(_level_max(ca))
        if clean and lv_max[-1] == ctx.mask_area:
            matched_level = len(lv_occ) - 1
            break
    nlevels = len(lv_occ)
    if nlevels == 1:
        ctx.search_cache[occ0] = (0, False, (((), occ0, hp0, area0),))
        return [], False, occ0, hp0, area0
    if matched_level:
        ties = [(matched_level, i) for i in _eq_indices(lv_area[matched_level], ctx.mask_area)]
        solved = True
    else:
        best = max(lv_max[1:])
        ties = []
        for lv in range(1, nlevels):
            if lv_max[lv] == best:
                ties.extend((lv, i) for i in _eq_indices(lv_area[lv], best))
        solved = False

    def mat(lv, i):
        occ_f, hp_f, area_f = int(lv_occ[lv][i]), int(lv_hp[lv][i]), int(lv_area[lv][i])
        path = []
        while lv > 0:
            path.append(int(lv_cand[lv][i]))
            i = lv_parent[lv][i]
            lv -= 1
        path.reverse()
        return tuple(path), occ_f, hp_f, area_f

    if len(ties) <= _TIE_CACHE_MAX:
        mats = tuple(mat(lv, i) for lv, i in ties)
        ctx.search_cache[occ0] = (total, solved, mats)
        path, occ_f, hp_f, area_f = (
            mats[rng.randrange(len(mats))] if len(mats) > 1 else mats[0]
        )
        return list(path), solved, occ_f, hp_f, area_f
    lv, i = ties[rng.randrange(len(ties))]
    path, occ_f, hp_f, area_f = mat(lv, i)
    return list(path), solved, occ_f, hp_f, area_f


# ---- A* lookahead ----


def _astar_search(ctx, occ0, hp0, area0, budget, rng, ledger, admissible=False):
    """Best-first lookahead with an expansion budget.

    f = g + h with g = blocks placed and h = cells left / smallest block area
    (largest when ``admissible``). One iteration pops and expands one node; a
    popped goal ends the search. At exhaustion the best partial (max filled
    area, then lowest f, ties at random) is returned.
    """
    tables = ctx.tables
    clean = _is_clean(ctx, occ0)
    if clean and area0 == ctx.mask_area:
        return [], True, occ0, hp0, area0
    inv = tables.inventory
    denom = inv.max_area if admissible else inv.min_area
    target = ctx.mask_area
    hm = tables.hmask
    rc = ctx.rc
    cache = ctx.child_cache
    occs = [occ0]
    hps = [hp0]
    areas = [area0]
    gs = [0]
    parents = [-1]
    cands = [-1]
    # Heap keys pack (f * denom, tie draw, node id) into one int. f = g + h
    # compares identically to f * denom = g * denom + cells_left, exactly.
    heap = [(target - area0) << 85]
    best_area = -1
    best_fd = 0
    ties: list[int] = []
    expansions = 0
    while heap and expansions < budget:
        ni = heappop(heap) & 0xFFFFFFFF
        if clean and areas[ni] == target:
            return _node_path(parents, cands, ni), True, occs[ni], hps[ni], areas[ni]
        expansions += 1
        o = occs[ni]
        a = areas[ni]
        g1 = gs[ni] + 1
        ent = cache.get(o)
        if ent is None:
            ent = cache[o] = _state_children(rc, hm, o, hps[ni])
        eo, eh, eb, ec = ent
        n0 = len(occs)
        n = len(eo)
        occs.extend(eo)
        hps.extend(eh)
        cands.extend(ec)
        gs.extend([g1] * n)
        parents.extend([ni] * n)
        base = g1 * denom + target
        for j in range(n):
            a2 = a + eb[j]
            areas.append(a2)
            fd2 = base - a2
            r = int(rng.random() * 9007199254740992.0)
            heappush(heap, ((fd2 << 53 | r) << 32) | (n0 + j))
            if a2 > best_area or (a2 == best_area and fd2 < best_fd):
                best_area = a2
                best_fd = fd2
                ties = [n0 + j]
            elif a2 == best_area and fd2 == best_fd:
                ties.append(n0 + j)
        ledger.states += n
    if not ties:
        return [], False, occ0, hp0, area0
    ni = ties[rng.randrange(len(ties))] if len(ties) > 1 else ties[0]
    solved = clean and areas[ni] == target
    return _node_path(parents, cands, ni), solved, occs[ni], hps[ni], areas[ni]


def _node_path(parents, cands, ni):
    path = []
    while ni > 0:
        path.append(cands[ni])
        ni = parents[ni]
    path.reverse()
    return path


# ---- public planning ops ----


def heuristic(state: WorldState, region: Region, inventory: Inventory, admissible: bool = False) -> float:
    """Unfilled region cells divided by a block area (smallest by default)."""
    denom = inventory.max_area if admissible else inventory.min_area
    return (region.area - (state.occ & region.mask).bit_count()) / denom


def _materialize(state: WorldState, region: Region, tables, path, cost, solved) -> PlanOutcome:
    s = state
    actions = []
    for ci in path:
        a = tables.actions[ci]
        s = apply(s, a, region)
        actions.append(a)
    return PlanOutcome(tuple(actions), cost, s, solved)


def bfs_plan(state: WorldState, region: Region, depth: int, rng, ledger: CostLedger,
             dedup: bool = False) -> PlanOutcome:
    """Exhaustive lookahead to ``depth``, early-stopped on a match.

    Returns the generated action sequence maximizing filled region area, ties
    uniformly at random. ``solved`` is True iff the sequence matches the region.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    ctx = _ctx_for(state, region)
    before = ledger.states
    path, solved, *_ = _bfs_search(ctx, *_raw_from_state(ctx, state), depth, rng, ledger, dedup)
    return _materialize(state, region, ctx.tables, path, ledger.states - before, solved)


def astar_plan(state: WorldState, region: Region, budget: float, rng, ledger: CostLedger,
               admissible: bool = False) -> PlanOutcome:
    """Best-first lookahead with an expansion budget (math.inf for unlimited)."""
    if budget < 1:
        raise ValueError("budget must be >= 1")
    ctx = _ctx_for(state, region)
    before = ledger.states
    path, solved, *_ = _astar_search(
        ctx, *_raw_from_state(ctx, state), budget, rng, ledger, admissible
    )
    return _materialize(state, region, ctx.tables, path, ledger.states - before, solved)


def random_episode(state: WorldState, region: Region, step_cap: int, rng) -> PlanOutcome:
    """Uniform random legal drops until match, dead end, or step cap. Zero cost."""
    s = state
    actions = []
    while len(actions) < step_cap and not is_match(s, region):
        acts = legal_actions(s, region)
        if not acts:
            break
        a = acts[rng.randrange(len(acts))]
        s = apply(s, a, region)
        actions.append(a)
    return PlanOutcome(tuple(actions), 0, s, is_match(s, region))


def _episode_raw(config: SearchConfig, ctx: _Ctx, occ, hp, area, rng, ledger):
    """Lookahead-execute loop on raw kernel state.

    Solved plans are applied in full; otherwise the first action is applied and
    planning repeats, until match, dead end, or the step cap.
    """
    before = ledger.states
    applied: list[int] = []
    steps = 0
    clean = _is_clean(ctx, occ)
    bfs = config.algorithm == "bfs"
    cap = config.episode_step_cap
    while True:
        if clean and area == ctx.mask_area:
            solved = True
            break
        if bfs:
            path, psolved, o2, h2, a2 = _bfs_search(
                ctx, occ, hp, area, config.bfs_depth, rng, ledger, config.bfs_dedup
            )
        else:
            path, psolved, o2, h2, a2 = _astar_search(
                ctx, occ, hp, area, config.astar_budget, rng, ledger, config.admissible_heuristic
            )
        if not path:
            solved = False
            break
        if psolved:
            applied.extend(path)
            occ, hp, area = o2, h2, a2
            solved = True
            break
        occ, hp, area = _apply_raw(ctx.tables, occ, hp, area, path[0])
        applied.append(path[0])
        steps += 1
        if steps >= cap:
            solved = clean and area == ctx.mask_area
            break
    return applied, ledger.states - before, occ, hp, area, solved


def run_episode(config: SearchConfig, state: WorldState, region: Region, rng,
                ledger: CostLedger) -> PlanOutcome:
    """One lookahead-execute episode of the configured algorithm."""
    if config.algorithm == "random":
        return random_episode(state, region, config.episode_step_cap, rng)
    ctx = _ctx_for(state, region)
    path, cost, _, _, _, solved = _episode_raw(
        config, ctx, *_raw_from_state(ctx, state), rng, ledger
    )
    return _materialize(state, region, ctx.tables, path, cost, solved)


def probe_solvability(config: SearchConfig, state: WorldState, region: Region,
                      budget_b: int, seed_parts: tuple = (0,),
                      ledger: CostLedger | None = None) -> ProbeResult:
    """Repeat fresh-seeded episodes until one solves or cost reaches ``budget_b``.

    Episode i uses the rng seed derive_seed(*seed_parts, i), so probe outcomes
    are independent of evaluation order. Episodes that consumed no randomness
    are deterministic: an unsolved one either ends the probe immediately (zero
    cost) or stands in for all remaining repeats (the skipped cost is added to
    the ledger unchanged). Zero-cost stochastic episodes are retried at most a
    fixed number of times, since they can never exhaust a state budget.
    """
    if budget_b < 1:
        raise ValueError("budget_b must be >= 1")
    if ledger is None:
        ledger = CostLedger()
    random_mode = config.algorithm == "random"
    if not random_mode:
        ctx = _ctx_for(state, region)
        raw0 = _raw_from_state(ctx, state)
        tables = ctx.tables
    base = fold_parts(*seed_parts)
    c_planning = 0
    episodes = 0
    stalled = 0
    while c_planning < budget_b:
        # same stream as derive_seed(*seed_parts, episode)
        rng = _TieRandom(fold_one(base, episodes) >> 1)
        if random_mode:
            out = random_episode(state, region, config.episode_step_cap, rng)
            cost, solved = 0, out.solved
        else:
            path, cost, *_, solved = _episode_raw(config, ctx, *raw0, rng, ledger)
        c_planning += cost
        episodes += 1
        if solved:
            plan = out if random_mode else _materialize(
                state, region, tables, path, cost, True
            )
            return ProbeResult(True, c_planning, plan, c_planning, cost, episodes)
        if cost == 0:
            stalled += 1
            if rng.draws == 0 or stalled >= _STALL_EPISODE_CAP:
                break
        elif rng.draws == 0:
            # deterministic failure: every remaining episode would repeat it
            k = -(-(budget_b - c_planning) // cost)
            c_planning += k * cost
            ledger.add(k * cost)
            episodes += k
            break
        else:
            stalled = 0
    return ProbeResult(False, math.inf, None, c_planning, 0, episodes)


def oracle_solve(region: Region, inventory: Inventory, node_cap: int = 1_000_000) -> OracleResult:
    """Ground-truth solvability and minimum placement count from the empty state.

    Exhaustive enumeration over deduplicated occupancy bitmaps in placement-count
    order, so the first match is minimal. Raises CapExceeded when ``node_cap``
    unique states were generated without settling the question.
    """
    sil = region.silhouette
    tables = placement_tables(sil.width, sil.height, inventory)
    rc = _RegionTables(tables, region.mask)
    target = region.area
    if target == 0:
        return OracleResult(True, 0, ())
    hm = tables.hmask
    seen: dict[int, tuple[int, int]] = {0: (-1, -1)}
    frontier = [(0, 0, 0)]
    level = 0
    while frontier:
        level += 1
        nxt = []
        for occ, hp, area in frontier:
            for ci, shifts, fps, keep, repl, barea, bh, oky in rc.cands:
                y = 0
                for s in shifts:
                    v = (hp >> s) & hm
                    if v > y:
                        y = v
                if (oky >> y) & 1:
                    occ2 = occ | fps[y]
                    if occ2 not in seen:
                        seen[occ2] = (occ, ci)
                        if len(seen) - 1 > node_cap:
                            raise CapExceeded(
                                f"exhausted {node_cap} states without an answer"
                            )
                        a2 = area + barea
                        if a2 == target:
                            path = []
                            cur = occ2
                            while cur:
                                parent, c = seen[cur]
                                path.append(tables.actions[c])
                                cur = parent
                            path.reverse()
                            return OracleResult(True, level, tuple(path))
                        nxt.append((occ2, (hp & keep) | ((y + bh) * repl), a2))
        frontier = nxt
    return OracleResult(False, None, None)
