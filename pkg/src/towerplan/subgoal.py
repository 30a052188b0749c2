"""Hierarchical planners that decompose a silhouette into horizontal-layer subgoals.

Three modes share one value function V = r_g - lambda * c_planning, where r_g is
the incremental region area and c_planning the states generated while probing
the subgoal:

* ``scoping``   evaluates only the candidate next layers from the current state
  and commits to the best one before looking further.
* ``full``      enumerates every increasing layer sequence ending at the top,
  probes each one start to finish, and executes the best complete sequence.
* ``nosubgoal`` skips decomposition and probes the whole silhouette directly.

Probes repeat fresh-seeded lookahead-execute episodes until one solves the
region or the per-candidate budget is spent, so every planner is stochastic
but exactly reproducible from its trial seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .search import CostLedger, PlanOutcome, ProbeResult, SearchConfig, probe_solvability
from .world import (
    DEFAULT_INVENTORY,
    Action,
    Inventory,
    Silhouette,
    WorldState,
    apply,
    empty_state,
    filled_area,
    full_region,
    is_match,
    prefix_height,
    subgoal_region,
)

MODES = ("scoping", "full", "nosubgoal")
ACT_MODES = ("whole_plan", "single_action")


@dataclass(frozen=True)
class SubgoalPlanConfig:
    """Parameters shared by all subgoal planners.

    ``lam`` weighs planning cost against region area in V; ``budget_b`` caps
    the states a single candidate probe may generate before it reports the
    subgoal unsolved. ``act_mode`` selects whether a chosen subgoal's cached
    plan is executed whole or one action at a time with replanning in between.
    """

    llp: SearchConfig = field(default_factory=SearchConfig)
    lam: float = 0.0
    budget_b: int = 100_000
    mode: str = "scoping"
    act_mode: str = "whole_plan"
    memoize_probes: bool = False

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("lam must be >= 0")
        if self.budget_b < 1:
            raise ValueError("budget_b must be >= 1")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.act_mode not in ACT_MODES:
            raise ValueError(f"act_mode must be one of {ACT_MODES}")


@dataclass(frozen=True)
class SubgoalEvaluation:
    """One candidate layer height probed from a particular state."""

    h: int
    r_g: int
    solved: bool
    c_planning: float
    value: float
    probe: ProbeResult

    @property
    def plan(self) -> PlanOutcome | None:
        return self.probe.plan


@dataclass(frozen=True)
class SequenceEvaluation:
    """One complete layer sequence scored by the full-subgoal planner."""

    heights: tuple[int, ...]
    value: float
    sum_c_planning: float
    evaluations: tuple[SubgoalEvaluation, ...]
    completed: bool


@dataclass(frozen=True)
class DecompositionRecord:
    """Chosen layer heights with the evaluations that selected them."""

    heights: tuple[int, ...]
    evaluations: tuple[SubgoalEvaluation, ...]
    sequence_values: tuple[float, ...] = ()


@dataclass(frozen=True)
class TrialResult:
    """Outcome of one planner run on one silhouette.

    ``action_cost`` counts the states generated by the probe episodes whose
    plans were executed; ``selection_cost`` counts everything else (failed
    episodes, losing candidates, abandoned sequences). The two always sum to
    ``c_total``, the trial's full ledger increment.
    """

    mode: str
    success: bool
    actions: tuple[Action, ...]
    final_state: WorldState
    decomposition: DecompositionRecord
    action_cost: int
    selection_cost: int
    c_total: int
    n_subgoals: int
    blocks_used: int

    def __post_init__(self):
        if self.action_cost + self.selection_cost != self.c_total:
            raise ValueError("action_cost + selection_cost must equal c_total")


def _layer_area(silhouette: Silhouette, h: int) -> int:
    return (silhouette.bits & ((1 << (h * silhouette.width)) - 1)).bit_count()


def enumerate_next_subgoals(state: WorldState) -> list[int]:
    """Candidate next layer heights: above the solved prefix, adding area."""
    sil = state.silhouette
    filled = filled_area(state, full_region(sil))
    lo = prefix_height(state)
    return [h for h in range(lo + 1, sil.height + 1) if _layer_area(sil, h) > filled]


def enumerate_sequences(silhouette: Silhouette) -> list[tuple[int, ...]]:
    """Every strictly increasing layer sequence ending at the full height.

    There are 2^(H-1) of them: each subset of {1..H-1} extended by H, ordered
    by subset bitmask so (H,) comes first.
    """
    H = silhouette.height
    out = []
    for m in range(1 << (H - 1)):
        seq = [h for h in range(1, H) if (m >> (h - 1)) & 1]
        seq.append(H)
        out.append(tuple(seq))
    return out


def evaluate_subgoal(state: WorldState, h: int, config: SubgoalPlanConfig,
                     seed_parts: tuple, ledger: CostLedger) -> SubgoalEvaluation:
    """Probe layer ``h`` from ``state`` and score it.

    r_g is the layer's mask area minus the area already filled anywhere in the
    silhouette. Unsolved probes score -inf so they can never be selected.
    """
    sil = state.silhouette
    region = subgoal_region(sil, h)
    r_g = region.area - filled_area(state, full_region(sil))
    probe = probe_solvability(config.llp, state, region, config.budget_b, seed_parts, ledger)
    value = r_g - config.lam * probe.c_planning if probe.solved else -math.inf
    return SubgoalEvaluation(h, r_g, probe.solved, probe.c_planning, value, probe)


def _result(mode: str, success: bool, actions: list[Action], final: WorldState,
            record: DecompositionRecord, action_cost: int, c_total: int,
            n_subgoals: int) -> TrialResult:
    return TrialResult(
        mode=mode,
        success=success,
        actions=tuple(actions),
        final_state=final,
        decomposition=record,
        action_cost=action_cost,
        selection_cost=c_total - action_cost,
        c_total=c_total,
        n_subgoals=n_subgoals,
        blocks_used=len(actions),
    )


def run_scoping(silhouette: Silhouette, config: SubgoalPlanConfig, trial_seed: int,
                inventory: Inventory = DEFAULT_INVENTORY,
                ledger: CostLedger | None = None) -> TrialResult:
    """Greedy next-subgoal selection: probe the candidate layers, commit to the
    argmax-V one, execute, repeat until the silhouette is matched or no
    candidate is solvable within budget.

    Probe seeds derive from (trial_seed, decision index, candidate height), so
    candidate probes within one decision may be evaluated in any order.
    """
    led = ledger if ledger is not None else CostLedger()
    start_states = led.states
    state = empty_state(silhouette, inventory)
    target = full_region(silhouette)
    single = config.act_mode == "single_action"
    actions: list[Action] = []
    heights: list[int] = []
    chosen: list[SubgoalEvaluation] = []
    action_cost = 0
    success = False
    decision = 0
    while True:
        if is_match(state, target):
            success = True
            break
        best = None
        for h in enumerate_next_subgoals(state):
            ev = evaluate_subgoal(state, h, config, (trial_seed, decision, h), led)
            if not ev.solved:
                continue
            # ties: higher V, then cheaper probe, then lower layer
            if best is None or (ev.value, -ev.c_planning, -ev.h) > (best.value, -best.c_planning, -best.h):
                best = ev
        if best is None:
            break
        plan = best.probe.plan
        if not plan.actions:
            break
        if not heights or heights[-1] != best.h:
            heights.append(best.h)
            chosen.append(best)
        action_cost += best.probe.successful_cost
        if single:
            act = plan.actions[0]
            state = apply(state, act, subgoal_region(silhouette, best.h))
            actions.append(act)
        else:
            actions.extend(plan.actions)
            state = plan.s_final
        decision += 1
    record = DecompositionRecord(tuple(heights), tuple(chosen))
    return _result("scoping", success, actions, state, record, action_cost,
                   led.states - start_states, len(heights))


def _sequence_key(sq: SequenceEvaluation) -> tuple:
    # ties: higher V, then cheaper, then fewer subgoals, then enumeration order
    return (sq.value, -sq.sum_c_planning, -len(sq.heights))


def run_full_subgoal(silhouette: Silhouette, config: SubgoalPlanConfig, trial_seed: int,
                     inventory: Inventory = DEFAULT_INVENTORY,
                     ledger: CostLedger | None = None) -> TrialResult:
    """Probe every complete layer sequence, then execute the best one.

    A sequence is abandoned at its first unsolvable subgoal and scores -inf.
    Probe seeds derive from (trial_seed, prefix height, candidate height);
    solved prefixes are canonical states, so two sequences sharing a prefix
    probe identically, which ``memoize_probes`` exploits to skip repeat probes
    (same decisions, lower recorded cost).
    """
    led = ledger if ledger is not None else CostLedger()
    start_states = led.states
    start = empty_state(silhouette, inventory)
    memo: dict[tuple[int, int], SubgoalEvaluation] | None = (
        {} if config.memoize_probes else None
    )
    scored: list[SequenceEvaluation] = []
    finals: list[WorldState] = []
    for seq in enumerate_sequences(silhouette):
        state = start
        evals: list[SubgoalEvaluation] = []
        sum_r = 0
        sum_c = 0.0
        completed = True
        for h in seq:
            key = (prefix_height(state), h)
            if memo is not None and key in memo:
                ev = memo[key]
            else:
                ev = evaluate_subgoal(state, h, config, (trial_seed, key[0], h), led)
                if memo is not None:
                    memo[key] = ev
            evals.append(ev)
            if not ev.solved:
                completed = False
                break
            sum_r += ev.r_g
            sum_c += ev.c_planning
            state = ev.probe.plan.s_final
        value = sum_r - config.lam * sum_c if completed else -math.inf
        scored.append(SequenceEvaluation(seq, value, sum_c, tuple(evals), completed))
        finals.append(state)
    best_i = 0
    for i in range(1, len(scored)):
        if _sequence_key(scored[i]) > _sequence_key(scored[best_i]):
            best_i = i
    best = scored[best_i]
    values = tuple(sq.value for sq in scored)
    c_total = led.states - start_states
    if not best.completed:
        record = DecompositionRecord((), (), values)
        return _result("full", False, [], start, record, 0, c_total, 0)
    actions: list[Action] = []
    for ev in best.evaluations:
        actions.extend(ev.probe.plan.actions)
    final = finals[best_i]
    action_cost = sum(ev.probe.successful_cost for ev in best.evaluations)
    record = DecompositionRecord(best.heights, best.evaluations, values)
    return _result("full", is_match(final, full_region(silhouette)), actions, final,
                   record, action_cost, c_total, len(best.heights))


def run_no_subgoal(silhouette: Silhouette, config: SubgoalPlanConfig, trial_seed: int,
                   inventory: Inventory = DEFAULT_INVENTORY,
                   ledger: CostLedger | None = None) -> TrialResult:
    """Probe the whole silhouette directly, no decomposition.

    Seeded identically to the full planner's single-sequence probe of (H,), so
    the two produce the same episodes, actions, and total cost; only the
    bookkeeping differs (n_subgoals 0, all cost counted as action cost).
    """
    led = ledger if ledger is not None else CostLedger()
    start_states = led.states
    state = empty_state(silhouette, inventory)
    target = full_region(silhouette)
    H = silhouette.height
    seed_parts = (trial_seed, 0, H)
    probe = probe_solvability(config.llp, state, target, config.budget_b, seed_parts, led)
    c_total = led.states - start_states
    if not probe.solved:
        record = DecompositionRecord((), ())
        return _result("nosubgoal", False, [], state, record, c_total, c_total, 0)
    plan = probe.plan
    r_g = target.area
    ev = SubgoalEvaluation(H, r_g, True, probe.c_planning,
                           r_g - config.lam * probe.c_planning, probe)
    record = DecompositionRecord((H,), (ev,))
    return _result("nosubgoal", True, list(plan.actions), plan.s_final, record,
                   c_total, c_total, 0)


def run_trial(silhouette: Silhouette, config: SubgoalPlanConfig, trial_seed: int,
              inventory: Inventory = DEFAULT_INVENTORY,
              ledger: CostLedger | None = None) -> TrialResult:
    """Dispatch on ``config.mode``."""
    if config.mode == "scoping":
        return run_scoping(silhouette, config, trial_seed, inventory, ledger)
    if config.mode == "full":
        return run_full_subgoal(silhouette, config, trial_seed, inventory, ledger)
    return run_no_subgoal(silhouette, config, trial_seed, inventory, ledger)
