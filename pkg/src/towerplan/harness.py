"""Experiment matrix runner with deterministic per-cell seeding and disk io.

A matrix is planners x structures x seeds (x lambda values for the subgoal
planners). Every cell's trial seed derives from stable semantic parts, so the
record set is identical regardless of execution order, parallelism, or which
other planners share the run. Records stream to a line-delimited file as they
complete and can be exported to flat CSV with a fixed column order.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .search import SearchConfig
from .seeding import derive_seed
from .shapes import Catalog
from .stats import CI, bootstrap_ci
from .subgoal import ACT_MODES, MODES, SubgoalPlanConfig, run_trial
from .world import DEFAULT_INVENTORY, Inventory, Silhouette

# flat CSV column order; "lambda" is the TrialRecord.lam field
RECORD_COLUMNS = (
    "planner", "llp", "llp_budget", "structure", "seed", "lambda", "success",
    "blocks_used", "n_subgoals", "action_cost", "selection_cost", "c_total",
    "wall_time", "decomposition",
)

# cost-weight range per action-level algorithm over which behavior actually
# varies: above the top value the weight saturates (cheapest probe always wins)
LAMBDA_RANGES = {"bfs": (0.0, 0.008), "astar": (0.0, 0.003)}


def lambda_grid(lo: float, hi: float, n: int) -> tuple[float, ...]:
    """n evenly spaced values from lo to hi inclusive."""
    if n < 1:
        raise ValueError("grid needs at least one value")
    if lo < 0 or hi < lo:
        raise ValueError("need 0 <= lo <= hi")
    if n == 1:
        return (lo,)
    step = (hi - lo) / (n - 1)
    return tuple(lo + i * step for i in range(n))


def default_lambdas(algorithm: str, n: int = 64) -> tuple[float, ...]:
    lo, hi = LAMBDA_RANGES[algorithm]
    return lambda_grid(lo, hi, n)


@dataclass(frozen=True)
class PlannerSpec:
    """One planner column of the matrix: mode, search backend, lambda values."""

    mode: str
    llp: SearchConfig = field(default_factory=SearchConfig)
    budget_b: int = 100_000
    lambdas: tuple[float, ...] = (0.0,)
    act_mode: str = "whole_plan"
    memoize_probes: bool = False

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.act_mode not in ACT_MODES:
            raise ValueError(f"act_mode must be one of {ACT_MODES}")
        if self.budget_b < 1:
            raise ValueError("budget_b must be >= 1")
        if not self.lambdas or any(v < 0 for v in self.lambdas):
            raise ValueError("lambdas must be non-empty and non-negative")
        if self.mode == "nosubgoal" and self.lambdas != (0.0,):
            # the no-subgoal baseline has no selection step for lambda to weigh
            object.__setattr__(self, "lambdas", (0.0,))

    @property
    def llp_budget(self) -> float:
        if self.llp.algorithm == "bfs":
            return float(self.llp.bfs_depth)
        if self.llp.algorithm == "astar":
            return float(self.llp.astar_budget)
        return 0.0


@dataclass(frozen=True)
class ExperimentConfig:
    catalog: Catalog
    planners: tuple[PlannerSpec, ...]
    seeds: int = 32
    master_seed: int = 0
    inventory: Inventory = DEFAULT_INVENTORY
    jobs: int = 1
    out: str | None = None

    def __post_init__(self):
        if not self.planners:
            raise ValueError("need at least one planner spec")
        if self.seeds < 1:
            raise ValueError("need at least one seed")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")


@dataclass(frozen=True)
class TrialRecord:
    planner: str
    llp: str
    llp_budget: float
    structure: str
    seed: int
    lam: float
    success: int
    blocks_used: int
    n_subgoals: int
    action_cost: int
    selection_cost: int
    c_total: int
    wall_time: float
    decomposition: str
    error: str = ""

    def row(self) -> list:
        return [self.planner, self.llp, _fmt_budget(self.llp_budget),
                self.structure, self.seed, repr(self.lam), self.success,
                self.blocks_used, self.n_subgoals, self.action_cost,
                self.selection_cost, self.c_total, repr(self.wall_time),
                self.decomposition]


def _fmt_budget(b: float) -> str:
    if math.isinf(b):
        return "inf"
    return str(int(b)) if float(b).is_integer() else repr(b)


def _budget_part(b: float) -> int | str:
    return int(b) if not math.isinf(b) and float(b).is_integer() else str(b)


def trial_seed(master_seed: int, spec: PlannerSpec, structure_id: str, seed_index: int) -> int:
    """Stable per-cell seed. Lambda is excluded on purpose: every lambda value
    reuses the same probe streams, isolating the weight's effect from sampling
    noise and keeping paired comparisons across lambda meaningful."""
    return derive_seed(master_seed, spec.mode, spec.llp.algorithm,
                       _budget_part(spec.llp_budget), spec.budget_b,
                       structure_id, seed_index)


def _run_cell(args) -> TrialRecord:
    spec, silhouette, structure_id, seed_index, lam, tseed, inventory = args
    cfg = SubgoalPlanConfig(
        llp=spec.llp, lam=lam, budget_b=spec.budget_b, mode=spec.mode,
        act_mode=spec.act_mode, memoize_probes=spec.memoize_probes,
    )
    t0 = time.perf_counter()
    try:
        result = run_trial(silhouette, cfg, tseed, inventory)
    except Exception as exc:  # a broken cell must not abort the matrix
        return TrialRecord(
            planner=spec.mode, llp=spec.llp.algorithm, llp_budget=spec.llp_budget,
            structure=structure_id, seed=seed_index, lam=lam, success=0,
            blocks_used=0, n_subgoals=0, action_cost=0, selection_cost=0,
            c_total=0, wall_time=time.perf_counter() - t0, decomposition="",
            error=f"{type(exc).__name__}: {exc}",
        )
    return TrialRecord(
        planner=spec.mode, llp=spec.llp.algorithm, llp_budget=spec.llp_budget,
        structure=structure_id, seed=seed_index, lam=lam,
        success=int(result.success), blocks_used=result.blocks_used,
        n_subgoals=result.n_subgoals, action_cost=result.action_cost,
        selection_cost=result.selection_cost, c_total=result.c_total,
        wall_time=time.perf_counter() - t0,
        decomposition="-".join(str(h) for h in result.decomposition.heights),
    )


def _cells(config: ExperimentConfig):
    for spec in config.planners:
        for entry in config.catalog.entries:
            for si in range(config.seeds):
                tseed = trial_seed(config.master_seed, spec, entry.id, si)
                for lam in spec.lambdas:
                    yield (spec, entry.silhouette, entry.id, si, lam, tseed,
                           config.inventory)


def run_matrix(config: ExperimentConfig, progress=None) -> list[TrialRecord]:
    """Run every cell, optionally in worker processes, streaming to config.out.

    Records are written (and returned) in cell order, so reruns of the same
    config produce byte-identical files apart from wall_time. ``progress`` is
    an optional callable taking (done, total).
    """
    cells = list(_cells(config))
    writer = None
    if config.out is not None:
        Path(config.out).parent.mkdir(parents=True, exist_ok=True)
        writer = open(config.out, "w")
    records: list[TrialRecord] = []
    try:
        if config.jobs > 1:
            with ProcessPoolExecutor(max_workers=config.jobs) as pool:
                _stream(pool.map(_run_cell, cells, chunksize=4),
                        writer, records, progress, len(cells))
        else:
            _stream(map(_run_cell, cells), writer, records, progress, len(cells))
    finally:
        if writer is not None:
            writer.close()
    return records


def _stream(results, writer, records, progress, total):
    for i, rec in enumerate(results):
        records.append(rec)
        if writer is not None:
            writer.write(record_to_json(rec) + "\n")
            writer.flush()
        if progress is not None:
            progress(i + 1, total)


# ---- persistence ----


def record_to_json(rec: TrialRecord) -> str:
    d = {name: getattr(rec, name) for name in
         ("planner", "llp", "llp_budget", "structure", "seed", "lam", "success",
          "blocks_used", "n_subgoals", "action_cost", "selection_cost",
          "c_total", "wall_time", "decomposition")}
    if rec.error:
        d["error"] = rec.error
    if math.isinf(d["llp_budget"]):
        d["llp_budget"] = "inf"
    return json.dumps(d, separators=(",", ":"))


def record_from_json(line: str) -> TrialRecord:
    d = json.loads(line)
    if d.get("llp_budget") == "inf":
        d["llp_budget"] = math.inf
    return TrialRecord(**d)


def write_records(records, path: str | Path) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with open(p, "w") as f:
        for rec in records:
            f.write(record_to_json(rec) + "\n")


def read_records(path: str | Path) -> list[TrialRecord]:
    out = []
    with open(path) as f:
        for line in f:
            if line.strip():
                out.append(record_from_json(line))
    return out


def export_csv(records, path: str | Path) -> None:
    """Flat delimited export with the RECORD_COLUMNS order; plots consume this."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with open(p, "w") as f:
        f.write(",".join(RECORD_COLUMNS) + "\n")
        for rec in records:
            f.write(",".join(str(v) for v in rec.row()) + "\n")


def read_csv_records(path: str | Path) -> list[TrialRecord]:
    import csv

    out = []
    with open(path) as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or list(reader.fieldnames) != list(RECORD_COLUMNS):
            raise ValueError(f"unexpected columns: {reader.fieldnames}")
        for row in reader:
            out.append(TrialRecord(
                planner=row["planner"], llp=row["llp"],
                llp_budget=math.inf if row["llp_budget"] == "inf" else float(row["llp_budget"]),
                structure=row["structure"], seed=int(row["seed"]),
                lam=float(row["lambda"]), success=int(row["success"]),
                blocks_used=int(row["blocks_used"]), n_subgoals=int(row["n_subgoals"]),
                action_cost=int(row["action_cost"]),
                selection_cost=int(row["selection_cost"]), c_total=int(row["c_total"]),
                wall_time=float(row["wall_time"]), decomposition=row["decomposition"],
            ))
    return out


# ---- summaries ----

SUMMARY_COLUMNS = (
    "planner", "llp", "llp_budget", "lambda", "trials",
    "accuracy", "accuracy_lo", "accuracy_hi",
    "c_total", "c_total_lo", "c_total_hi",
    "action_cost", "selection_cost", "blocks_used", "n_subgoals",
)


def _group_by_structure(records, metric: str) -> dict[str, list[float]]:
    groups: dict[str, list[float]] = {}
    for r in records:
        groups.setdefault(r.structure, []).append(float(getattr(r, metric)))
    return groups


def cell_ci(records, metric: str, iterations: int = 1000, seed: int = 0) -> CI:
    """Bootstrap CI of one metric over one planner cell's records."""
    return bootstrap_ci(_group_by_structure(records, metric), iterations, seed)


def summarize(records, iterations: int = 1000, seed: int = 0) -> list[dict]:
    """Per planner cell: accuracy and total cost with CIs, mean blocks/subgoals.

    Cells are keyed by (planner, llp, llp_budget, lambda) and emitted in first-
    seen order.
    """
    cells: dict[tuple, list[TrialRecord]] = {}
    for r in records:
        cells.setdefault((r.planner, r.llp, r.llp_budget, r.lam), []).append(r)
    rows = []
    for (planner, llp, budget, lam), recs in cells.items():
        acc = cell_ci(recs, "success", iterations, seed)
        cost = cell_ci(recs, "c_total", iterations, seed)
        n = len(recs)
        rows.append({
            "planner": planner, "llp": llp, "llp_budget": budget, "lambda": lam,
            "trials": n,
            "accuracy": acc.mean, "accuracy_lo": acc.lo, "accuracy_hi": acc.hi,
            "c_total": cost.mean, "c_total_lo": cost.lo, "c_total_hi": cost.hi,
            "action_cost": sum(r.action_cost for r in recs) / n,
            "selection_cost": sum(r.selection_cost for r in recs) / n,
            "blocks_used": sum(r.blocks_used for r in recs) / n,
            "n_subgoals": sum(r.n_subgoals for r in recs) / n,
        })
    return rows


def write_summary(rows, path_or_file) -> None:
    def emit(f):
        f.write(",".join(SUMMARY_COLUMNS) + "\n")
        for row in rows:
            f.write(",".join(_fmt_budget(row[c]) if c == "llp_budget" else str(row[c])
                             for c in SUMMARY_COLUMNS) + "\n")

    if hasattr(path_or_file, "write"):
        emit(path_or_file)
    else:
        p = Path(path_or_file)
        p.parent.mkdir(parents=True, exist_ok=True)
        with open(p, "w") as f:
            emit(f)
