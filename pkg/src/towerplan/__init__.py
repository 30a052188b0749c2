"""Block-tower reconstruction planners: a deterministic gridworld, action-level
search baselines, and hierarchical subgoal planners with cost accounting.
"""

from .harness import (
    LAMBDA_RANGES,
    RECORD_COLUMNS,
    ExperimentConfig,
    PlannerSpec,
    TrialRecord,
    default_lambdas,
    export_csv,
    lambda_grid,
    read_csv_records,
    read_records,
    run_matrix,
    summarize,
    write_records,
    write_summary,
)
from .search import (
    CapExceeded,
    CostLedger,
    OracleResult,
    PlanOutcome,
    ProbeResult,
    SearchConfig,
    astar_plan,
    bfs_plan,
    heuristic,
    oracle_solve,
    probe_solvability,
    random_episode,
    run_episode,
)
from .seeding import derive_seed
from .shapes import (
    STANDARD_SEED,
    STANDARD_SIZE,
    Catalog,
    CatalogEntry,
    GenerationFailed,
    GeneratorParams,
    ParseError,
    generate_catalog,
    generate_solvable,
    load_catalog,
    parse_silhouette,
    save_catalog,
    serialize_silhouette,
    standard_catalog,
)
from .stats import (
    CI,
    Correlation,
    DegenerateInput,
    PairedDiff,
    PairingError,
    bootstrap_ci,
    paired_diff,
    pearson_r,
)
from .subgoal import (
    DecompositionRecord,
    SequenceEvaluation,
    SubgoalEvaluation,
    SubgoalPlanConfig,
    TrialResult,
    enumerate_next_subgoals,
    enumerate_sequences,
    evaluate_subgoal,
    run_full_subgoal,
    run_no_subgoal,
    run_scoping,
    run_trial,
)
from .world import (
    DEFAULT_INVENTORY,
    Action,
    BlockShape,
    IllegalAction,
    Inventory,
    Region,
    Silhouette,
    WorldState,
    apply,
    drop_height,
    empty_state,
    filled_area,
    footprint_bits,
    full_region,
    is_match,
    legal_actions,
    prefix_height,
    subgoal_region,
)

__version__ = "0.1.0"
