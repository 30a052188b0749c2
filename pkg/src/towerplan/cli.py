"""Command-line interface.

Subcommands: gen, solve, bench, stats, oracle, export-plot-data. Exit codes:
0 success, 1 configuration error, 2 io error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .harness import (
    ExperimentConfig,
    PlannerSpec,
    export_csv,
    lambda_grid,
    read_csv_records,
    read_records,
    run_matrix,
    summarize,
    write_summary,
)
from .search import CapExceeded, SearchConfig, oracle_solve
from .shapes import (
    STANDARD_SEED,
    STANDARD_SIZE,
    GeneratorParams,
    generate_catalog,
    load_catalog,
    parse_silhouette,
    save_catalog,
    serialize_silhouette,
)
from .stats import DegenerateInput, pearson_r
from .subgoal import SubgoalPlanConfig, run_trial
from .world import DEFAULT_INVENTORY, Inventory, full_region

_PLANNER_NAMES = {"none": "nosubgoal", "scoping": "scoping", "full": "full"}
_ACT_NAMES = {"whole": "whole_plan", "single": "single_action"}


def _add_shape_source(p: argparse.ArgumentParser):
    p.add_argument("--shape", help="silhouette text file")
    p.add_argument("--catalog", help="catalog directory")
    p.add_argument("--structure", help="structure id within --catalog")


def _add_planner_flags(p: argparse.ArgumentParser):
    p.add_argument("--planner", choices=sorted(_PLANNER_NAMES), default="none")
    p.add_argument("--llp", choices=("random", "bfs", "astar"), default="bfs")
    p.add_argument("--depth", type=int, default=3, help="bfs lookahead depth")
    p.add_argument("--iters", type=float, default=4096,
                   help="astar expansion budget (inf allowed)")
    p.add_argument("--budget-b", type=int, default=100_000,
                   help="probe state budget per subgoal")
    p.add_argument("--lambda", dest="lam", type=float, default=0.0,
                   help="planning cost weight")
    p.add_argument("--act-mode", choices=sorted(_ACT_NAMES), default="whole")
    p.add_argument("--inventory", default=str(DEFAULT_INVENTORY),
                   help="comma-separated block list, e.g. 1x2,2x1,2x2")
    p.add_argument("--seed", type=int, default=0)


def _load_shape(args):
    if args.shape:
        text = Path(args.shape).read_text()
        return parse_silhouette(text, Path(args.shape).stem)
    if args.catalog and args.structure:
        return load_catalog(args.catalog).get(args.structure)
    raise ValueError("need --shape FILE or --catalog DIR with --structure ID")


def _search_config(args) -> SearchConfig:
    return SearchConfig(algorithm=args.llp, bfs_depth=args.depth,
                        astar_budget=args.iters)


def _cmd_gen(args) -> int:
    params = GeneratorParams(width=args.width, height=args.height,
                             min_blocks=args.min_blocks, max_blocks=args.max_blocks,
                             inventory=Inventory.parse(args.inventory),
                             seed=args.seed)
    catalog = generate_catalog(params, args.size)
    save_catalog(catalog, args.out)
    for e in catalog.entries:
        s = e.silhouette
        print(f"{e.id}: {s.width}x{s.height}, {s.area} cells, {e.n_blocks} blocks")
    print(f"wrote {len(catalog)} shapes to {args.out}")
    return 0


def _cmd_solve(args) -> int:
    sil = _load_shape(args)
    inventory = Inventory.parse(args.inventory)
    cfg = SubgoalPlanConfig(llp=_search_config(args), lam=args.lam,
                            budget_b=args.budget_b,
                            mode=_PLANNER_NAMES[args.planner],
                            act_mode=_ACT_NAMES[args.act_mode])
    result = run_trial(sil, cfg, args.seed, inventory)
    name = sil.id or "shape"
    print(f"{name}: {sil.width}x{sil.height}, {sil.area} cells")
    print(serialize_silhouette(sil), end="")
    print(f"planner={cfg.mode} llp={cfg.llp.algorithm} lambda={cfg.lam} "
          f"budget_b={cfg.budget_b} seed={args.seed}")
    print(f"success: {'yes' if result.success else 'no'}")
    dec = "-".join(str(h) for h in result.decomposition.heights) or "(none)"
    print(f"decomposition: {dec}")
    print(f"costs: action={result.action_cost} selection={result.selection_cost} "
          f"total={result.c_total}")
    print(f"plan ({result.blocks_used} blocks):")
    for i, a in enumerate(result.actions, 1):
        print(f"  {i:2d}. {inventory.blocks[a.block]} at x={a.x}")
    return 0


def _parse_lambda_grid(text: str) -> tuple[float, ...]:
    try:
        lo, hi, n = text.split(":")
        return lambda_grid(float(lo), float(hi), int(n))
    except ValueError as e:
        raise ValueError(f"--lambda-grid expects lo:hi:n, got {text!r}") from e


def _cmd_bench(args) -> int:
    if not args.catalog:
        raise ValueError("bench needs --catalog DIR")
    catalog = load_catalog(args.catalog)
    lambdas = (_parse_lambda_grid(args.lambda_grid) if args.lambda_grid
               else (args.lam,))
    spec = PlannerSpec(mode=_PLANNER_NAMES[args.planner], llp=_search_config(args),
                       budget_b=args.budget_b, lambdas=lambdas,
                       act_mode=_ACT_NAMES[args.act_mode],
                       memoize_probes=args.memoize_probes)
    config = ExperimentConfig(catalog=catalog, planners=(spec,), seeds=args.seeds,
                              master_seed=args.seed,
                              inventory=Inventory.parse(args.inventory),
                              jobs=args.jobs, out=args.out)

    def progress(done, total):
        if args.quiet:
            return
        if done == total or done % 16 == 0:
            print(f"\r{done}/{total} trials", end="" if done < total else "\n",
                  file=sys.stderr, flush=True)

    records = run_matrix(config, progress)
    if args.csv:
        export_csv(records, args.csv)
    ok = sum(r.success for r in records)
    errs = sum(1 for r in records if r.error)
    print(f"{len(records)} trials, {ok} solved"
          + (f", {errs} errored" if errs else ""))
    if args.out:
        print(f"records: {args.out}")
    if args.csv:
        print(f"csv: {args.csv}")
    return 0


def _read_any_records(path: str):
    if path.endswith(".csv"):
        return read_csv_records(path)
    return read_records(path)


def _cmd_stats(args) -> int:
    records = _read_any_records(args.records)
    if not records:
        print(f"error: no records in {args.records}", file=sys.stderr)
        return 2
    rows = summarize(records, seed=args.seed)
    if args.out:
        write_summary(rows, args.out)
        print(f"summary: {args.out}")
    else:
        write_summary(rows, sys.stdout)
    if args.correlate:
        xname, _, yname = args.correlate.partition(":")
        if not yname:
            raise ValueError("--correlate expects X:Y column names")
        _print_correlations(records, xname, yname, args.seed)
    return 0


_METRIC_FIELDS = {"lambda": "lam", "success": "success", "c_total": "c_total",
                  "action_cost": "action_cost", "selection_cost": "selection_cost",
                  "blocks_used": "blocks_used", "n_subgoals": "n_subgoals"}


def _print_correlations(records, xname: str, yname: str, seed: int):
    try:
        xf, yf = _METRIC_FIELDS[xname], _METRIC_FIELDS[yname]
    except KeyError as e:
        raise ValueError(f"unknown metric {e.args[0]!r}; choose from "
                         f"{sorted(_METRIC_FIELDS)}") from None
    groups: dict[tuple, list] = {}
    for r in records:
        groups.setdefault((r.planner, r.llp, r.llp_budget), []).append(r)
    for key, recs in groups.items():
        # aggregate y per x value, then correlate the aggregates
        per_x: dict[float, list[float]] = {}
        for r in recs:
            per_x.setdefault(float(getattr(r, xf)), []).append(float(getattr(r, yf)))
        xs = sorted(per_x)
        ys = [sum(per_x[x]) / len(per_x[x]) for x in xs]
        label = "/".join(str(k) for k in key)
        try:
            c = pearson_r(xs, ys, seed=seed)
        except DegenerateInput as e:
            print(f"{label}: r({xname},{yname}) undefined ({e})")
            continue
        print(f"{label}: r({xname},{yname}) = {c.r:.3f} "
              f"[{c.lo:.3f}, {c.hi:.3f}], p = {c.p:.4g}, n = {c.n}")


def _cmd_oracle(args) -> int:
    sil = _load_shape(args)
    inventory = Inventory.parse(args.inventory)
    try:
        res = oracle_solve(full_region(sil), inventory, args.node_cap)
    except CapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    print(f"solvable: {'yes' if res.solvable else 'no'}")
    if res.solvable:
        print(f"min blocks: {res.min_blocks}")
        for i, a in enumerate(res.actions, 1):
            print(f"  {i:2d}. {inventory.blocks[a.block]} at x={a.x}")
    return 0


def _cmd_export(args) -> int:
    records = _read_any_records(args.records)
    if not records:
        print(f"error: no records in {args.records}", file=sys.stderr)
        return 2
    export_csv(records, args.out)
    print(f"csv: {args.out}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="towerplan",
        description="Hierarchical block-tower planners and experiment harness.")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("gen", help="generate a solvable silhouette catalog")
    p.add_argument("--out", required=True, help="catalog directory to write")
    p.add_argument("--seed", type=int, default=STANDARD_SEED)
    p.add_argument("--size", type=int, default=STANDARD_SIZE)
    p.add_argument("--width", type=int, default=8)
    p.add_argument("--height", type=int, default=8)
    p.add_argument("--min-blocks", type=int, default=6)
    p.add_argument("--max-blocks", type=int, default=12)
    p.add_argument("--inventory", default=str(DEFAULT_INVENTORY))
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("solve", help="run one planner trial and print the plan")
    _add_shape_source(p)
    _add_planner_flags(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("bench", help="run an experiment matrix over a catalog")
    p.add_argument("--catalog", required=True)
    _add_planner_flags(p)
    p.add_argument("--lambda-grid", help="lo:hi:n evenly spaced cost weights")
    p.add_argument("--seeds", type=int, default=32, help="trials per structure")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--memoize-probes", action="store_true")
    p.add_argument("--out", help="line-delimited record file to stream")
    p.add_argument("--csv", help="also export flat csv here")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("stats", help="summaries and correlations from records")
    p.add_argument("--records", required=True, help="record file (.jsonl or .csv)")
    p.add_argument("--out", help="write summary csv here instead of stdout")
    p.add_argument("--correlate", help="X:Y metric pair, e.g. lambda:success")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("oracle", help="exact solvability and minimum block count")
    _add_shape_source(p)
    p.add_argument("--inventory", default=str(DEFAULT_INVENTORY))
    p.add_argument("--node-cap", type=int, default=1_000_000)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("export-plot-data",
                       help="flatten records to the csv the plots package reads")
    p.add_argument("--records", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_export)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        code = e.code if isinstance(e.code, int) else 1
        return 0 if code == 0 else 1
    if getattr(args, "func", None) is None:
        parser.print_help()
        return 1
    try:
        return args.func(args)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
