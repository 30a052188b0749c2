"""End-to-end benchmark gates for the shipped 16-shape catalog.

One test per headline guarantee, so a verbose run reads as a pass/fail
checklist. The expensive 16-structure x 8-seed trial matrices are computed
once per module and shared across tests; stated wall-clock ceilings are
asserted alongside the behavioural claims. Everything runs single-threaded.
"""

import dataclasses
import math
import time

import pytest

from towerplan.harness import (
    ExperimentConfig,
    PlannerSpec,
    lambda_grid,
    run_matrix,
    trial_seed,
    export_csv,
    write_records,
)
from towerplan.search import (
    CostLedger,
    SearchConfig,
    oracle_solve,
    probe_solvability,
)
from towerplan.shapes import (
    GeneratorParams,
    generate_catalog,
    parse_silhouette,
    standard_catalog,
)
from towerplan.stats import bootstrap_ci, pearson_r
from towerplan.subgoal import (
    SubgoalPlanConfig,
    empty_state,
    evaluate_subgoal,
    run_full_subgoal,
    run_no_subgoal,
    run_trial,
)
from towerplan.world import DEFAULT_INVENTORY, full_region

BFS3 = SearchConfig(algorithm="bfs", bfs_depth=3)
BUDGET = 100_000
SEEDS = 8
MASTER = 0
MID_LAMBDA = 1e-3

CATALOG = standard_catalog()


def _matrix(mode: str, lambdas: tuple[float, ...], llp: SearchConfig = BFS3,
            budget_b: float = BUDGET) -> list:
    spec = PlannerSpec(mode=mode, llp=llp, budget_b=budget_b, lambdas=lambdas)
    cfg = ExperimentConfig(catalog=CATALOG, planners=(spec,), seeds=SEEDS,
                           master_seed=MASTER)
    return run_matrix(cfg)


def _rate(records) -> float:
    return sum(r.success for r in records) / len(records)


def _mean(records, attr: str) -> float:
    return sum(getattr(r, attr) for r in records) / len(records)


@pytest.fixture(scope="module")
def full_run():
    t0 = time.perf_counter()
    records = _matrix("full", (MID_LAMBDA,))
    return records, time.perf_counter() - t0


@pytest.fixture(scope="module")
def scoping_run():
    return _matrix("scoping", (MID_LAMBDA,))


@pytest.fixture(scope="module")
def nosub_run():
    return _matrix("nosubgoal", (0.0,))


@pytest.fixture(scope="module")
def sweep_run():
    return _matrix("scoping", lambda_grid(0.0, 0.008, 16))


class TestReconstructionGuarantees:
    def test_full_planner_reconstructs_every_structure(self, full_run):
        records, elapsed = full_run
        assert len(records) == len(CATALOG) * SEEDS
        failures = [(r.structure, r.seed) for r in records if not r.success]
        print(f"full planner: {_rate(records):.4f} success, "
              f"{elapsed / 60:.1f} min (limit 30)")
        assert failures == []
        assert elapsed <= 30 * 60

    def test_scoping_selection_cost_tenfold_cheaper(self, full_run, scoping_run):
        full_records, _ = full_run
        full_sel = _mean(full_records, "selection_cost")
        scope_sel = _mean(scoping_run, "selection_cost")
        ratio = full_sel / scope_sel
        print(f"selection cost: full {full_sel:.0f} vs scoping {scope_sel:.0f} "
              f"-> ratio {ratio:.1f} (need >= 10)")
        assert ratio >= 10.0

    def test_success_ordering_across_planners(self, full_run, scoping_run,
                                              nosub_run):
        full_rate = _rate(full_run[0])
        scope_rate = _rate(scoping_run)
        nosub_rate = _rate(nosub_run)
        print(f"success: nosubgoal {nosub_rate:.3f} < scoping {scope_rate:.3f}"
              f" <= full {full_rate:.3f}")
        assert nosub_rate < scope_rate <= full_rate
        assert full_rate - scope_rate <= 0.25
        assert full_rate - nosub_rate >= 0.25


class TestSearchCostScaling:
    def test_lookahead_depth_cost_explosion(self):
        t0 = time.perf_counter()
        costs, accs = [], []
        for depth in (1, 2, 3):
            llp = SearchConfig(algorithm="bfs", bfs_depth=depth)
            records = _matrix("nosubgoal", (0.0,), llp=llp, budget_b=1)
            costs.append(_mean(records, "c_total"))
            accs.append(_rate(records))
        elapsed = time.perf_counter() - t0
        ratios = [costs[i + 1] / costs[i] for i in range(2)]
        print(f"single-episode depth sweep: costs {[f'{c:.0f}' for c in costs]}"
              f" ratios {[f'{r:.1f}' for r in ratios]}, accuracy {accs}, "
              f"{elapsed:.0f}s (limit 600)")
        assert all(r >= 5.0 for r in ratios)
        assert all(accs[i + 1] >= accs[i] - 0.05 for i in range(2))
        assert elapsed <= 10 * 60


class TestPlanningCostWeightTradeoffs:
    def test_lambda_governs_cost_success_tradeoff(self, sweep_run):
        by_lam: dict[float, list] = {}
        for r in sweep_run:
            by_lam.setdefault(r.lam, []).append(r)
        lams = sorted(by_lam)
        assert len(lams) == 16 and lams[0] == 0.0 and lams[-1] == 0.008

        def curve(attr):
            return [_mean(by_lam[l], attr) for l in lams]

        checks = {
            "action_cost": (curve("action_cost"), -1),
            "success": (curve("success"), -1),
            "n_subgoals": (curve("n_subgoals"), +1),
            "selection_cost": (curve("selection_cost"), +1),
        }
        for name, (ys, sign) in checks.items():
            corr = pearson_r(lams, ys)
            print(f"r(lambda, {name}) = {corr.r:+.3f} (p={corr.p:.2e})")
            assert corr.r * sign > 0, f"{name}: wrong correlation sign"
            assert abs(corr.r) >= 0.5, f"{name}: |r| below 0.5"
            assert corr.p < 0.05, f"{name}: not significant"

    def test_sequence_choice_invariant_to_planning_cost_weight(self):
        # shapes small enough that every layer sequence is probe-solvable
        pool = generate_catalog(
            GeneratorParams(width=5, height=5, min_blocks=2, max_blocks=6,
                            seed=11), 60)
        lambdas = (1e-4, 1e-3, 1e-2)
        examined = 0
        for entry in pool.entries:
            sil = entry.silhouette
            if sil.height < 3:
                continue
            cfg = SubgoalPlanConfig(mode="full", lam=MID_LAMBDA,
                                    budget_b=BUDGET, llp=BFS3)
            probe = run_full_subgoal(sil, cfg, 4242)
            values = probe.decomposition.sequence_values
            if not values or not all(math.isfinite(v) for v in values):
                continue
            chosen = set()
            for lam in lambdas:
                c = dataclasses.replace(cfg, lam=lam)
                chosen.add(run_full_subgoal(sil, c, 4242).decomposition.heights)
            assert len(chosen) == 1, f"{sil.id}: choice varies with lambda"
            examined += 1
            if examined == 5:
                break
        print(f"lambda-invariant sequence choice on {examined} structures "
              f"with all sequences solvable")
        assert examined == 5


class TestOracleEquivalence:
    def test_probe_and_astar_match_exhaustive_oracle(self):
        t0 = time.perf_counter()
        min_area = min(b.width * b.height for b in DEFAULT_INVENTORY.blocks)
        pool = generate_catalog(
            GeneratorParams(width=5, height=5, min_blocks=1, max_blocks=6,
                            seed=0), 200)
        astar = SearchConfig(algorithm="astar", astar_budget=math.inf,
                             admissible_heuristic=True)
        checked_optimal = 0
        for i, entry in enumerate(pool.entries):
            sil = entry.silhouette
            region = full_region(sil)
            state = empty_state(sil, DEFAULT_INVENTORY)
            oracle = oracle_solve(region, DEFAULT_INVENTORY)

            depth = -(-sil.area // min_area)
            bfs = SearchConfig(algorithm="bfs", bfs_depth=depth, bfs_dedup=True)
            probe = probe_solvability(bfs, state, region, 1_000_000, (0, i))
            assert probe.solved == oracle.solvable, sil.id

            if oracle.solvable:
                plan = probe_solvability(astar, state, region, 1_000_000, (1, i))
                assert plan.solved, sil.id
                assert len(plan.plan.actions) == oracle.min_blocks, sil.id
                checked_optimal += 1
        elapsed = time.perf_counter() - t0
        print(f"200 shapes agree with oracle; {checked_optimal} optimal plans "
              f"matched; {elapsed:.0f}s (limit 300)")
        assert elapsed <= 5 * 60


class TestDeterminismAndAccounting:
    def _mixed_config(self):
        catalog = generate_catalog(
            GeneratorParams(width=5, height=5, min_blocks=2, max_blocks=5,
                            seed=7), 10)
        planners = (
            PlannerSpec(mode="scoping", llp=BFS3, budget_b=BUDGET,
                        lambdas=(0.0, MID_LAMBDA)),
            PlannerSpec(mode="full", llp=BFS3, budget_b=BUDGET,
                        lambdas=(MID_LAMBDA,)),
            PlannerSpec(mode="nosubgoal", llp=BFS3, budget_b=BUDGET,
                        lambdas=(0.0,)),
        )
        return ExperimentConfig(catalog=catalog, planners=planners, seeds=3,
                                master_seed=17)

    def test_rerun_is_byte_identical_excluding_wall_time(self, tmp_path):
        cfg = self._mixed_config()
        first = run_matrix(cfg)
        second = run_matrix(cfg)
        assert len(first) >= 100
        strip = lambda rs: [dataclasses.replace(r, wall_time=0.0) for r in rs]
        paths = []
        for tag, records in (("a", first), ("b", second)):
            csv_path = tmp_path / f"{tag}.csv"
            jsonl_path = tmp_path / f"{tag}.jsonl"
            export_csv(strip(records), csv_path)
            write_records(strip(records), jsonl_path)
            paths.append((csv_path, jsonl_path))
        assert paths[0][0].read_bytes() == paths[1][0].read_bytes()
        assert paths[0][1].read_bytes() == paths[1][1].read_bytes()
        print(f"{len(first)} trials rerun byte-identical "
              f"(csv and line-delimited records)")

    def test_every_record_conserves_cost(self, full_run, scoping_run,
                                         nosub_run, sweep_run):
        records = list(full_run[0]) + list(scoping_run) + list(nosub_run) \
            + list(sweep_run) + run_matrix(self._mixed_config())
        for r in records:
            assert r.action_cost + r.selection_cost == r.c_total
        print(f"action + selection == total on {len(records)} records")

    def test_no_subgoal_equals_whole_shape_probe_of_full_planner(self):
        # The direct planner must replay the full planner's evaluation of the
        # one-subgoal sequence (the whole shape) seed-for-seed.
        nosub_spec = PlannerSpec(mode="nosubgoal", llp=BFS3, budget_b=BUDGET,
                                 lambdas=(0.0,))
        cfg = SubgoalPlanConfig(mode="nosubgoal", llp=BFS3, budget_b=BUDGET)
        compared = 0
        for entry in CATALOG.entries[:4]:
            sil = entry.silhouette
            for k in range(2):
                ts = trial_seed(MASTER, nosub_spec, sil.id, k)
                direct = run_no_subgoal(sil, cfg, ts)
                ev = evaluate_subgoal(
                    empty_state(sil, DEFAULT_INVENTORY), sil.height, cfg,
                    (ts, 0, sil.height), CostLedger())
                assert direct.success == ev.solved
                assert direct.c_total == ev.probe.cost_spent
                if ev.solved:
                    assert direct.actions == ev.probe.plan.actions
                compared += 1

        # On a single-row shape the full planner has exactly one sequence, so
        # the two planners coincide end to end.
        row = parse_silhouette("6 1\n######\n", "row6")
        full_res = run_trial(row, dataclasses.replace(cfg, mode="full"), 99)
        nosub_res = run_trial(row, cfg, 99)
        assert full_res.success and nosub_res.success
        assert full_res.actions == nosub_res.actions
        assert full_res.c_total == nosub_res.c_total
        print(f"whole-shape probes identical on {compared} trials; "
              f"single-row planners coincide end to end")


class TestStatisticsContracts:
    def test_constant_inputs_give_zero_width_interval(self):
        groups = [[0.4375] * SEEDS for _ in range(len(CATALOG))]
        ci = bootstrap_ci(groups)
        print(f"bootstrap CI on constant groups: "
              f"[{ci.lo}, {ci.hi}] around {ci.mean}")
        assert ci.lo == ci.hi == ci.mean == 0.4375
