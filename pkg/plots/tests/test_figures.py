"""Figure construction checks: marker counts, stripe segments, panel layout."""

import warnings

import matplotlib.pyplot as plt
import pytest

from towerfigs import (
    KINDS,
    PlotSpec,
    plot_decompositions,
    plot_lambda_sweep,
    plot_success_vs_cost,
    render,
)
from towerfigs.records import MissingColumn, decomposition_heights


@pytest.fixture(autouse=True)
def close_figures():
    yield
    plt.close("all")


def make_row(**overrides):
    row = {"planner": "scoping", "llp": "bfs", "llp_budget": "100000",
           "structure": "s00", "seed": "0", "lambda": "0.001", "success": "1",
           "blocks_used": "9", "n_subgoals": "3", "action_cost": "120.0",
           "selection_cost": "450.0", "c_total": "570.0", "wall_time": "0.1",
           "decomposition": "2-5-8"}
    row.update(overrides)
    return row


class TestSuccessVsCost:
    def test_one_marker_per_planner_llp_pair_in_each_panel(self, fixture_rows):
        pairs = {(r["planner"], r["llp"]) for r in fixture_rows}
        assert len(pairs) == 6
        with pytest.warns(UserWarning, match="error bars omitted"):
            fig = plot_success_vs_cost(fixture_rows)
        assert len(fig.axes) == 2
        for ax in fig.axes:
            assert len(ax.lines) == len(pairs)

    def test_interval_columns_become_error_bars_without_warning(self):
        rows = []
        for planner in ("scoping", "full"):
            rows.append(make_row(
                planner=planner,
                action_cost="100.0", action_cost_lo="80.0",
                action_cost_hi="130.0",
                selection_cost="400.0", selection_cost_lo="350.0",
                selection_cost_hi="460.0"))
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            fig = plot_success_vs_cost(rows)
        for ax in fig.axes:
            assert len(ax.lines) == 2
            assert ax.collections  # the error-bar segments

    def test_empty_rows_are_rejected(self):
        with pytest.raises(ValueError):
            plot_success_vs_cost([])


class TestDecompositionStripes:
    def test_fixture_stripe_segments_match_row_decompositions(
            self, fixture_rows):
        expected = sum(len(decomposition_heights(r)) for r in fixture_rows)
        fig = plot_decompositions(fixture_rows)
        (ax,) = fig.axes
        assert len(ax.patches) == expected
        # one x-tick label per structure group
        structures = {r["structure"] for r in fixture_rows}
        labels = [t.get_text() for t in ax.get_xticklabels()]
        assert sorted(labels) == sorted(structures)

    def test_cumulative_heights_become_stacked_segments(self):
        fig = plot_decompositions([make_row(decomposition="2-5-8")])
        (ax,) = fig.axes
        assert [p.get_height() for p in ax.patches] == [2, 3, 3]
        assert [p.get_y() for p in ax.patches] == [0, 2, 5]

    def test_failed_trial_draws_partial_stripe(self):
        fig = plot_decompositions(
            [make_row(success="0", decomposition="2-4")])
        (ax,) = fig.axes
        assert [p.get_height() for p in ax.patches] == [2, 2]

    def test_stripes_within_a_group_sorted_by_lambda(self):
        rows = [make_row(**{"lambda": "0.008", "decomposition": "8"}),
                make_row(**{"lambda": "0.0", "decomposition": "1-8"})]
        fig = plot_decompositions(rows)
        (ax,) = fig.axes
        by_x = sorted(ax.patches, key=lambda p: (p.get_x(), p.get_y()))
        assert [p.get_height() for p in by_x] == [1, 7, 8]

    def test_two_structures_make_two_column_groups(self):
        rows = [make_row(structure="s00"), make_row(structure="s01")]
        fig = plot_decompositions(rows)
        (ax,) = fig.axes
        labels = [t.get_text() for t in ax.get_xticklabels()]
        assert labels == ["s00", "s01"]
        # a one-slot gap separates the groups
        xs = sorted(p.get_x() for p in ax.patches)
        assert xs[-1] - xs[0] > 1.5

    def test_colors_follow_subgoal_ordinal(self):
        fig = plot_decompositions([make_row(decomposition="1-2-3-4-5-6-7-8")])
        (ax,) = fig.axes
        colors = [p.get_facecolor() for p in ax.patches]
        assert len(set(colors)) == 8
        first, last = colors[0], colors[-1]
        assert first[2] > first[0]  # first segment blue-dominant
        assert last[0] > last[2]    # last segment red/orange-dominant


class TestLambdaSweep:
    def test_five_panels_with_one_line_per_search_algorithm(
            self, fixture_rows):
        fig = plot_lambda_sweep(fixture_rows)
        assert len(fig.axes) == 5
        llps = {r["llp"] for r in fixture_rows}
        for ax in fig.axes:
            assert len(ax.lines) == len(llps) == 2

    def test_missing_metric_column_is_named(self, fixture_rows):
        rows = [{k: v for k, v in r.items() if k != "blocks_used"}
                for r in fixture_rows]
        with pytest.raises(MissingColumn) as exc:
            plot_lambda_sweep(rows)
        assert exc.value.column == "blocks_used"

    def test_lines_trace_per_lambda_means(self):
        rows = [make_row(**{"lambda": "0.0"}, action_cost="100"),
                make_row(**{"lambda": "0.0"}, action_cost="300", seed="1"),
                make_row(**{"lambda": "0.002"}, action_cost="50")]
        fig = plot_lambda_sweep(rows)
        line = fig.axes[0].lines[0]
        assert list(line.get_xdata()) == [0.0, 0.002]
        assert list(line.get_ydata()) == [200.0, 50.0]


class TestRender:
    def test_unknown_kind_is_rejected(self, tmp_path, fixture_path):
        with pytest.raises(ValueError, match="histogram"):
            PlotSpec(input=fixture_path, kind="histogram",
                     output=tmp_path / "x.png")

    def test_all_kinds_write_an_image(self, tmp_path, fixture_path):
        for kind in KINDS:
            out = tmp_path / f"{kind}.png"
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                render(PlotSpec(input=fixture_path, kind=kind, output=out))
            assert out.stat().st_size > 0

    def test_filters_narrow_the_input(self, tmp_path, fixture_path):
        out = tmp_path / "scoping.png"
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            fig = render(PlotSpec(input=fixture_path, kind="scatter",
                                  output=out,
                                  filters={"planner": "scoping"}))
        assert len(fig.axes[0].lines) == 2  # scoping under bfs and astar

    def test_filter_matching_nothing_is_an_error(self, tmp_path, fixture_path):
        with pytest.raises(ValueError, match="no rows"):
            render(PlotSpec(input=fixture_path, kind="scatter",
                            output=tmp_path / "x.png",
                            filters={"planner": "does-not-exist"}))
