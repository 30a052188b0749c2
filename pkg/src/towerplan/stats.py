"""Bootstrap statistics over trial records.

The confidence interval scheme follows one convention throughout: an iteration
resamples one seed's value per structure, averages across structures, and the
interval is the 2.5/97.5 percentile band of 1000 such iteration means. On
constant data this collapses to a zero-width interval.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np
from scipy import stats as _scipy_stats


class PairingError(ValueError):
    """The two record sets do not pair one-to-one by (structure, seed)."""


class DegenerateInput(ValueError):
    """Correlation is undefined for this input (constant series or n < 3)."""


@dataclass(frozen=True)
class CI:
    mean: float
    lo: float
    hi: float


@dataclass(frozen=True)
class PairedDiff:
    mean: float
    lo: float
    hi: float
    p: float


@dataclass(frozen=True)
class Correlation:
    r: float
    lo: float
    hi: float
    p: float
    n: int


def _as_groups(groups) -> list[np.ndarray]:
    if isinstance(groups, Mapping):
        seqs = [groups[k] for k in sorted(groups)]
    else:
        seqs = list(groups)
    if not seqs or any(len(s) == 0 for s in seqs):
        raise ValueError("every group needs at least one value")
    return [np.asarray(s, dtype=float) for s in seqs]


def _iteration_means(arrs: list[np.ndarray], iterations: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    total = np.zeros(iterations)
    for a in arrs:
        total += a[rng.integers(0, len(a), size=iterations)]
    return total / len(arrs)


def bootstrap_ci(groups, iterations: int = 1000, seed: int = 0) -> CI:
    """Mean across structure groups with a resampled-seed percentile interval.

    ``groups`` maps structure ids to per-seed values (or is a plain sequence of
    groups). Each bootstrap iteration draws one value per group and averages
    across groups; the interval is the 2.5/97.5 percentile of those means.
    """
    arrs = _as_groups(groups)
    means = _iteration_means(arrs, iterations, seed)
    point = float(np.mean([a.mean() for a in arrs]))
    return CI(point, float(np.percentile(means, 2.5)), float(np.percentile(means, 97.5)))


def paired_diff(records_a: Sequence, records_b: Sequence, metric: str,
                iterations: int = 1000, seed: int = 0) -> PairedDiff:
    """Mean A-minus-B difference over trials paired by (structure, seed).

    The interval bootstraps the per-structure difference groups as in
    bootstrap_ci; p is the doubled smaller tail fraction of the bootstrap
    means around zero, floored at 1/iterations.
    """
    def keyed(records):
        out = {}
        for r in records:
            k = (r.structure, r.seed)
            if k in out:
                raise PairingError(f"duplicate trial for {k}")
            out[k] = float(getattr(r, metric))
        return out

    a, b = keyed(records_a), keyed(records_b)
    if set(a) != set(b):
        raise PairingError("record sets pair by (structure, seed); keys differ")
    diffs: dict[str, list[float]] = {}
    for (structure, _seed), va in a.items():
        diffs.setdefault(structure, []).append(va - b[(structure, _seed)])
    arrs = _as_groups(diffs)
    means = _iteration_means(arrs, iterations, seed)
    point = float(np.mean([g.mean() for g in arrs]))
    lo_frac = float(np.mean(means <= 0))
    hi_frac = float(np.mean(means >= 0))
    p = min(1.0, max(2 * min(lo_frac, hi_frac), 1 / iterations))
    return PairedDiff(point, float(np.percentile(means, 2.5)),
                      float(np.percentile(means, 97.5)), p)


def pearson_r(xs: Sequence[float], ys: Sequence[float],
              iterations: int = 1000, seed: int = 0) -> Correlation:
    """Sample correlation with a bootstrap interval over point pairs.

    p comes from the exact null distribution on n-2 degrees of freedom.
    Constant input or fewer than 3 points raise DegenerateInput.
    """
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if len(x) != len(y):
        raise ValueError("series lengths differ")
    n = len(x)
    if n < 3:
        raise DegenerateInput("need at least 3 points")
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise DegenerateInput("constant series has no defined correlation")
    res = _scipy_stats.pearsonr(x, y)
    rng = np.random.default_rng(seed)
    rs = np.empty(iterations)
    count = 0
    for _ in range(iterations):
        idx = rng.integers(0, n, size=n)
        bx, by = x[idx], y[idx]
        if np.ptp(bx) == 0 or np.ptp(by) == 0:
            continue  # degenerate resample carries no correlation information
        rs[count] = np.corrcoef(bx, by)[0, 1]
        count += 1
    if count == 0:
        raise DegenerateInput("all bootstrap resamples degenerate")
    band = rs[:count]
    return Correlation(float(res.statistic), float(np.percentile(band, 2.5)),
                       float(np.percentile(band, 97.5)), float(res.pvalue), n)
