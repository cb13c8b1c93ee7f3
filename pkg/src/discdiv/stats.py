"""Group comparison and cross-level consistency of journal diversity."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
from scipy.stats import rankdata

from .errors import StatsError
from .io import write_table
from .topics import LEVELS

EXACT_MAX_GROUP = 8

QUADRANTS = (
    "high_macro_high_meso",
    "high_macro_low_meso",
    "low_macro_high_meso",
    "low_macro_low_meso",
)


@dataclass(frozen=True)
class MWTestResult:
    U: float  # statistic for the first sample
    z: float
    p_two_sided: float
    n_a: int
    n_b: int
    method: str  # "exact" or "normal_approx"


@lru_cache(maxsize=None)
def _u_null_counts(n_a: int, n_b: int) -> tuple:
    """Number of rank arrangements giving U = 0..n_a*n_b (tie-free null)."""
    if n_a == 0 or n_b == 0:
        return (1,)
    # U(m, n) counts: f(m, n, u) = f(m-1, n, u-n) + f(m, n-1, u)
    with_largest = _u_null_counts(n_a - 1, n_b)
    without = _u_null_counts(n_a, n_b - 1)
    out = [0] * (n_a * n_b + 1)
    for u, c in enumerate(with_largest):
        out[u + n_b] += c
    for u, c in enumerate(without):
        out[u] += c
    return tuple(out)


def _exact_p(u: int, n_a: int, n_b: int) -> float:
    counts = _u_null_counts(n_a, n_b)
    total = n_a * n_b
    dev = abs(2 * u - total)
    hits = sum(c for v, c in enumerate(counts) if abs(2 * v - total) >= dev)
    return min(1.0, hits / math.comb(n_a + n_b, n_a))


def mann_whitney_two_sided(a: Sequence[float], b: Sequence[float]) -> MWTestResult:
    """Two-sided Mann-Whitney-Wilcoxon test of ``a`` against ``b``.

    U is computed from average ranks. Small tie-free samples (both sizes at
    most 8) get the exact permutation p-value; otherwise the normal
    approximation with continuity correction and tie-corrected variance.
    """
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    n_a, n_b = a.size, b.size
    if n_a == 0 or n_b == 0:
        raise StatsError("Mann-Whitney needs two non-empty groups")
    if not (np.isfinite(a).all() and np.isfinite(b).all()):
        raise StatsError("Mann-Whitney input contains non-finite values")
    pooled = np.concatenate((a, b))
    ranks = rankdata(pooled)
    u_a = float(ranks[:n_a].sum() - n_a * (n_a + 1) / 2.0)
    _, tie_sizes = np.unique(pooled, return_counts=True)
    has_ties = bool((tie_sizes > 1).any())
    mean = n_a * n_b / 2.0

    if not has_ties and max(n_a, n_b) <= EXACT_MAX_GROUP:
        u_int = int(round(u_a))
        sd = math.sqrt(n_a * n_b * (n_a + n_b + 1) / 12.0)
        z = (u_a - mean) / sd
        return MWTestResult(u_a, z, _exact_p(u_int, n_a, n_b), n_a, n_b, "exact")

    n = n_a + n_b
    tie_term = float(((tie_sizes.astype(np.float64) ** 3) - tie_sizes).sum())
    var = n_a * n_b / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if var <= 0:
        return MWTestResult(u_a, 0.0, 1.0, n_a, n_b, "normal_approx")
    dev = max(abs(u_a - mean) - 0.5, 0.0)
    z = math.copysign(dev / math.sqrt(var), u_a - mean) if dev else 0.0
    p = min(1.0, math.erfc(abs(z) / math.sqrt(2.0)))
    return MWTestResult(u_a, z, p, n_a, n_b, "normal_approx")


def spearman_rho(x: Sequence[float], y: Sequence[float]) -> float:
    """Spearman correlation: Pearson correlation of average ranks.

    Tie-free input uses ``1 - 6 sum d^2 / (n (n^2 - 1))``, which is the same
    quantity evaluated exactly.
    """
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    n = x.size
    if n != y.size:
        raise StatsError(f"spearman_rho needs equal lengths, got {n} and {y.size}")
    if n < 2:
        raise StatsError("spearman_rho needs at least two observations")
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise StatsError("spearman_rho is undefined for constant input")
    rx, ry = rankdata(x), rankdata(y)
    if np.unique(x).size == n and np.unique(y).size == n:
        d2 = int(((rx - ry) ** 2).sum())
        return 1.0 - 6.0 * d2 / (n * (n * n - 1))
    rx -= rx.mean()
    ry -= ry.mean()
    rho = float(rx @ ry / math.sqrt((rx @ rx) * (ry @ ry)))
    return max(-1.0, min(1.0, rho))


def top_k(scores: Mapping[str, float], k: int) -> list[str]:
    """Ids of the ``k`` largest scores; ties broken by ascending id."""
    return [jid for jid, _ in sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))[:k]]


def top_k_overlap(scores_a: Mapping[str, float], scores_b: Mapping[str, float], k: int) -> int:
    """Size of the intersection of the two top-``k`` sets."""
    if k <= 0:
        raise StatsError(f"k must be positive, got {k}")
    if set(scores_a) != set(scores_b):
        raise StatsError("score maps cover different journal sets")
    if k > len(scores_a):
        raise StatsError(f"k={k} exceeds the {len(scores_a)} journals scored")
    return len(set(top_k(scores_a, k)) & set(top_k(scores_b, k)))


def default_top_k(n: int) -> int:
    return min(1000, max(1, n // 10))


def default_thresholds(table) -> tuple[float, float]:
    """Per-axis medians over multidisciplinary journals (all journals if there are none)."""
    mask = table.multidisciplinary_mask
    if not mask.any():
        mask = np.ones(len(table), dtype=bool)
    return float(np.median(table.values("macro")[mask])), float(np.median(table.values("meso")[mask]))


def quadrant_label(d_macro: float, d_meso: float, macro_threshold: float, meso_threshold: float) -> str:
    macro = "high_macro" if d_macro >= macro_threshold else "low_macro"
    meso = "high_meso" if d_meso >= meso_threshold else "low_meso"
    return f"{macro}_{meso}"


def quadrant_classify(table, macro_threshold: float | None = None, meso_threshold: float | None = None) -> dict[str, str]:
    """Label every journal by (macro, meso) diversity relative to two thresholds (>= is high)."""
    if len(table) == 0:
        raise StatsError("cannot classify an empty table")
    if macro_threshold is None or meso_threshold is None:
        dm, ds = default_thresholds(table)
        macro_threshold = dm if macro_threshold is None else macro_threshold
        meso_threshold = ds if meso_threshold is None else meso_threshold
    if not (math.isfinite(macro_threshold) and math.isfinite(meso_threshold)):
        raise StatsError("quadrant thresholds must be finite")
    return {r.journal_id: quadrant_label(r.d_macro, r.d_meso, macro_threshold, meso_threshold) for r in table}


@dataclass(frozen=True)
class LevelComparison:
    level: str
    n_multi: int
    n_other: int
    mean_multi: float
    mean_other: float
    median_multi: float
    median_other: float
    test: MWTestResult


@dataclass(frozen=True)
class GroupReport:
    levels: tuple
    values: Mapping[str, Mapping[str, list]] = field(default_factory=dict)

    def level(self, name: str) -> LevelComparison:
        return next(c for c in self.levels if c.level == name)


def group_compare_report(table) -> GroupReport:
    """Multidisciplinary vs other journals at every level: sizes, centres, Mann-Whitney."""
    mask = table.multidisciplinary_mask
    if mask.all() or not mask.any():
        raise StatsError("group comparison needs both multidisciplinary and other journals")
    out, values = [], {}
    for lvl in LEVELS:
        v = table.values(lvl)
        multi, other = v[mask], v[~mask]
        out.append(LevelComparison(
            lvl, int(multi.size), int(other.size), float(multi.mean()), float(other.mean()),
            float(np.median(multi)), float(np.median(other)), mann_whitney_two_sided(multi, other),
        ))
        values[lvl] = {"multidisciplinary": multi.tolist(), "other": other.tolist()}
    return GroupReport(tuple(out), values)


STATS_COLUMNS = ("level", "n_multi", "n_other", "mean_multi", "mean_other", "median_multi",
                 "median_other", "U", "z", "p_two_sided", "method")


def write_group_report(report: GroupReport, path: str | Path, meta=None) -> Path:
    rows = (
        (c.level, c.n_multi, c.n_other, c.mean_multi, c.mean_other, c.median_multi, c.median_other,
         c.test.U, c.test.z, c.test.p_two_sided, c.test.method)
        for c in report.levels
    )
    return write_table(path, STATS_COLUMNS, rows, meta)


def write_group_values(report: GroupReport, table, path: str | Path, meta=None) -> Path:
    """Long-format raw values (journal_id, group, level, diversity) for violin plots."""
    rows = []
    for lvl in LEVELS:
        for r in table:
            rows.append((r.journal_id, "multidisciplinary" if r.is_multidisciplinary else "other", lvl, r.d(lvl)))
    return write_table(path, ("journal_id", "group", "level", "diversity"), rows, meta)


@dataclass(frozen=True)
class ConsistencyReport:
    k: int
    spearman: Mapping[tuple, float]
    overlap: Mapping[tuple, int]


def consistency_report(table, k: int | None = None, subset_mask=None) -> ConsistencyReport:
    """Spearman correlation and top-``k`` overlap for each pair of levels."""
    rows = list(table) if subset_mask is None else [r for r, m in zip(table, subset_mask) if m]
    k = default_top_k(len(rows)) if k is None else k
    scores = {lvl: {r.journal_id: r.d(lvl) for r in rows} for lvl in LEVELS}
    rho, overlap = {}, {}
    for a, b in combinations(LEVELS, 2):
        rho[(a, b)] = spearman_rho([r.d(a) for r in rows], [r.d(b) for r in rows])
        overlap[(a, b)] = top_k_overlap(scores[a], scores[b], k)
    return ConsistencyReport(k, rho, overlap)


def write_consistency(all_journals: ConsistencyReport, multi: ConsistencyReport | None, path, meta=None) -> Path:
    rows = []
    for pair, rho in all_journals.spearman.items():
        rows.append(("all", pair[0], pair[1], rho, all_journals.k, all_journals.overlap[pair]))
    if multi is not None:
        for pair, rho in multi.spearman.items():
            rows.append(("multidisciplinary", pair[0], pair[1], rho, multi.k, multi.overlap[pair]))
    return write_table(path, ("subset", "level_a", "level_b", "spearman", "top_k", "overlap"), rows, meta)
