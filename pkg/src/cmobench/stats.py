"""Pairwise comparison machinery: Wilcoxon signed-rank verdicts and the
Vargha-Delaney A12 effect size."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

EXACT_LIMIT = 25  # exact null distribution up to this many nonzero differences


class Orientation(enum.Enum):
    LOWER_BETTER = "lower"
    HIGHER_BETTER = "higher"


class A12Band(enum.Enum):
    EQUAL = "equal"
    SMALL = "small"
    MEDIUM = "medium"
    LARGE = "large"


@dataclass(frozen=True)
class ComparisonSummary:
    problem: str
    m: int
    metric: str
    first: str
    second: str
    verdict: str  # '+', '-' or '='
    p_value: float
    a12: float
    a12_band: A12Band
    median_first: float
    iqr_first: float
    median_second: float
    iqr_second: float


def _signed_ranks(d: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Average ranks of |d| (zeros already removed) and the positive mask."""
    absd = np.abs(d)
    order = np.argsort(absd, kind="stable")
    ranks = np.empty(len(d))
    i = 0
    while i < len(d):
        j = i
        while j + 1 < len(d) and absd[order[j + 1]] == absd[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks, d > 0


def _exact_p_two_sided(ranks: np.ndarray, w_plus: float) -> float:
    """Exact two-sided p over all sign assignments, via the rank-sum
    distribution (ranks doubled so tied half-ranks stay integral)."""
    r2 = np.rint(2.0 * ranks).astype(int)
    total = int(r2.sum())
    counts = np.zeros(total + 1, dtype=float)
    counts[0] = 1.0
    for r in r2:
        nxt = counts.copy()
        nxt[r:] += counts[: total + 1 - r]
        counts = nxt
    counts /= counts.sum()
    w2 = int(round(2.0 * w_plus))
    lo = counts[: w2 + 1].sum()
    hi = counts[w2:].sum()
    return float(min(1.0, 2.0 * min(lo, hi)))


def _normal_p_two_sided(ranks: np.ndarray, w_plus: float) -> float:
    """Normal approximation with continuity and tie corrections."""
    n = len(ranks)
    mean = n * (n + 1) / 4.0
    var = n * (n + 1) * (2 * n + 1) / 24.0
    _, tie_counts = np.unique(ranks, return_counts=True)
    var -= np.sum(tie_counts**3 - tie_counts) / 48.0
    if var <= 0:
        return 1.0
    diff = w_plus - mean
    z = (diff - 0.5 * np.sign(diff)) / math.sqrt(var) if diff != 0 else 0.0
    return float(min(1.0, math.erfc(abs(z) / math.sqrt(2.0))))


def wilcoxon_p(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float, int]:
    """Two-sided signed-rank p for paired samples.

    Returns (p, w_plus, w_minus, n_nonzero); zero differences are dropped;
    exact distribution for small n, normal approximation otherwise.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError("samples must be paired (equal length)")
    d = x - y
    d = d[d != 0.0]
    if len(d) == 0:
        return 1.0, 0.0, 0.0, 0
    ranks, pos = _signed_ranks(d)
    w_plus = float(ranks[pos].sum())
    w_minus = float(ranks.sum() - w_plus)
    if len(d) <= EXACT_LIMIT:
        p = _exact_p_two_sided(ranks, w_plus)
    else:
        p = _normal_p_two_sided(ranks, w_plus)
    return p, w_plus, w_minus, len(d)


def wilcoxon_signed_rank(
    x: np.ndarray,
    y: np.ndarray,
    alpha: float = 0.05,
    orientation: Orientation = Orientation.LOWER_BETTER,
) -> str:
    """Verdict for sample x against sample y: '+' x significantly better,
    '-' significantly worse, '=' otherwise."""
    p, w_plus, w_minus, n = wilcoxon_p(x, y)
    if n == 0 or p >= alpha:
        return "="
    direction = float(np.median(x) - np.median(y))
    if direction == 0.0:
        direction = w_plus - w_minus
    if direction == 0.0:
        return "="
    x_better = direction < 0 if orientation is Orientation.LOWER_BETTER else direction > 0
    return "+" if x_better else "-"


def rank_sum_p(x: np.ndarray, y: np.ndarray) -> float:
    """Two-sided Mann-Whitney p (normal approximation with tie correction);
    the unpaired alternative, selectable via the harness pairing flag."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    pooled = np.concatenate([x, y])
    order = np.argsort(pooled, kind="stable")
    ranks = np.empty(len(pooled))
    i = 0
    srt = pooled[order]
    while i < len(pooled):
        j = i
        while j + 1 < len(pooled) and srt[j + 1] == srt[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    n1, n2 = len(x), len(y)
    r1 = ranks[:n1].sum()
    u1 = r1 - n1 * (n1 + 1) / 2.0
    mean = n1 * n2 / 2.0
    n = n1 + n2
    _, tie_counts = np.unique(pooled, return_counts=True)
    tie_term = np.sum(tie_counts**3 - tie_counts) / (n * (n - 1)) if n > 1 else 0.0
    var = n1 * n2 / 12.0 * (n + 1 - tie_term)
    if var <= 0:
        return 1.0
    diff = u1 - mean
    z = (diff - 0.5 * np.sign(diff)) / math.sqrt(var) if diff != 0 else 0.0
    return float(min(1.0, math.erfc(abs(z) / math.sqrt(2.0))))


def a12(x: np.ndarray, y: np.ndarray) -> tuple[float, A12Band]:
    """Probability-of-superiority effect size with its banded category."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) == 0 or len(y) == 0:
        raise ValueError("both samples must be nonempty")
    gt = (x[:, None] > y[None, :]).sum()
    eq = (x[:, None] == y[None, :]).sum()
    value = (gt + 0.5 * eq) / (len(x) * len(y))
    return float(value), a12_band(value)


def a12_band(value: float) -> A12Band:
    v = max(value, 1.0 - value)
    if v < 0.56:
        return A12Band.EQUAL
    if v < 0.64:
        return A12Band.SMALL
    if v < 0.71:
        return A12Band.MEDIUM
    return A12Band.LARGE


def median_iqr(sample: np.ndarray) -> tuple[float, float]:
    """Median and interquartile range with linearly interpolated quartiles."""
    sample = np.asarray(sample, dtype=float)
    if len(sample) == 0:
        raise ValueError("empty sample")
    q1, q2, q3 = np.percentile(sample, [25.0, 50.0, 75.0])
    return float(q2), float(q3 - q1)
