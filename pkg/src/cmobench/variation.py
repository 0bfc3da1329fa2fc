"""Real-coded variation operators and reference-direction generation."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np


@dataclass(frozen=True)
class VariationConfig:
    pc: float = 1.0       # crossover probability per pair
    eta_c: float = 30.0   # SBX distribution index
    pm: float | None = None  # per-variable mutation probability, default 1/n
    eta_m: float = 20.0   # mutation distribution index

    def __post_init__(self):
        if not 0.0 <= self.pc <= 1.0:
            raise ValueError("pc must be in [0, 1]")
        if self.pm is not None and not 0.0 <= self.pm <= 1.0:
            raise ValueError("pm must be in [0, 1]")
        if self.eta_c <= 0 or self.eta_m <= 0:
            raise ValueError("distribution indices must be positive")

    def pm_for(self, n: int) -> float:
        return 1.0 / n if self.pm is None else self.pm


class WeightVectorSet:
    """A set of simplex reference directions shared by the decomposition-
    and reference-point-based algorithms."""

    def __init__(self, vectors: np.ndarray, layers: str = "single"):
        vectors = np.asarray(vectors, dtype=float)
        if vectors.ndim != 2:
            raise ValueError("weight vectors must form a 2-d array")
        if np.any(np.abs(vectors.sum(axis=1) - 1.0) > 1e-12):
            raise ValueError("every weight vector must sum to 1")
        if len(np.unique(vectors.round(12), axis=0)) != len(vectors):
            raise ValueError("weight vectors must be pairwise distinct")
        self.vectors = vectors
        self.layers = layers

    def __len__(self) -> int:
        return len(self.vectors)

    @property
    def m(self) -> int:
        return self.vectors.shape[1]


def das_dennis(m: int, H: int) -> WeightVectorSet:
    """Simplex-lattice directions with components in {0, 1/H, ..., 1}.

    Produces exactly C(H+m-1, m-1) vectors.
    """
    if m < 2 or H < 1:
        raise ValueError("need m >= 2 and H >= 1")
    rows = np.empty((comb(H + m - 1, m - 1), m))
    for r, cut in enumerate(combinations(range(1, H + m), m - 1)):
        cuts = np.array((0,) + cut + (H + m,))
        rows[r] = np.diff(cuts) - 1
    return WeightVectorSet(rows / H)


def two_layer(m: int, H1: int, H2: int) -> WeightVectorSet:
    """Boundary layer plus an inner layer shrunk toward the simplex centroid."""
    outer = das_dennis(m, H1).vectors
    inner = das_dennis(m, H2).vectors / 2.0 + 1.0 / (2.0 * m)
    return WeightVectorSet(np.vstack([outer, inner]), layers="two")


def sbx_crossover(
    p1: np.ndarray,
    p2: np.ndarray,
    cfg: VariationConfig,
    lower: np.ndarray,
    upper: np.ndarray,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Simulated binary crossover of one parent pair (bounded variant)."""
    c1, c2 = sbx_crossover_batch(p1[None, :], p2[None, :], cfg, lower, upper, rng)
    return c1[0], c2[0]


def sbx_crossover_batch(
    P1: np.ndarray,
    P2: np.ndarray,
    cfg: VariationConfig,
    lower: np.ndarray,
    upper: np.ndarray,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """SBX over a batch of parent pairs, rows paired index by index."""
    P1 = np.atleast_2d(np.asarray(P1, dtype=float))
    P2 = np.atleast_2d(np.asarray(P2, dtype=float))
    k, n = P1.shape
    C1, C2 = P1.copy(), P2.copy()

    do_pair = rng.random(k) <= cfg.pc
    # per-gene gate, plus skip nearly identical genes (crossover is identity there)
    gate = (rng.random((k, n)) <= 0.5) & (np.abs(P1 - P2) > 1e-14) & do_pair[:, None]
    u = rng.random((k, n))
    if not gate.any():
        return C1, C2

    y1 = np.minimum(P1, P2)
    y2 = np.maximum(P1, P2)
    span = np.where(y2 - y1 > 1e-300, y2 - y1, 1.0)
    exp = 1.0 / (cfg.eta_c + 1.0)

    def child(beta_edge, sign):
        alpha = 2.0 - beta_edge ** -(cfg.eta_c + 1.0)
        ua = u * alpha
        betaq = np.where(
            ua <= 1.0,
            ua ** exp,
            (1.0 / np.maximum(2.0 - ua, 1e-300)) ** exp,
        )
        return 0.5 * ((y1 + y2) + sign * betaq * (y2 - y1))

    b1 = 1.0 + 2.0 * (y1 - lower) / span
    b2 = 1.0 + 2.0 * (upper - y2) / span
    lo = child(b1, -1.0)
    hi = child(b2, +1.0)
    swap = rng.random((k, n)) <= 0.5
    C1[gate] = np.where(swap, hi, lo)[gate]
    C2[gate] = np.where(swap, lo, hi)[gate]
    np.clip(C1, lower, upper, out=C1)
    np.clip(C2, lower, upper, out=C2)
    return C1, C2


def polynomial_mutation(
    x: np.ndarray,
    cfg: VariationConfig,
    lower: np.ndarray,
    upper: np.ndarray,
    rng: np.random.Generator,
) -> np.ndarray:
    """Bounded polynomial mutation of one vector."""
    return polynomial_mutation_batch(x[None, :], cfg, lower, upper, rng)[0]


def polynomial_mutation_batch(
    X: np.ndarray,
    cfg: VariationConfig,
    lower: np.ndarray,
    upper: np.ndarray,
    rng: np.random.Generator,
) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float)).copy()
    k, n = X.shape
    pm = cfg.pm_for(n)
    site = rng.random((k, n)) <= pm
    u = rng.random((k, n))
    if not site.any():
        return X

    span = upper - lower
    d1 = (X - lower) / span
    d2 = (upper - X) / span
    exp = 1.0 / (cfg.eta_m + 1.0)
    low_side = u < 0.5
    dq = np.where(
        low_side,
        (2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1) ** (cfg.eta_m + 1.0)) ** exp - 1.0,
        1.0 - (2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2) ** (cfg.eta_m + 1.0)) ** exp,
    )
    X[site] += (dq * span)[site]
    np.clip(X, lower, upper, out=X)
    return X
