"""Constraint-violation computation and the constrained-dominance comparator.

Two interchangeable modes drive every algorithm in this package:

* ``TRUE_CV``: the aggregated violation magnitude is available to selection.
* ``CRISP``: selection only sees +1 (feasible) / -1 (infeasible), i.e. the
  feasibility bit without any magnitude information.

Canonical constraint form: an inequality value g is satisfied iff g <= 0; an
equality value h is satisfied iff |h| <= epsilon.  Violation degrees are
max(0, g) and max(0, |h| - epsilon), so the aggregate is zero exactly on the
feasible set.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np


class CVMode(enum.Enum):
    TRUE_CV = "truecv"
    CRISP = "crisp"


class Comparison(enum.IntEnum):
    FIRST_DOMINATES = 1
    SECOND_DOMINATES = -1
    NEITHER = 0


@dataclass(frozen=True)
class ConstraintConfig:
    mode: CVMode = CVMode.TRUE_CV
    epsilon: float = 1e-6
    a: Optional[np.ndarray] = None  # inequality normalization factors
    b: Optional[np.ndarray] = None  # equality normalization factors

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        for name in ("a", "b"):
            v = getattr(self, name)
            if v is not None:
                v = np.asarray(v, dtype=float)
                if np.any(v == 0):
                    raise ValueError(f"normalization factors {name} must be nonzero")
                object.__setattr__(self, name, v)


def violation_degrees(G: np.ndarray, H: np.ndarray, cfg: ConstraintConfig) -> np.ndarray:
    """Per-constraint violation degrees for a batch, shape (k, p+q)."""
    G = np.atleast_2d(np.asarray(G, dtype=float))
    H = np.atleast_2d(np.asarray(H, dtype=float))
    if cfg.a is not None:
        if cfg.a.shape[0] != G.shape[1]:
            raise ValueError("length of a must match inequality count")
        G = G / np.abs(cfg.a)
    if cfg.b is not None:
        if cfg.b.shape[0] != H.shape[1]:
            raise ValueError("length of b must match equality count")
        H = H / np.abs(cfg.b)
    cg = np.maximum(0.0, G)
    ch = np.maximum(0.0, np.abs(H) - cfg.epsilon)
    return np.concatenate([cg, ch], axis=1)


def aggregate_cv(C: np.ndarray) -> np.ndarray:
    """Sum of violation degrees; zero iff every degree is zero."""
    C = np.atleast_2d(np.asarray(C, dtype=float))
    if np.any(C < 0):
        raise ValueError("violation degrees must be nonnegative")
    if C.shape[1] == 0:
        return np.zeros(C.shape[0])
    return C.sum(axis=1)


def effective_cv(cv: np.ndarray, mode: CVMode) -> np.ndarray:
    """The violation value selection actually sees under the given mode."""
    cv = np.asarray(cv, dtype=float)
    if np.any(cv < 0):
        raise ValueError("cv must be nonnegative")
    if mode is CVMode.TRUE_CV:
        return cv.copy()
    return np.where(cv == 0.0, 1.0, -1.0)


def compare_keys(
    feas1: bool,
    ecv1: float,
    f1: np.ndarray,
    feas2: bool,
    ecv2: float,
    f2: np.ndarray,
) -> Comparison:
    """Constrained-dominance on pre-extracted keys.

    Feasible beats infeasible.  Two infeasible solutions are ordered only by a
    strictly smaller effective violation; equal effective violations (always
    the case in crisp mode) leave them incomparable.  Two feasible solutions
    fall to Pareto dominance on objectives.
    """
    if feas1 != feas2:
        return Comparison.FIRST_DOMINATES if feas1 else Comparison.SECOND_DOMINATES
    if not feas1:
        if ecv1 < ecv2:
            return Comparison.FIRST_DOMINATES
        if ecv2 < ecv1:
            return Comparison.SECOND_DOMINATES
        return Comparison.NEITHER
    le12 = np.all(f1 <= f2)
    le21 = np.all(f2 <= f1)
    if le12 and not le21:
        return Comparison.FIRST_DOMINATES
    if le21 and not le12:
        return Comparison.SECOND_DOMINATES
    return Comparison.NEITHER


def constrained_compare(s1, s2, mode: CVMode | None = None) -> Comparison:
    """Constrained-dominance between two evaluated solutions.

    ``mode`` is accepted for symmetry with the rest of the API but the
    outcome is fully determined by the solutions' stored effective values,
    so switching modes is a matter of how the solutions were evaluated.
    """
    return compare_keys(s1.feasible, s1.effective_cv, s1.f, s2.feasible, s2.effective_cv, s2.f)


def constrained_dominance_matrix(
    F: np.ndarray, feasible: np.ndarray, ecv: np.ndarray
) -> np.ndarray:
    """Vectorized pairwise constrained dominance; dom[i, j] iff i dominates j."""
    feasible = np.asarray(feasible, dtype=bool)
    ecv = np.asarray(ecv, dtype=float)
    n = len(F)
    dom = np.zeros((n, n), dtype=bool)
    # feasible beats infeasible
    dom |= feasible[:, None] & ~feasible[None, :]
    # both infeasible: strictly smaller effective violation
    both_inf = ~feasible[:, None] & ~feasible[None, :]
    dom |= both_inf & (ecv[:, None] < ecv[None, :])
    # both feasible: Pareto dominance
    both_feas = feasible[:, None] & feasible[None, :]
    le = np.all(F[:, None, :] <= F[None, :, :], axis=2)
    lt = np.any(F[:, None, :] < F[None, :, :], axis=2)
    dom |= both_feas & le & lt
    np.fill_diagonal(dom, False)
    return dom
