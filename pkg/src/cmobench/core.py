"""Problem model, evaluation pipeline and Pareto dominance."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .constraints import ConstraintConfig, CVMode, violation_degrees

# batch evaluator: X (k, n) -> (F (k, m), G (k, p), H (k, q))
Evaluator = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray, np.ndarray]]


class BudgetExhausted(Exception):
    """Raised when an evaluation would exceed the configured budget."""


class EvaluationBudget:
    """Counts function evaluations against a hard limit (MFE)."""

    def __init__(self, limit: int):
        if limit < 1:
            raise ValueError("budget limit must be positive")
        self.limit = int(limit)
        self.used = 0

    @property
    def remaining(self) -> int:
        return self.limit - self.used

    def spend(self, k: int) -> int:
        """Reserve k evaluations, returning the ordinal of the first one."""
        if self.used + k > self.limit:
            raise BudgetExhausted(f"{self.used}+{k} exceeds limit {self.limit}")
        start = self.used
        self.used += k
        return start


@dataclass(frozen=True)
class ProblemSpec:
    """A constrained multi-objective minimization problem.

    ``evaluator`` maps a batch of decision vectors to objectives and raw
    constraint values in canonical form: inequality satisfied iff value <= 0,
    equality satisfied iff |value| <= epsilon.
    """

    name: str
    m: int
    n: int
    p: int
    q: int
    lower: np.ndarray
    upper: np.ndarray
    evaluator: Evaluator
    front_sampler: Optional[Callable[[int], np.ndarray]] = None

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=float)
        up = np.asarray(self.upper, dtype=float)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", up)
        if self.m < 2:
            raise ValueError("need at least two objectives")
        if self.n < 1:
            raise ValueError("need at least one decision variable")
        if lo.shape != (self.n,) or up.shape != (self.n,):
            raise ValueError("bounds must have length n")
        if not np.all(lo < up):
            raise ValueError("each lower bound must be below its upper bound")

    def clamp(self, x: np.ndarray) -> np.ndarray:
        return np.clip(x, self.lower, self.upper)


@dataclass
class Solution:
    """One evaluated decision vector."""

    x: np.ndarray
    f: np.ndarray
    c: np.ndarray
    cv: float
    effective_cv: float
    eval_index: int

    @property
    def feasible(self) -> bool:
        return self.cv == 0.0


@dataclass
class Population:
    """Bounded container of evaluated solutions."""

    members: list[Solution] = field(default_factory=list)
    capacity: int = 0

    def __post_init__(self):
        if self.capacity and len(self.members) > self.capacity:
            raise ValueError("population exceeds capacity")

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def make_rng(seed: int) -> np.random.Generator:
    """Deterministic stream: same seed and call sequence, same draws."""
    return np.random.Generator(np.random.PCG64(int(seed)))


def evaluate_batch(
    problem: ProblemSpec,
    X: np.ndarray,
    cht: ConstraintConfig,
    budget: EvaluationBudget | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Evaluate a batch of in-bounds points.

    Returns (F, C, cv, ecv, eval_index); spends one budget unit per row.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.shape[1] != problem.n:
        raise ValueError(f"expected {problem.n} variables, got {X.shape[1]}")
    k = X.shape[0]
    start = budget.spend(k) if budget is not None else 0
    F, G, H = problem.evaluator(X)
    F = np.asarray(F, dtype=float).reshape(k, problem.m)
    G = np.asarray(G, dtype=float).reshape(k, problem.p)
    H = np.asarray(H, dtype=float).reshape(k, problem.q)
    if cht.a is not None or cht.b is not None or problem.q:
        C = violation_degrees(G, H, cht)
    else:
        C = np.maximum(0.0, G)
    cv = C.sum(axis=1) if C.shape[1] else np.zeros(k)
    if cht.mode is CVMode.TRUE_CV:
        ecv = cv
    else:
        ecv = np.where(cv == 0.0, 1.0, -1.0)
    idx = np.arange(start, start + k, dtype=np.int64)
    return F, C, cv, ecv, idx


def evaluate(
    problem: ProblemSpec,
    x: np.ndarray,
    cht: ConstraintConfig,
    budget: EvaluationBudget | None = None,
) -> Solution:
    """Evaluate a single in-bounds decision vector into a Solution."""
    F, C, cv, ecv, idx = evaluate_batch(problem, np.asarray(x, dtype=float)[None, :], cht, budget)
    return Solution(
        x=np.array(x, dtype=float),
        f=F[0],
        c=C[0],
        cv=float(cv[0]),
        effective_cv=float(ecv[0]),
        eval_index=int(idx[0]),
    )


def pareto_dominates(a: np.ndarray, b: np.ndarray) -> bool:
    """True iff a is no worse than b everywhere and strictly better somewhere."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError("objective vectors must have equal length")
    return bool(np.all(a <= b) and np.any(a < b))


def pareto_dominance_matrix(F: np.ndarray) -> np.ndarray:
    """dom[i, j] is True iff row i Pareto-dominates row j."""
    le = np.all(F[:, None, :] <= F[None, :, :], axis=2)
    lt = np.any(F[:, None, :] < F[None, :, :], axis=2)
    return le & lt


def nondominated_mask(F: np.ndarray) -> np.ndarray:
    """Boolean mask of rows not Pareto-dominated by any other row."""
    if len(F) == 0:
        return np.zeros(0, dtype=bool)
    return ~pareto_dominance_matrix(F).any(axis=0)
