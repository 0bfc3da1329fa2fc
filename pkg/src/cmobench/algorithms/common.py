"""Shared machinery for the four algorithms: array-backed populations,
nondominated sorting, crowding, tournaments and run plumbing."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..constraints import Comparison, ConstraintConfig
from ..core import (
    EvaluationBudget,
    ProblemSpec,
    Solution,
    evaluate_batch,
    make_rng,
    pareto_dominance_matrix,
)
from ..variation import (
    VariationConfig,
    WeightVectorSet,
    polynomial_mutation_batch,
    sbx_crossover_batch,
)


class Algorithm(enum.Enum):
    CNSGA2 = "CNSGA2"
    CNSGA3 = "CNSGA3"
    CMOEAD = "CMOEAD"
    CTAEA = "CTAEA"


@dataclass(frozen=True)
class MoeadConfig:
    T: int = 20          # neighborhood size (capped at N)
    delta: float = 0.9   # probability of mating within the neighborhood
    nr: int = 2          # replacement cap per offspring

    def __post_init__(self):
        if self.T < 1 or not 0.0 <= self.delta <= 1.0 or self.nr < 1:
            raise ValueError("invalid MOEA/D parameters")


@dataclass(frozen=True)
class AlgorithmConfig:
    algorithm: Algorithm
    N: int
    weights: Optional[WeightVectorSet] = None
    moead: MoeadConfig = field(default_factory=MoeadConfig)
    variation: VariationConfig = field(default_factory=VariationConfig)

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("population size must be at least 2")
        if self.algorithm is not Algorithm.CNSGA2:
            if self.weights is None:
                raise ValueError(f"{self.algorithm.value} requires weight vectors")
            if len(self.weights) != self.N:
                raise ValueError("N must equal the number of weight vectors")


class Pool:
    """Column-oriented population: decision matrix plus evaluation results."""

    __slots__ = ("X", "F", "C", "cv", "ecv", "eidx")

    def __init__(self, X, F, C, cv, ecv, eidx):
        self.X, self.F, self.C, self.cv, self.ecv, self.eidx = X, F, C, cv, ecv, eidx

    def __len__(self):
        return len(self.X)

    @property
    def feasible(self) -> np.ndarray:
        return self.cv == 0.0

    def take(self, idx) -> "Pool":
        return Pool(self.X[idx], self.F[idx], self.C[idx], self.cv[idx], self.ecv[idx], self.eidx[idx])

    @staticmethod
    def concat(a: "Pool", b: "Pool") -> "Pool":
        return Pool(
            np.vstack([a.X, b.X]),
            np.vstack([a.F, b.F]),
            np.vstack([a.C, b.C]),
            np.concatenate([a.cv, b.cv]),
            np.concatenate([a.ecv, b.ecv]),
            np.concatenate([a.eidx, b.eidx]),
        )


@dataclass
class RunResult:
    """Final population of one run, as parallel arrays, plus accounting."""

    X: np.ndarray
    F: np.ndarray
    C: np.ndarray
    cv: np.ndarray
    ecv: np.ndarray
    eval_index: np.ndarray
    evaluations: int
    trace: Optional[dict] = None  # eval_index / F / cv over every evaluation

    @property
    def feasible(self) -> np.ndarray:
        return self.cv == 0.0

    def solutions(self) -> list[Solution]:
        return [
            Solution(
                x=self.X[i].copy(),
                f=self.F[i].copy(),
                c=self.C[i].copy(),
                cv=float(self.cv[i]),
                effective_cv=float(self.ecv[i]),
                eval_index=int(self.eval_index[i]),
            )
            for i in range(len(self.X))
        ]


class RunContext:
    """Evaluation, budgeting and trace bookkeeping for a single run."""

    def __init__(
        self,
        problem: ProblemSpec,
        cht: ConstraintConfig,
        mfe: int,
        seed: int,
        collect_trace: bool = False,
    ):
        self.problem = problem
        self.cht = cht
        self.budget = EvaluationBudget(mfe)
        self.rng = make_rng(seed)
        self._trace = {"eval_index": [], "F": [], "cv": []} if collect_trace else None

    def evaluate(self, X: np.ndarray) -> Pool:
        X = self.problem.clamp(np.atleast_2d(X))
        F, C, cv, ecv, eidx = evaluate_batch(self.problem, X, self.cht, self.budget)
        if self._trace is not None:
            self._trace["eval_index"].append(eidx)
            self._trace["F"].append(F)
            self._trace["cv"].append(cv)
        return Pool(X, F, C, cv, ecv, eidx)

    def initial_population(self, N: int) -> Pool:
        X = self.rng.uniform(self.problem.lower, self.problem.upper, (N, self.problem.n))
        return self.evaluate(X)

    def result(self, pop: Pool) -> RunResult:
        trace = None
        if self._trace is not None:
            trace = {
                "eval_index": np.concatenate(self._trace["eval_index"]),
                "F": np.vstack(self._trace["F"]),
                "cv": np.concatenate(self._trace["cv"]),
            }
        return RunResult(
            X=pop.X, F=pop.F, C=pop.C, cv=pop.cv, ecv=pop.ecv,
            eval_index=pop.eidx, evaluations=self.budget.used, trace=trace,
        )


# ---------------------------------------------------------------------------
# Sorting and crowding
# ---------------------------------------------------------------------------

def fronts_from_dominance(dom: np.ndarray) -> list[np.ndarray]:
    """Peel nondominated fronts from a pairwise dominance matrix."""
    n = dom.shape[0]
    counts = dom.sum(axis=0).astype(np.int64)
    remaining = np.ones(n, dtype=bool)
    fronts = []
    while remaining.any():
        front = np.flatnonzero(remaining & (counts == 0))
        if len(front) == 0:
            raise RuntimeError("dominance relation contains a cycle")
        fronts.append(front)
        remaining[front] = False
        counts -= dom[front].sum(axis=0)
    return fronts


def fast_nondominated_sort(pop: list, comparator: Callable) -> list[list]:
    """Generic front sort over arbitrary items under a pairwise comparator."""
    n = len(pop)
    dom = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            rel = comparator(pop[i], pop[j])
            if rel == Comparison.FIRST_DOMINATES:
                dom[i, j] = True
            elif rel == Comparison.SECOND_DOMINATES:
                dom[j, i] = True
    return [[pop[i] for i in front] for front in fronts_from_dominance(dom)]


def constrained_fronts(pool: Pool) -> tuple[list[np.ndarray], np.ndarray]:
    """Front index lists and per-member rank under constrained dominance.

    Exploits the comparator's structure instead of peeling a full pairwise
    matrix: every feasible solution dominates every infeasible one, so the
    feasible subset contributes its Pareto layers first, and the infeasible
    subset then splits into one front per distinct effective violation
    (ascending); equal effective violations are incomparable.
    """
    feas = pool.feasible
    fronts: list[np.ndarray] = []
    fi = np.flatnonzero(feas)
    if fi.size:
        dom = pareto_dominance_matrix(pool.F[fi])
        fronts.extend(fi[front] for front in fronts_from_dominance(dom))
    ii = np.flatnonzero(~feas)
    if ii.size:
        order = np.argsort(pool.ecv[ii], kind="stable")
        sorted_ecv = pool.ecv[ii][order]
        cuts = np.flatnonzero(np.diff(sorted_ecv) > 0) + 1
        fronts.extend(ii[grp] for grp in np.split(order, cuts))
    rank = np.empty(len(pool), dtype=np.int64)
    for r, front in enumerate(fronts):
        rank[front] = r
    return fronts, rank


def crowding_distance(F: np.ndarray) -> np.ndarray:
    """NSGA-II crowding distance of one front."""
    F = np.atleast_2d(np.asarray(F, dtype=float))
    n, m = F.shape
    if n <= 2:
        return np.full(n, np.inf)
    d = np.zeros(n)
    for j in range(m):
        order = np.argsort(F[:, j], kind="stable")
        fj = F[order, j]
        span = fj[-1] - fj[0]
        if span > 0:
            d[order[1:-1]] += (fj[2:] - fj[:-2]) / span
        d[order[0]] = d[order[-1]] = np.inf
    return d


# ---------------------------------------------------------------------------
# Mating
# ---------------------------------------------------------------------------

def tournament_rank_crowding(
    rank: np.ndarray, crowd: np.ndarray, k: int, rng: np.random.Generator
) -> np.ndarray:
    """k binary-tournament winners on (rank asc, crowding desc, coin)."""
    n = len(rank)
    a = rng.integers(0, n, k)
    b = rng.integers(0, n, k)
    coin = rng.random(k) < 0.5
    a_wins = (rank[a] < rank[b]) | (
        (rank[a] == rank[b]) & (crowd[a] > crowd[b])
    ) | ((rank[a] == rank[b]) & (crowd[a] == crowd[b]) & coin)
    return np.where(a_wins, a, b)


def tournament_constrained(
    pool: Pool, a: np.ndarray, b: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """Vectorized binary tournaments decided by constrained dominance,
    incomparable pairs decided by coin."""
    feas, ecv, F = pool.feasible, pool.ecv, pool.F
    winner = np.where(rng.random(len(a)) < 0.5, a, b)
    fa, fb = feas[a], feas[b]
    winner = np.where(fa & ~fb, a, winner)
    winner = np.where(fb & ~fa, b, winner)
    both_inf = ~fa & ~fb
    winner = np.where(both_inf & (ecv[a] < ecv[b]), a, winner)
    winner = np.where(both_inf & (ecv[b] < ecv[a]), b, winner)
    both_feas = fa & fb
    if both_feas.any():
        le_ab = np.all(F[a] <= F[b], axis=1)
        le_ba = np.all(F[b] <= F[a], axis=1)
        winner = np.where(both_feas & le_ab & ~le_ba, a, winner)
        winner = np.where(both_feas & le_ba & ~le_ab, b, winner)
    return winner


def variation_offspring(
    parents_a: np.ndarray,
    parents_b: np.ndarray,
    count: int,
    vcfg: VariationConfig,
    problem: ProblemSpec,
    rng: np.random.Generator,
) -> np.ndarray:
    """SBX on the given parent rows followed by polynomial mutation; yields
    exactly ``count`` children."""
    C1, C2 = sbx_crossover_batch(parents_a, parents_b, vcfg, problem.lower, problem.upper, rng)
    kids = np.empty((2 * len(C1), problem.n))
    kids[0::2] = C1
    kids[1::2] = C2
    kids = kids[:count]
    return polynomial_mutation_batch(kids, vcfg, problem.lower, problem.upper, rng)


def generations_for(mfe: int, N: int) -> int:
    """Post-initialization generation count; the run consumes
    floor(mfe / N) * N evaluations in total."""
    if mfe < N:
        raise ValueError("budget smaller than one population")
    return mfe // N - 1
