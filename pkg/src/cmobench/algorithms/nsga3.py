"""NSGA-III with constrained-dominance front ranks and reference-direction
niching for the split front."""

from __future__ import annotations

import numpy as np

from ..constraints import ConstraintConfig
from ..core import ProblemSpec
from .common import (
    AlgorithmConfig,
    Pool,
    RunContext,
    RunResult,
    constrained_fronts,
    generations_for,
    tournament_constrained,
    variation_offspring,
)


def hyperplane_intercepts(F: np.ndarray, ideal: np.ndarray) -> np.ndarray:
    """Intercepts of the hyperplane through the ASF extreme points.

    Falls back to the per-objective maximum of the supplied front whenever
    the system is degenerate.
    """
    m = F.shape[1]
    T = F - ideal
    weights = np.full((m, m), 1e-6) + np.eye(m)
    extreme = np.empty(m, dtype=np.int64)
    for j in range(m):
        extreme[j] = int(np.argmin(np.max(T / weights[j], axis=1)))
    fallback = np.maximum(T.max(axis=0), 1e-12)
    E = T[extreme]
    try:
        plane = np.linalg.solve(E, np.ones(m))
    except np.linalg.LinAlgError:
        return fallback
    if np.any(plane <= 1e-12) or not np.all(np.isfinite(plane)):
        return fallback
    intercepts = 1.0 / plane
    if np.any(intercepts <= 1e-12) or not np.all(np.isfinite(intercepts)):
        return fallback
    return intercepts


def associate(F_norm: np.ndarray, W: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Closest reference direction per point and the perpendicular distance."""
    Wn = W / np.linalg.norm(W, axis=1, keepdims=True)
    proj = F_norm @ Wn.T
    sq = np.sum(F_norm * F_norm, axis=1, keepdims=True) - proj**2
    dist = np.sqrt(np.maximum(sq, 0.0))
    niche = np.argmin(dist, axis=1)
    return niche, dist[np.arange(len(F_norm)), niche]


def _niching(
    K: int,
    niche_count: np.ndarray,
    cand_niche: np.ndarray,
    cand_dist: np.ndarray,
    rng: np.random.Generator,
) -> np.ndarray:
    """Pick K members of the split front by under-filled reference direction."""
    chosen = np.zeros(len(cand_niche), dtype=bool)
    active = np.ones(len(niche_count), dtype=bool)
    picked = []
    while len(picked) < K:
        live = np.flatnonzero(active)
        jmin = live[niche_count[live] == niche_count[live].min()]
        j = jmin[rng.integers(0, len(jmin))] if len(jmin) > 1 else jmin[0]
        members = np.flatnonzero(~chosen & (cand_niche == j))
        if len(members) == 0:
            active[j] = False
            continue
        if niche_count[j] == 0:
            s = members[np.argmin(cand_dist[members])]
        else:
            s = members[rng.integers(0, len(members))]
        chosen[s] = True
        picked.append(s)
        niche_count[j] += 1
    return np.asarray(picked, dtype=np.int64)


def environmental_selection(
    merged: Pool, N: int, W: np.ndarray, ideal: np.ndarray, rng: np.random.Generator
) -> Pool:
    """Whole constrained-dominance fronts, then resolve the split front.

    A feasible split front is truncated by reference-direction niching.  An
    infeasible split front (its members tie on effective violation by
    construction) is filled in merge order: with violation magnitudes the
    preceding whole-front fill already realizes the ascending-violation rule,
    and without them no objective-space information is consulted.
    """
    fronts, _ = constrained_fronts(merged)
    chosen: list[np.ndarray] = []
    total = 0
    split: np.ndarray | None = None
    for front in fronts:
        if total + len(front) <= N:
            chosen.append(front)
            total += len(front)
            if total == N:
                break
        else:
            split = front
            break
    if split is None:
        return merged.take(np.concatenate(chosen))

    selected = np.concatenate(chosen) if chosen else np.empty(0, dtype=np.int64)
    if not merged.feasible[split[0]]:
        return merged.take(np.concatenate([selected, split[: N - len(selected)]]))

    pool_idx = np.concatenate([selected, split])
    intercepts = hyperplane_intercepts(merged.F[fronts[0]], ideal)
    F_norm = (merged.F[pool_idx] - ideal) / intercepts
    niche, dist = associate(F_norm, W)

    n_sel = len(selected)
    niche_count = np.bincount(niche[:n_sel], minlength=len(W))
    picked = _niching(N - n_sel, niche_count, niche[n_sel:], dist[n_sel:], rng)
    return merged.take(np.concatenate([selected, split[picked]]))


def run_cnsga3(
    problem: ProblemSpec,
    cfg: AlgorithmConfig,
    cht: ConstraintConfig,
    mfe: int,
    seed: int,
    collect_trace: bool = False,
) -> RunResult:
    ctx = RunContext(problem, cht, mfe, seed, collect_trace)
    N = cfg.N
    W = cfg.weights.vectors
    n_generations = generations_for(mfe, N)
    pop = ctx.initial_population(N)
    ideal = pop.F.min(axis=0)

    for _ in range(n_generations):
        pairs = (N + 1) // 2
        a = ctx.rng.integers(0, len(pop), pairs)
        b = ctx.rng.integers(0, len(pop), pairs)
        pa = tournament_constrained(pop, a, b, ctx.rng)
        a = ctx.rng.integers(0, len(pop), pairs)
        b = ctx.rng.integers(0, len(pop), pairs)
        pb = tournament_constrained(pop, a, b, ctx.rng)
        kids = variation_offspring(pop.X[pa], pop.X[pb], N, cfg.variation, problem, ctx.rng)
        off = ctx.evaluate(kids)
        ideal = np.minimum(ideal, off.F.min(axis=0))
        pop = environmental_selection(Pool.concat(pop, off), N, W, ideal, ctx.rng)

    return ctx.result(pop)
