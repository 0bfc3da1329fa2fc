"""NSGA-II with the constrained-dominance comparator."""

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
    crowding_distance,
    generations_for,
    tournament_rank_crowding,
    variation_offspring,
)


def environmental_selection(merged: Pool, N: int) -> tuple[Pool, np.ndarray, np.ndarray]:
    """Front-by-front survival with crowding truncation of the split front.

    Returns the survivors plus their ranks and crowding distances (used by
    the next round of mating tournaments).  Crowding is derived per front
    restricted to the survivors.
    """
    fronts, rank = constrained_fronts(merged)
    chosen: list[np.ndarray] = []
    crowds: list[np.ndarray] = []
    total = 0
    for front in fronts:
        if total + len(front) <= N:
            chosen.append(front)
            crowds.append(
                crowding_distance(merged.F[front]) if len(front) > 2 else np.full(len(front), np.inf)
            )
            total += len(front)
            if total == N:
                break
        else:
            crowd = crowding_distance(merged.F[front])
            order = np.argsort(-crowd, kind="stable")[: N - total]
            kept = front[order]
            chosen.append(kept)
            crowds.append(
                crowding_distance(merged.F[kept]) if len(kept) > 2 else np.full(len(kept), np.inf)
            )
            break
    idx = np.concatenate(chosen)
    return merged.take(idx), rank[idx], np.concatenate(crowds)


def run_cnsga2(
    problem: ProblemSpec,
    cfg: AlgorithmConfig,
    cht: ConstraintConfig,
    mfe: int,
    seed: int,
    collect_trace: bool = False,
) -> RunResult:
    ctx = RunContext(problem, cht, mfe, seed, collect_trace)
    N = cfg.N
    n_generations = generations_for(mfe, N)
    pop = ctx.initial_population(N)
    pop, rank, crowd = environmental_selection(pop, N)

    for _ in range(n_generations):
        pairs = (N + 1) // 2
        pa = tournament_rank_crowding(rank, crowd, pairs, ctx.rng)
        pb = tournament_rank_crowding(rank, crowd, pairs, ctx.rng)
        kids = variation_offspring(pop.X[pa], pop.X[pb], N, cfg.variation, problem, ctx.rng)
        off = ctx.evaluate(kids)
        pop, rank, crowd = environmental_selection(Pool.concat(pop, off), N)

    return ctx.result(pop)
