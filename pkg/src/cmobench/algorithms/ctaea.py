"""Two-archive algorithm: a feasibility-driven convergence archive co-evolves
with a diversity archive that ignores constraints entirely."""

from __future__ import annotations

import numpy as np

from ..constraints import ConstraintConfig
from ..core import ProblemSpec, pareto_dominance_matrix
from .common import (
    AlgorithmConfig,
    Pool,
    RunContext,
    RunResult,
    fronts_from_dominance,
    generations_for,
    tournament_constrained,
    variation_offspring,
)

WEIGHT_FLOOR = 1e-6


def subregion_of(F: np.ndarray, W: np.ndarray, ideal: np.ndarray) -> np.ndarray:
    """Index of the closest weight ray (perpendicular distance on translated
    objectives)."""
    T = F - ideal
    Wn = W / np.linalg.norm(W, axis=1, keepdims=True)
    proj = T @ Wn.T
    sq = np.sum(T * T, axis=1, keepdims=True) - proj**2
    return np.argmin(np.sqrt(np.maximum(sq, 0.0)), axis=1)


def gtch(F: np.ndarray, W: np.ndarray, ideal: np.ndarray, region: np.ndarray) -> np.ndarray:
    """Chebyshev scalarization of each point against its subregion's weight."""
    w = np.maximum(W[region], WEIGHT_FLOOR)
    return np.max((F - ideal) / w, axis=1)


def update_ca(hc: Pool, N: int, W: np.ndarray, ideal: np.ndarray) -> Pool:
    """Select the convergence archive from the merged candidate set."""
    feas_idx = np.flatnonzero(hc.feasible)
    if len(feas_idx) == N:
        return hc.take(feas_idx)

    if len(feas_idx) > N:
        sc = hc.take(feas_idx)
        fronts = fronts_from_dominance(pareto_dominance_matrix(sc.F))
        keep: list[np.ndarray] = []
        total = 0
        for front in fronts:
            keep.append(front)
            total += len(front)
            if total >= N:
                break
        idx = list(np.concatenate(keep))
        region = subregion_of(sc.F, W, ideal)
        fitness = gtch(sc.F, W, ideal, region)
        counts = np.bincount(region[idx], minlength=len(W))
        while len(idx) > N:
            crowded = int(np.argmax(counts))
            members = [i for i in idx if region[i] == crowded]
            worst = max(members, key=lambda i: (fitness[i], i))
            idx.remove(worst)
            counts[crowded] -= 1
        return sc.take(np.asarray(idx, dtype=np.int64))

    # not enough feasible: rank the infeasible by trading off objectives and
    # effective violation (violation as an extra objective)
    inf_idx = np.flatnonzero(~hc.feasible)
    need = N - len(feas_idx)
    si = hc.take(inf_idx)
    aug = np.column_stack([si.F, si.ecv])
    fronts = fronts_from_dominance(pareto_dominance_matrix(aug))
    chosen: list[int] = []
    for front in fronts:
        if len(chosen) + len(front) <= need:
            chosen.extend(front.tolist())
        else:
            order = sorted(front.tolist(), key=lambda i: (si.ecv[i], i))
            chosen.extend(order[: need - len(chosen)])
        if len(chosen) == need:
            break
    picked = np.concatenate([feas_idx, inf_idx[np.asarray(chosen, dtype=np.int64)]])
    return hc.take(picked)


def update_da(ca: Pool, hd: Pool, N: int, W: np.ndarray, ideal: np.ndarray) -> Pool:
    """Fill the diversity archive from subregions under-exploited by the CA.

    Never consults constraint values: selection is by subregion occupancy and
    the objective-space scalarization alone.
    """
    ca_count = np.bincount(subregion_of(ca.F, W, ideal), minlength=len(W)) if len(ca) else np.zeros(len(W), dtype=np.int64)
    region = subregion_of(hd.F, W, ideal)
    fitness = gtch(hd.F, W, ideal, region)
    queues: list[list[int]] = [[] for _ in range(len(W))]
    order = np.lexsort((np.arange(len(hd)), fitness))
    for i in order:
        queues[region[i]].append(int(i))

    picked: list[int] = []
    taken = np.zeros(len(W), dtype=np.int64)
    itr = 1
    available = len(hd)
    while len(picked) < min(N, available):
        for j in range(len(W)):
            if len(picked) >= N:
                break
            if ca_count[j] + taken[j] < itr and taken[j] < len(queues[j]):
                picked.append(queues[j][taken[j]])
                taken[j] += 1
        itr += 1
    return hd.take(np.asarray(picked, dtype=np.int64))


def mating_proportions(ca: Pool, da: Pool) -> tuple[float, float]:
    """Fractions of the combined nondominated set contributed by each archive."""
    F = np.vstack([ca.F, da.F])
    nd = ~pareto_dominance_matrix(F).any(axis=0)
    total = len(F)
    pc = float(nd[: len(ca)].sum()) / total
    pd = float(nd[len(ca):].sum()) / total
    return pc, pd


def run_ctaea(
    problem: ProblemSpec,
    cfg: AlgorithmConfig,
    cht: ConstraintConfig,
    mfe: int,
    seed: int,
    collect_trace: bool = False,
) -> RunResult:
    ctx = RunContext(problem, cht, mfe, seed, collect_trace)
    rng = ctx.rng
    N = cfg.N
    W = cfg.weights.vectors

    n_generations = generations_for(mfe, N)
    init = ctx.initial_population(N)
    ideal = init.F.min(axis=0)
    ca = update_ca(init, N, W, ideal)
    da = update_da(ca, init, N, W, ideal)

    for _ in range(n_generations):
        pc, pd = mating_proportions(ca, da)
        pairs = (N + 1) // 2
        first_src = ca if pc > pd else da
        a = rng.integers(0, len(first_src), pairs)
        b = rng.integers(0, len(first_src), pairs)
        pa = first_src.X[tournament_constrained(first_src, a, b, rng)]
        second_from_ca = rng.random(pairs) < pc
        a = rng.integers(0, len(ca), pairs)
        b = rng.integers(0, len(ca), pairs)
        ca_pick = ca.X[tournament_constrained(ca, a, b, rng)]
        a = rng.integers(0, len(da), pairs)
        b = rng.integers(0, len(da), pairs)
        da_pick = da.X[tournament_constrained(da, a, b, rng)]
        pb = np.where(second_from_ca[:, None], ca_pick, da_pick)

        kids = variation_offspring(pa, pb, N, cfg.variation, problem, rng)
        off = ctx.evaluate(kids)
        ideal = np.minimum(ideal, off.F.min(axis=0))
        ca = update_ca(Pool.concat(ca, off), N, W, ideal)
        da = update_da(ca, Pool.concat(da, off), N, W, ideal)

    return ctx.result(ca)
