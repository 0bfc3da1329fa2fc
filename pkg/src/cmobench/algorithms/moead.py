"""MOEA/D with Tchebycheff decomposition and violation-aware subproblem
replacement."""

from __future__ import annotations

import numpy as np

from ..constraints import ConstraintConfig
from ..core import ProblemSpec
from ..variation import VariationConfig
from .common import (
    AlgorithmConfig,
    Pool,
    RunContext,
    RunResult,
    generations_for,
)

WEIGHT_FLOOR = 1e-6


def offspring_single(
    x1: np.ndarray,
    x2: np.ndarray,
    vcfg: VariationConfig,
    lower: np.ndarray,
    upper: np.ndarray,
    rng: np.random.Generator,
) -> np.ndarray:
    """One SBX child of the pair followed by polynomial mutation.

    Samples the same child distribution as the batch operators but with a
    single fused uniform draw, which keeps the per-subproblem loop cheap.
    """
    n = len(x1)
    r = rng.random(5 * n + 1)
    child = x1.copy()

    gate = (r[1 : n + 1] <= 0.5) & (np.abs(x1 - x2) > 1e-14) if r[0] <= vcfg.pc else None
    if gate is not None and gate.any():
        u = r[n + 1 : 2 * n + 1][gate]
        swap_hi = r[2 * n + 1 : 3 * n + 1][gate] <= 0.5
        y1 = np.minimum(x1[gate], x2[gate])
        y2 = np.maximum(x1[gate], x2[gate])
        span = np.where(y2 - y1 > 1e-300, y2 - y1, 1.0)
        exp = 1.0 / (vcfg.eta_c + 1.0)
        beta_edge = 1.0 + 2.0 * np.where(swap_hi, upper[gate] - y2, y1 - lower[gate]) / span
        ua = u * (2.0 - beta_edge ** -(vcfg.eta_c + 1.0))
        betaq = np.where(ua <= 1.0, ua**exp, (1.0 / np.maximum(2.0 - ua, 1e-300)) ** exp)
        child[gate] = 0.5 * ((y1 + y2) + np.where(swap_hi, betaq, -betaq) * (y2 - y1))

    site = r[3 * n + 1 : 4 * n + 1] <= vcfg.pm_for(n)
    if site.any():
        u = r[4 * n + 1 :][site]
        x = np.clip(child[site], lower[site], upper[site])
        span = upper[site] - lower[site]
        d1 = (x - lower[site]) / span
        d2 = (upper[site] - x) / span
        exp = 1.0 / (vcfg.eta_m + 1.0)
        low_side = u < 0.5
        dq = np.where(
            low_side,
            (2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1) ** (vcfg.eta_m + 1.0)) ** exp - 1.0,
            1.0 - (2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2) ** (vcfg.eta_m + 1.0)) ** exp,
        )
        child[site] = x + dq * span
    return np.clip(child, lower, upper)


def tchebycheff(F: np.ndarray, weight: np.ndarray, ideal: np.ndarray) -> np.ndarray:
    """Weighted Chebyshev aggregation with a floor on zero weights."""
    w = np.maximum(np.asarray(weight, dtype=float), WEIGHT_FLOOR)
    D = np.abs(np.atleast_2d(F) - ideal) * w
    return D.max(axis=1)


def neighborhoods(W: np.ndarray, T: int) -> np.ndarray:
    d = np.linalg.norm(W[:, None, :] - W[None, :, :], axis=2)
    return np.argsort(d, axis=1, kind="stable")[:, :T]


def replacement_mask(
    child_feas: bool,
    child_ecv: float,
    child_agg: np.ndarray,
    inc_feas: np.ndarray,
    inc_ecv: np.ndarray,
    inc_agg: np.ndarray,
) -> np.ndarray:
    """Subproblem update rule against a vector of incumbents: feasibility
    first, then smaller effective violation, then (on violation ties and
    among feasible pairs) the aggregation value."""
    agg_ok = child_agg <= inc_agg
    if child_feas:
        return ~inc_feas | agg_ok
    return ~inc_feas & ((inc_ecv > child_ecv) | ((inc_ecv == child_ecv) & agg_ok))


def run_cmoead(
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
    Wf = np.maximum(W, WEIGHT_FLOOR)
    T = min(cfg.moead.T, N)
    B = neighborhoods(W, T)
    n_generations = generations_for(mfe, N)

    pop = ctx.initial_population(N)
    feas = pop.feasible.copy()
    ideal = pop.F.min(axis=0)

    all_idx = np.arange(N)
    for _ in range(n_generations):
        use_nbhd = rng.random(N) < cfg.moead.delta
        picks = rng.random((N, 2))
        for i in range(N):
            pool = B[i] if use_nbhd[i] else all_idx
            L = len(pool)
            k = min(int(picks[i, 0] * L), L - 1)
            l = min(int(picks[i, 1] * (L - 1)), L - 2)
            if l >= k:
                l += 1
            child_x = variation_offspring(
                pop.X[pool[k]][None, :], pop.X[pool[l]][None, :], 1,
                cfg.variation, problem, rng,
            )
            off = ctx.evaluate(child_x)
            ideal = np.minimum(ideal, off.F[0])
            c_feas = bool(off.cv[0] == 0.0)
            c_ecv = float(off.ecv[0])

            pw = Wf[pool]
            child_agg = np.max(np.abs(off.F[0] - ideal) * pw, axis=1)
            inc_agg = np.max(np.abs(pop.F[pool] - ideal) * pw, axis=1)
            ok = replacement_mask(c_feas, c_ecv, child_agg, feas[pool], pop.ecv[pool], inc_agg)
            if not ok.any():
                continue
            replaced = 0
            for t in rng.permutation(L):
                if replaced >= cfg.moead.nr:
                    break
                if not ok[t]:
                    continue
                j = pool[t]
                pop.X[j] = off.X[0]
                pop.F[j] = off.F[0]
                pop.C[j] = off.C[0]
                pop.cv[j] = off.cv[0]
                pop.ecv[j] = off.ecv[0]
                pop.eidx[j] = off.eidx[0]
                feas[j] = c_feas
                replaced += 1

    return ctx.result(pop)
