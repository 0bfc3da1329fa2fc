"""Performance indicators: IGD, IGD+ and hypervolume.

A run that ends without feasible nondominated solutions scores the failure
sentinel: 500.0 for the distance indicators, 0.0 for hypervolume.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import nondominated_mask

IGD_FAILURE = 500.0
HV_FAILURE = 0.0
HV_REF_FACTOR = 1.1


@dataclass(frozen=True)
class MetricResult:
    metric: str
    value: float
    failed: bool = False


def igd(approx: np.ndarray, ref: np.ndarray) -> MetricResult:
    """Mean Euclidean distance from each reference point to the closest
    approximation point."""
    ref = np.atleast_2d(np.asarray(ref, dtype=float))
    if ref.size == 0:
        raise ValueError("reference set must be nonempty")
    approx = np.asarray(approx, dtype=float).reshape(-1, ref.shape[1]) if np.size(approx) else np.empty((0, ref.shape[1]))
    if len(approx) == 0:
        return MetricResult("IGD", IGD_FAILURE, failed=True)
    d = np.linalg.norm(ref[:, None, :] - approx[None, :, :], axis=2)
    return MetricResult("IGD", float(d.min(axis=1).mean()))


def igd_plus(approx: np.ndarray, ref: np.ndarray) -> MetricResult:
    """IGD with the dominance-truncated distance max(a - z, 0)."""
    ref = np.atleast_2d(np.asarray(ref, dtype=float))
    if ref.size == 0:
        raise ValueError("reference set must be nonempty")
    approx = np.asarray(approx, dtype=float).reshape(-1, ref.shape[1]) if np.size(approx) else np.empty((0, ref.shape[1]))
    if len(approx) == 0:
        return MetricResult("IGDplus", IGD_FAILURE, failed=True)
    diff = np.maximum(approx[None, :, :] - ref[:, None, :], 0.0)
    d = np.sqrt(np.sum(diff * diff, axis=2))
    return MetricResult("IGDplus", float(d.min(axis=1).mean()))


# ---------------------------------------------------------------------------
# Hypervolume
# ---------------------------------------------------------------------------

def _hv_2d(F: np.ndarray, ref: np.ndarray) -> float:
    # sweep over f0 ascending; F must be mutually nondominated
    order = np.argsort(F[:, 0], kind="stable")
    F = F[order]
    vol = 0.0
    prev_f1 = float(ref[1])
    for f0, f1 in F:
        vol += (ref[0] - f0) * (prev_f1 - f1)
        prev_f1 = f1
    return vol


def _hv_wfg(F: np.ndarray, ref: np.ndarray) -> float:
    """Exact hypervolume by the exclusive-volume recursion."""
    if len(F) == 0:
        return 0.0
    if F.shape[1] == 1:
        return float(ref[0] - F[:, 0].min())
    if F.shape[1] == 2:
        return _hv_2d(F[nondominated_mask(F)], ref)
    keep = nondominated_mask(F)
    F = F[keep]
    F = F[np.argsort(F[:, 0], kind="stable")[::-1]]  # worst first limits set sizes
    vol = 0.0
    for i in range(len(F)):
        p = F[i]
        box = float(np.prod(ref - p))
        if i + 1 < len(F):
            limited = np.maximum(F[i + 1:], p)
            box -= _hv_wfg(limited, ref)
        vol += box
    return vol


def _hv_exact(F: np.ndarray, ref: np.ndarray) -> float:
    m = F.shape[1]
    if m == 2:
        return _hv_2d(F[nondominated_mask(F)], ref)
    return _hv_wfg(F, ref)


def _hv_monte_carlo(F: np.ndarray, ref: np.ndarray, samples: int, seed: int) -> float:
    rng = np.random.Generator(np.random.PCG64(seed))
    m = F.shape[1]
    lo = F.min(axis=0)
    box = np.prod(ref - lo)
    hit = 0
    chunk = 200_000
    done = 0
    while done < samples:
        k = min(chunk, samples - done)
        S = rng.random((k, m)) * (ref - lo) + lo
        dominated = np.zeros(k, dtype=bool)
        for p in F:
            dominated |= np.all(S >= p, axis=1)
        hit += int(dominated.sum())
        done += k
    return box * hit / samples


def hv(
    approx: np.ndarray,
    ref_front: np.ndarray,
    mc_samples: int = 1_000_000,
    mc_seed: int = 20171025,
) -> MetricResult:
    """Normalized hypervolume against the reference front's ideal/nadir.

    Objectives are scaled so the reference front spans [0, 1]; the reference
    point sits at 1.1 per objective and the result is divided by 1.1^m so a
    perfect front scores below 1.  Exact computation up to four objectives,
    seeded Monte Carlo above.
    """
    ref_front = np.atleast_2d(np.asarray(ref_front, dtype=float))
    m = ref_front.shape[1]
    approx = np.asarray(approx, dtype=float).reshape(-1, m) if np.size(approx) else np.empty((0, m))
    if len(approx) == 0:
        return MetricResult("HV", HV_FAILURE, failed=True)

    ideal = ref_front.min(axis=0)
    nadir = ref_front.max(axis=0)
    span = np.maximum(nadir - ideal, 1e-12)
    N = (approx - ideal) / span
    N = N[np.all(N < HV_REF_FACTOR, axis=1)]
    if len(N) == 0:
        return MetricResult("HV", HV_FAILURE, failed=True)

    ref = np.full(m, HV_REF_FACTOR)
    if m <= 4:
        raw = _hv_exact(N, ref)
    else:
        raw = _hv_monte_carlo(N, ref, mc_samples, mc_seed)
    return MetricResult("HV", float(raw / HV_REF_FACTOR ** m))
