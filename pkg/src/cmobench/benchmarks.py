"""Constrained DTLZ benchmark families, reference fronts and the registry.

All constraints are emitted in canonical form (value <= 0 means satisfied).
Decision vectors live in [0, 1]^n with the usual variable split: the first
m-1 variables set the position on the front, the rest feed the distance
function g.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .core import ProblemSpec, nondominated_mask
from .variation import das_dennis

DC_A = 3.0
DC_B = 0.5

SYNTHETIC_FAMILIES = (
    "C1_DTLZ1",
    "C1_DTLZ3",
    "C2_DTLZ2",
    "C3_DTLZ4",
    "DC1_DTLZ1",
    "DC1_DTLZ3",
    "DC2_DTLZ1",
    "DC2_DTLZ3",
    "DC3_DTLZ1",
    "DC3_DTLZ3",
)


class UnknownProblem(KeyError):
    pass


def canonical_name(name: str) -> str:
    return name.strip().upper().replace("-", "_")


# ---------------------------------------------------------------------------
# DTLZ building blocks (vectorized over a batch of rows)
# ---------------------------------------------------------------------------

def _g_rastrigin(Xm: np.ndarray) -> np.ndarray:
    # multimodal distance function of DTLZ1/DTLZ3
    d = Xm - 0.5
    return 100.0 * (Xm.shape[1] + np.sum(d * d - np.cos(20.0 * np.pi * d), axis=1))


def _g_sphere(Xm: np.ndarray) -> np.ndarray:
    d = Xm - 0.5
    return np.sum(d * d, axis=1)


def _linear_shape(pos: np.ndarray, g: np.ndarray, m: int) -> np.ndarray:
    k = pos.shape[0]
    F = np.empty((k, m))
    scale = 0.5 * (1.0 + g)
    cum = np.cumprod(pos, axis=1)  # x0, x0*x1, ...
    for i in range(m):
        if i == 0:
            F[:, 0] = scale * (cum[:, m - 2] if m >= 2 else 1.0)
        elif i < m - 1:
            F[:, i] = scale * cum[:, m - 2 - i] * (1.0 - pos[:, m - 1 - i])
        else:
            F[:, m - 1] = scale * (1.0 - pos[:, 0])
    return F


def _spherical_shape(pos: np.ndarray, g: np.ndarray, m: int) -> np.ndarray:
    k = pos.shape[0]
    theta = pos * (np.pi / 2.0)
    cos = np.cos(theta)
    sin = np.sin(theta)
    F = np.empty((k, m))
    scale = 1.0 + g
    cum = np.cumprod(cos, axis=1)
    for i in range(m):
        if i == 0:
            F[:, 0] = scale * cum[:, m - 2]
        elif i < m - 1:
            F[:, i] = scale * cum[:, m - 2 - i] * sin[:, m - 1 - i]
        else:
            F[:, m - 1] = scale * sin[:, 0]
    return F


def dtlz1_objectives(X: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    g = _g_rastrigin(X[:, m - 1:])
    return _linear_shape(X[:, : m - 1], g, m), g


def dtlz2_objectives(X: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    g = _g_sphere(X[:, m - 1:])
    return _spherical_shape(X[:, : m - 1], g, m), g


def dtlz3_objectives(X: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    g = _g_rastrigin(X[:, m - 1:])
    return _spherical_shape(X[:, : m - 1], g, m), g


def dtlz4_objectives(X: np.ndarray, m: int, alpha: float = 100.0) -> tuple[np.ndarray, np.ndarray]:
    g = _g_sphere(X[:, m - 1:])
    return _spherical_shape(X[:, : m - 1] ** alpha, g, m), g


# ---------------------------------------------------------------------------
# Constraint blocks (canonical: <= 0 feasible)
# ---------------------------------------------------------------------------

def c1_dtlz3_radius(m: int) -> float:
    if m <= 3:
        return 9.0
    if m <= 5:
        return 12.5
    return 15.0


def c2_dtlz2_radius(m: int) -> float:
    return 0.4 if m == 3 else 0.5


def _c1_dtlz1_con(F: np.ndarray) -> np.ndarray:
    m = F.shape[1]
    val = 1.0 - F[:, m - 1] / 0.6 - np.sum(F[:, : m - 1], axis=1) / 0.5
    return -val[:, None]


def _c1_dtlz3_con(F: np.ndarray) -> np.ndarray:
    r = c1_dtlz3_radius(F.shape[1])
    s = np.sum(F * F, axis=1)
    return -((s - 16.0) * (s - r * r))[:, None]


def _c2_dtlz2_con(F: np.ndarray) -> np.ndarray:
    m = F.shape[1]
    r = c2_dtlz2_radius(m)
    s = np.sum(F * F, axis=1)
    # distance to a ball around each objective axis unit vector
    per_axis = s[:, None] - 2.0 * F + 1.0 - r * r
    v1 = per_axis.min(axis=1)
    v2 = np.sum((F - 1.0 / math.sqrt(m)) ** 2, axis=1) - r * r
    return np.minimum(v1, v2)[:, None]


def _c3_dtlz4_con(F: np.ndarray) -> np.ndarray:
    s = np.sum(F * F, axis=1)
    return 1.0 - s[:, None] + 0.75 * F * F


def _dc1_con(X: np.ndarray) -> np.ndarray:
    return (DC_B - np.cos(DC_A * np.pi * X[:, 0]))[:, None]


def _dc2_con(g: np.ndarray) -> np.ndarray:
    return np.column_stack([
        DC_B - np.cos(DC_A * np.pi * g),
        DC_B - np.exp(-g),
    ])


def _dc3_con(X: np.ndarray, g: np.ndarray, m: int) -> np.ndarray:
    pos = DC_B - np.cos(DC_A * np.pi * X[:, : m - 1])
    dist = DC_B - np.cos(DC_A * np.pi * g)
    return np.column_stack([pos, dist])


# ---------------------------------------------------------------------------
# Problem construction
# ---------------------------------------------------------------------------

_FAMILY_SETUP: dict[str, tuple[Callable, int, Callable]] = {
    # family -> (objective fn, extra distance vars k, constraint builder)
    "C1_DTLZ1": (dtlz1_objectives, 5, lambda X, F, g, m: _c1_dtlz1_con(F)),
    "C1_DTLZ3": (dtlz3_objectives, 10, lambda X, F, g, m: _c1_dtlz3_con(F)),
    "C2_DTLZ2": (dtlz2_objectives, 10, lambda X, F, g, m: _c2_dtlz2_con(F)),
    "C3_DTLZ4": (dtlz4_objectives, 10, lambda X, F, g, m: _c3_dtlz4_con(F)),
    "DC1_DTLZ1": (dtlz1_objectives, 5, lambda X, F, g, m: _dc1_con(X)),
    "DC1_DTLZ3": (dtlz3_objectives, 10, lambda X, F, g, m: _dc1_con(X)),
    "DC2_DTLZ1": (dtlz1_objectives, 5, lambda X, F, g, m: _dc2_con(g)),
    "DC2_DTLZ3": (dtlz3_objectives, 10, lambda X, F, g, m: _dc2_con(g)),
    "DC3_DTLZ1": (dtlz1_objectives, 5, lambda X, F, g, m: _dc3_con(X, g, m)),
    "DC3_DTLZ3": (dtlz3_objectives, 10, lambda X, F, g, m: _dc3_con(X, g, m)),
}

_CONSTRAINT_COUNT = {
    "C1_DTLZ1": lambda m: 1,
    "C1_DTLZ3": lambda m: 1,
    "C2_DTLZ2": lambda m: 1,
    "C3_DTLZ4": lambda m: m,
    "DC1_DTLZ1": lambda m: 1,
    "DC1_DTLZ3": lambda m: 1,
    "DC2_DTLZ1": lambda m: 2,
    "DC2_DTLZ3": lambda m: 2,
    "DC3_DTLZ1": lambda m: m,
    "DC3_DTLZ3": lambda m: m,
}


def make_benchmark(name: str, m: int) -> ProblemSpec:
    """Instantiate a synthetic benchmark at the given objective count."""
    family = canonical_name(name)
    if family not in _FAMILY_SETUP:
        raise UnknownProblem(family)
    if m < 2:
        raise ValueError("m must be at least 2")
    obj_fn, k, con_fn = _FAMILY_SETUP[family]
    n = m + k - 1
    p = _CONSTRAINT_COUNT[family](m)

    def evaluator(X: np.ndarray):
        F, g = obj_fn(X, m)
        G = con_fn(X, F, g, m)
        return F, G, np.zeros((X.shape[0], 0))

    return ProblemSpec(
        name=family,
        m=m,
        n=n,
        p=p,
        q=0,
        lower=np.zeros(n),
        upper=np.ones(n),
        evaluator=evaluator,
        front_sampler=lambda size, _f=family, _m=m: reference_front(_f, _m, size),
    )


# ---------------------------------------------------------------------------
# Reference fronts
# ---------------------------------------------------------------------------

def _lattice_h(m: int, size: int) -> int:
    H = 1
    while comb(H + m - 1, m - 1) < size:
        H += 1
    return H


def _simplex_directions(m: int, size: int) -> np.ndarray:
    return das_dennis(m, _lattice_h(m, size)).vectors


def _sphere_directions(m: int, size: int) -> np.ndarray:
    w = _simplex_directions(m, size)
    return w / np.linalg.norm(w, axis=1, keepdims=True)


def _linear_positions_from_directions(B: np.ndarray) -> np.ndarray:
    """Invert the linear shape map: barycentric direction -> position vars."""
    k, m = B.shape
    X = np.zeros((k, m - 1))
    prod = np.ones(k)
    for j in range(m - 1):
        b = B[:, m - 1 - j]
        with np.errstate(divide="ignore", invalid="ignore"):
            x = np.where(prod > 1e-300, 1.0 - b / prod, 0.0)
        X[:, j] = np.clip(x, 0.0, 1.0)
        prod = prod * X[:, j]
    return X


def _spherical_positions_from_directions(S: np.ndarray) -> np.ndarray:
    """Invert the spherical shape map: unit direction -> position vars."""
    k, m = S.shape
    X = np.zeros((k, m - 1))
    prod = np.ones(k)
    for j in range(m - 1):
        s = S[:, m - 1 - j]
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(prod > 1e-300, s / prod, 0.0)
        theta = np.arcsin(np.clip(ratio, 0.0, 1.0))
        X[:, j] = theta / (np.pi / 2.0)
        prod = prod * np.cos(theta)
    return X


def _in_cos_window(x: np.ndarray) -> np.ndarray:
    return np.cos(DC_A * np.pi * x) >= DC_B - 1e-12


def reference_front(name: str, m: int, size: int = 1000) -> np.ndarray:
    """Deterministic sampling of the problem's Pareto front."""
    family = canonical_name(name)
    if family not in _FAMILY_SETUP:
        raise UnknownProblem(family)
    if size < m:
        raise ValueError("size must be at least m")

    if family.endswith("DTLZ1"):
        B = _simplex_directions(m, size)
        F = 0.5 * B
        if family == "DC1_DTLZ1":
            X = _linear_positions_from_directions(B)
            F = F[_in_cos_window(X[:, 0])]
        elif family == "DC3_DTLZ1":
            X = _linear_positions_from_directions(B)
            F = F[np.all(_in_cos_window(X), axis=1)]
    elif family == "C3_DTLZ4":
        S = _sphere_directions(m, size)
        t = 1.0 / np.sqrt(1.0 - 0.75 * np.max(S * S, axis=1))
        F = S * t[:, None]
    else:
        S = _sphere_directions(m, size)
        F = S
        if family == "C2_DTLZ2":
            F = F[_c2_dtlz2_con(F)[:, 0] <= 1e-12]
        elif family == "DC1_DTLZ3":
            X = _spherical_positions_from_directions(S)
            F = F[_in_cos_window(X[:, 0])]
        elif family == "DC3_DTLZ3":
            X = _spherical_positions_from_directions(S)
            F = F[np.all(_in_cos_window(X), axis=1)]

    if len(F) == 0:
        raise RuntimeError(f"empty reference front for {family} m={m}")
    F = F[nondominated_mask(F)]
    return F[np.lexsort(F.T[::-1])]


def front_filename(name: str, m: int) -> str:
    return f"{canonical_name(name)}_M{m}.pf"


def write_front(front: np.ndarray, path: Path) -> None:
    """Persist a front as one space-separated objective vector per line."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w") as fh:
        for row in front:
            fh.write(" ".join(repr(float(v)) for v in row) + "\n")
    tmp.replace(path)


def load_front(path: Path) -> np.ndarray:
    return np.loadtxt(path, ndmin=2)


def ensure_front(name: str, m: int, directory: Path, size: int = 1000) -> Path:
    """Generate-and-cache a reference front file; returns its path."""
    directory = Path(directory)
    path = directory / front_filename(name, m)
    if not path.exists():
        write_front(reference_front(name, m, size), path)
    return path


# ---------------------------------------------------------------------------
# Registry (synthetic constructors plus external real-world problem metadata)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegistryEntry:
    name: str
    m: int
    d: int
    ng: int
    nh: int
    mfe: int
    kind: str  # "builtin" or "external"
    constructor: Optional[Callable[[int], ProblemSpec]] = None


_RWMOP_TABLE = {
    # name: (M, D, ng, nh, MFE)
    "RWMOP1": (2, 4, 2, 2, 20000),
    "RWMOP2": (2, 5, 5, 0, 20000),
    "RWMOP3": (2, 3, 3, 0, 20000),
    "RWMOP4": (2, 4, 4, 0, 20000),
    "RWMOP5": (2, 4, 4, 0, 20000),
    "RWMOP6": (2, 7, 11, 0, 20000),
    "RWMOP7": (2, 4, 1, 0, 20000),
    "RWMOP8": (3, 7, 9, 0, 26250),
    "RWMOP9": (2, 4, 0, 0, 20000),
    "RWMOP10": (2, 2, 2, 0, 20000),
    "RWMOP11": (5, 3, 7, 0, 53000),
    "RWMOP12": (2, 4, 1, 0, 20000),
    "RWMOP13": (3, 7, 11, 0, 20000),
    "RWMOP14": (2, 5, 8, 0, 26250),
    "RWMOP15": (2, 3, 8, 0, 20000),
    "RWMOP16": (2, 2, 2, 0, 20000),
    "RWMOP17": (3, 6, 9, 0, 26250),
    "RWMOP18": (2, 3, 3, 0, 20000),
    "RWMOP19": (3, 10, 10, 0, 26250),
    "RWMOP20": (2, 4, 7, 0, 20000),
    "RWMOP21": (2, 6, 4, 0, 20000),
    "RWMOP22": (2, 9, 2, 4, 20000),
    "RWMOP23": (2, 6, 1, 4, 20000),
    "RWMOP24": (3, 9, 0, 6, 26250),
    "RWMOP25": (2, 2, 2, 0, 20000),
    "RWMOP26": (2, 3, 1, 1, 20000),
    "RWMOP27": (2, 3, 3, 0, 20000),
    "RWMOP28": (2, 7, 4, 4, 20000),
    "RWMOP29": (2, 7, 9, 0, 20000),
    "RWMOP30": (2, 25, 24, 0, 80000),
    "RWMOP31": (2, 25, 24, 0, 80000),
    "RWMOP32": (2, 25, 24, 0, 80000),
    "RWMOP33": (2, 30, 29, 0, 80000),
    "RWMOP34": (2, 30, 29, 0, 80000),
    "RWMOP35": (2, 30, 29, 0, 80000),
}


def registry_lookup(name: str) -> RegistryEntry:
    key = canonical_name(name)
    if key in _RWMOP_TABLE:
        m, d, ng, nh, mfe = _RWMOP_TABLE[key]
        return RegistryEntry(key, m, d, ng, nh, mfe, kind="external")
    if key in _FAMILY_SETUP:
        # synthetic families are scalable; report the 2-objective shape
        _, k, _ = _FAMILY_SETUP[key]
        return RegistryEntry(
            key, 2, 2 + k - 1, _CONSTRAINT_COUNT[key](2), 0, 0,
            kind="builtin", constructor=lambda m, _k=key: make_benchmark(_k, m),
        )
    raise UnknownProblem(name)


def rwmop_names() -> list[str]:
    return list(_RWMOP_TABLE)
