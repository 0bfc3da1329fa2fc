import math

import numpy as np
import pytest

from cmobench.benchmarks import (
    SYNTHETIC_FAMILIES,
    UnknownProblem,
    c1_dtlz3_radius,
    c2_dtlz2_radius,
    ensure_front,
    front_filename,
    load_front,
    make_benchmark,
    reference_front,
    registry_lookup,
    rwmop_names,
    write_front,
)
from cmobench.constraints import ConstraintConfig
from cmobench.core import evaluate, evaluate_batch, make_rng, nondominated_mask

CHT = ConstraintConfig()


# independent feasibility predicates, straight from the originating suites
def _textbook_feasible(name: str, m: int, x: np.ndarray, F: np.ndarray) -> bool:
    a, b = 3.0, 0.5
    if name == "C1_DTLZ1":
        return 1.0 - F[m - 1] / 0.6 - sum(F[i] / 0.5 for i in range(m - 1)) >= 0
    if name == "C1_DTLZ3":
        r = c1_dtlz3_radius(m)
        s = float(np.sum(F**2))
        return (s - 16.0) * (s - r * r) >= 0
    if name == "C2_DTLZ2":
        r = c2_dtlz2_radius(m)
        v1 = min(
            (F[i] - 1.0) ** 2 + sum(F[j] ** 2 for j in range(m) if j != i) - r * r
            for i in range(m)
        )
        v2 = sum((F[i] - 1.0 / math.sqrt(m)) ** 2 for i in range(m)) - r * r
        return min(v1, v2) <= 0
    if name == "C3_DTLZ4":
        return all(
            F[j] ** 2 / 4.0 + sum(F[i] ** 2 for i in range(m) if i != j) - 1.0 >= 0
            for j in range(m)
        )
    if name in ("DC1_DTLZ1", "DC1_DTLZ3"):
        return math.cos(a * math.pi * x[0]) >= b
    if name in ("DC2_DTLZ1", "DC2_DTLZ3"):
        g = _distance_g(name, m, x)
        return math.cos(a * math.pi * g) >= b and math.exp(-g) >= b
    if name in ("DC3_DTLZ1", "DC3_DTLZ3"):
        g = _distance_g(name, m, x)
        return all(math.cos(a * math.pi * x[j]) >= b for j in range(m - 1)) and math.cos(
            a * math.pi * g
        ) >= b
    raise AssertionError(name)


def _distance_g(name: str, m: int, x: np.ndarray) -> float:
    xm = x[m - 1:]
    d = xm - 0.5
    if name.endswith("DTLZ1") or name.endswith("DTLZ3"):
        return 100.0 * (len(xm) + float(np.sum(d * d - np.cos(20 * np.pi * d))))
    return float(np.sum(d * d))


@pytest.mark.parametrize("name", SYNTHETIC_FAMILIES)
@pytest.mark.parametrize("m", [2, 3])
def test_canonical_constraints_match_textbook_predicates(name, m):
    problem = make_benchmark(name, m)
    rng = make_rng(hash((name, m)) % 2**32)
    X = rng.random((300, problem.n))
    # mix in near-optimal points so both sides of each constraint are hit
    X[:80, m - 1:] = 0.5 + (X[:80, m - 1:] - 0.5) * 0.01
    F, C, cv, _, _ = evaluate_batch(problem, X, CHT)
    for i in range(len(X)):
        assert (cv[i] == 0.0) == _textbook_feasible(name, m, X[i], F[i]), (name, m, i)


def test_dimensions_follow_dtlz_conventions():
    p = make_benchmark("C1_DTLZ1", 2)
    assert (p.n, p.p, p.q) == (6, 1, 0)
    p = make_benchmark("C3_DTLZ4", 3)
    assert (p.n, p.p, p.q) == (12, 3, 0)
    p = make_benchmark("DC2_DTLZ3", 5)
    assert (p.n, p.p, p.q) == (14, 2, 0)
    p = make_benchmark("DC3_DTLZ1", 3)
    assert (p.n, p.p, p.q) == (7, 3, 0)


def test_dc1_constraint_example_point():
    # cos(3 * pi * 0.5) = 0 < 0.5: infeasible
    p = make_benchmark("DC1_DTLZ1", 2)
    x = np.full(6, 0.5)
    s = evaluate(p, x, CHT)
    assert s.cv > 0


def test_dc1_feasibility_periodic_in_first_variable():
    p = make_benchmark("DC1_DTLZ1", 2)
    rng = make_rng(3)
    for _ in range(50):
        x = rng.random(6)
        base = evaluate(p, x, CHT).cv == 0.0
        if x[0] + 2.0 / 3.0 <= 1.0:
            shifted = x.copy()
            shifted[0] += 2.0 / 3.0
            assert (evaluate(p, shifted, CHT).cv == 0.0) == base


def test_c1_dtlz1_pareto_front_feasible():
    p = make_benchmark("C1_DTLZ1", 3)
    rng = make_rng(9)
    X = rng.random((200, p.n))
    X[:, 2:] = 0.5  # distance variables at the optimum
    _, _, cv, _, _ = evaluate_batch(p, X, CHT)
    assert np.all(cv == 0.0)


def test_unknown_problem_rejected():
    with pytest.raises(UnknownProblem):
        make_benchmark("C9_DTLZ9", 2)


# ---------------------------------------------------------------------------
# Reference fronts
# ---------------------------------------------------------------------------

def test_dtlz1_front_on_half_simplex():
    F = reference_front("C1_DTLZ1", 2, 1000)
    assert len(F) == 1000
    assert np.allclose(F.sum(axis=1), 0.5, atol=1e-12)


def test_c2_front_subset_of_sphere():
    # at three objectives the ball constraints remove part of the sphere;
    # at two objectives they happen to cover the whole arc
    F3 = reference_front("C2_DTLZ2", 3, 1000)
    full3 = reference_front("C1_DTLZ3", 3, 1000)
    assert 0 < len(F3) < len(full3)
    assert np.allclose(np.linalg.norm(F3, axis=1), 1.0, atol=1e-9)
    assert len(reference_front("C2_DTLZ2", 2, 1000)) == 1000


def test_dc1_front_keeps_only_window_segments():
    F = reference_front("DC1_DTLZ1", 2, 1000)
    # feasible position windows map to f1 in [0, 1/18] u [5/18, 7/18]
    x1 = F[:, 0] / 0.5
    ok = (x1 <= 1.0 / 9.0 + 1e-9) | ((x1 >= 5.0 / 9.0 - 1e-9) & (x1 <= 7.0 / 9.0 + 1e-9))
    assert len(F) > 0 and np.all(ok)


def test_c3_dtlz4_front_sits_on_active_constraint_boundary():
    F = reference_front("C3_DTLZ4", 3, 500)
    vals = 1.0 - np.sum(F * F, axis=1)[:, None] + 0.75 * F * F
    # all constraints satisfied, the binding one tight
    assert np.all(vals <= 1e-9)
    assert np.allclose(vals.max(axis=1), 0.0, atol=1e-9)


def test_front_is_nondominated_and_sorted():
    F = reference_front("DC3_DTLZ3", 3, 600)
    assert nondominated_mask(F).all()
    assert np.array_equal(F, F[np.lexsort(F.T[::-1])])


def test_front_files_bitwise_identical(tmp_path):
    a, b = tmp_path / "a.pf", tmp_path / "b.pf"
    write_front(reference_front("C2_DTLZ2", 2, 500), a)
    write_front(reference_front("C2_DTLZ2", 2, 500), b)
    assert a.read_bytes() == b.read_bytes()
    assert np.array_equal(load_front(a), load_front(b))


def test_ensure_front_caches(tmp_path):
    p1 = ensure_front("C1_DTLZ1", 2, tmp_path, 300)
    stamp = p1.stat().st_mtime_ns
    p2 = ensure_front("C1_DTLZ1", 2, tmp_path, 300)
    assert p1 == p2 and p2.stat().st_mtime_ns == stamp
    assert p1.name == front_filename("C1_DTLZ1", 2) == "C1_DTLZ1_M2.pf"


def test_front_requires_enough_points():
    with pytest.raises(ValueError):
        reference_front("C1_DTLZ1", 3, 2)


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

def test_registry_rwmop_rows():
    e = registry_lookup("RWMOP11")
    assert (e.m, e.d, e.ng, e.nh, e.mfe) == (5, 3, 7, 0, 53000)
    e = registry_lookup("RWMOP30")
    assert (e.m, e.d, e.ng, e.nh, e.mfe) == (2, 25, 24, 0, 80000)
    assert e.kind == "external"


def test_registry_unknown_name():
    with pytest.raises(UnknownProblem):
        registry_lookup("RWMOP99")


def test_registry_covers_all_rwmops_and_builtins():
    assert len(rwmop_names()) == 35
    e = registry_lookup("C1_DTLZ1")
    assert e.kind == "builtin"
    assert e.constructor(3).m == 3
