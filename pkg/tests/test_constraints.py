import numpy as np
import pytest

from cmobench.constraints import (
    Comparison,
    ConstraintConfig,
    CVMode,
    aggregate_cv,
    compare_keys,
    constrained_compare,
    constrained_dominance_matrix,
    effective_cv,
    violation_degrees,
)
from cmobench.core import Solution, pareto_dominates


def sol(f, cv, mode=CVMode.TRUE_CV):
    ecv = float(effective_cv(np.array([cv]), mode)[0])
    return Solution(np.zeros(1), np.asarray(f, float), np.zeros(1), cv, ecv, 0)


def test_violation_degrees_examples():
    cfg = ConstraintConfig()
    assert violation_degrees([[-1.0]], np.zeros((1, 0)), cfg)[0] == pytest.approx([0.0])
    assert violation_degrees(np.zeros((1, 0)), [[0.0]], cfg)[0] == pytest.approx([0.0])
    c = violation_degrees([[0.5, -2.0]], [[1e-3]], cfg)[0]
    assert c == pytest.approx([0.5, 0.0, 0.000999])


def test_violation_degrees_normalization_factors():
    cfg = ConstraintConfig(a=np.array([2.0]), b=np.array([-4.0]))
    c = violation_degrees([[1.0]], [[2.0]], cfg)[0]
    assert c == pytest.approx([0.5, 0.5 - 1e-6])


def test_aggregate_cv_examples():
    assert aggregate_cv([[0.0, 0.0, 0.0]])[0] == 0.0
    assert aggregate_cv([[0.5, 0.0, 1.5]])[0] == 2.0
    assert aggregate_cv(np.zeros((1, 0)))[0] == 0.0


def test_aggregate_cv_monotone(rng):
    C = rng.random((50, 4))
    bigger = C + rng.random((50, 4))
    assert np.all(aggregate_cv(bigger) >= aggregate_cv(C))


def test_effective_cv_examples():
    assert effective_cv(np.array([0.0]), CVMode.CRISP)[0] == 1.0
    assert effective_cv(np.array([3.7]), CVMode.CRISP)[0] == -1.0
    assert effective_cv(np.array([3.7]), CVMode.TRUE_CV)[0] == 3.7


def test_constrained_compare_feasible_beats_infeasible():
    assert constrained_compare(sol((5, 5), 0.0), sol((0, 0), 2.0)) == Comparison.FIRST_DOMINATES


def test_constrained_compare_smaller_cv_wins_when_infeasible():
    assert constrained_compare(sol((1, 1), 0.2), sol((0, 0), 0.5)) == Comparison.FIRST_DOMINATES


def test_constrained_compare_crisp_infeasible_tie_is_incomparable():
    a = sol((1, 2), 0.2, CVMode.CRISP)
    b = sol((2, 1), 0.5, CVMode.CRISP)
    assert constrained_compare(a, b) == Comparison.NEITHER
    # objectives do not break the tie either way
    c = sol((1, 1), 0.5, CVMode.CRISP)
    assert constrained_compare(a, c) == Comparison.NEITHER


def test_constrained_compare_feasible_pair_is_pareto(rng):
    for _ in range(200):
        f1, f2 = rng.random(3), rng.random(3)
        rel = constrained_compare(sol(f1, 0.0), sol(f2, 0.0))
        if pareto_dominates(f1, f2):
            assert rel == Comparison.FIRST_DOMINATES
        elif pareto_dominates(f2, f1):
            assert rel == Comparison.SECOND_DOMINATES
        else:
            assert rel == Comparison.NEITHER


def test_crisp_compare_depends_only_on_feasibility_bit(rng):
    # metamorphic: scaling all violations by any positive factor changes nothing
    for _ in range(200):
        f1, f2 = rng.random(2), rng.random(2)
        cv1, cv2 = rng.choice([0.0, 0.3, 2.5]), rng.choice([0.0, 0.9, 7.0])
        scale = rng.uniform(0.1, 50.0)
        base = constrained_compare(sol(f1, cv1, CVMode.CRISP), sol(f2, cv2, CVMode.CRISP))
        scaled = constrained_compare(
            sol(f1, cv1 * scale, CVMode.CRISP), sol(f2, cv2 * scale, CVMode.CRISP)
        )
        assert base == scaled


def test_constrained_compare_asymmetric(rng):
    for _ in range(300):
        a = sol(rng.random(2), rng.choice([0.0, 0.4, 1.2]))
        b = sol(rng.random(2), rng.choice([0.0, 0.4, 1.2]))
        fwd = constrained_compare(a, b)
        rev = constrained_compare(b, a)
        if fwd == Comparison.FIRST_DOMINATES:
            assert rev == Comparison.SECOND_DOMINATES
        if fwd == Comparison.NEITHER:
            assert rev == Comparison.NEITHER


def test_dominance_matrix_matches_pairwise_comparator(rng):
    n = 40
    F = rng.random((n, 3))
    cv = np.where(rng.random(n) < 0.4, 0.0, rng.random(n) * 2)
    for mode in CVMode:
        ecv = effective_cv(cv, mode)
        dom = constrained_dominance_matrix(F, cv == 0.0, ecv)
        for i in range(n):
            for j in range(n):
                rel = compare_keys(cv[i] == 0.0, ecv[i], F[i], cv[j] == 0.0, ecv[j], F[j])
                assert dom[i, j] == (rel == Comparison.FIRST_DOMINATES)


def test_config_validation():
    with pytest.raises(ValueError):
        ConstraintConfig(epsilon=0.0)
    with pytest.raises(ValueError):
        ConstraintConfig(a=np.array([0.0]))
