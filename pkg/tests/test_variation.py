import numpy as np
import pytest
from math import comb

from cmobench.core import make_rng
from cmobench.variation import (
    VariationConfig,
    WeightVectorSet,
    das_dennis,
    polynomial_mutation,
    polynomial_mutation_batch,
    sbx_crossover,
    sbx_crossover_batch,
    two_layer,
)

LO = np.zeros(6)
HI = np.ones(6)


def test_sbx_pc_zero_copies_parents(rng):
    cfg = VariationConfig(pc=0.0)
    p1, p2 = rng.random(6), rng.random(6)
    c1, c2 = sbx_crossover(p1, p2, cfg, LO, HI, rng)
    assert np.array_equal(c1, p1) and np.array_equal(c2, p2)


def test_sbx_identical_parents_identity(rng):
    cfg = VariationConfig()
    p = rng.random(6)
    c1, c2 = sbx_crossover(p, p.copy(), cfg, LO, HI, rng)
    assert np.array_equal(c1, p) and np.array_equal(c2, p)


def test_sbx_children_in_bounds_property():
    # 10^4 random pairs stay inside the box
    rng = make_rng(99)
    cfg = VariationConfig()
    P1 = rng.random((10_000, 6))
    P2 = rng.random((10_000, 6))
    C1, C2 = sbx_crossover_batch(P1, P2, cfg, LO, HI, rng)
    for C in (C1, C2):
        assert np.all(C >= LO) and np.all(C <= HI)


def test_mutation_pm_zero_identity(rng):
    cfg = VariationConfig(pm=0.0)
    x = rng.random(6)
    assert np.array_equal(polynomial_mutation(x, cfg, LO, HI, rng), x)


def test_mutation_in_bounds_and_boundary_start():
    rng = make_rng(5)
    cfg = VariationConfig(pm=1.0)
    X = rng.random((10_000, 6))
    X[0] = LO  # boundary start stays clamped
    out = polynomial_mutation_batch(X, cfg, LO, HI, rng)
    assert np.all(out >= LO) and np.all(out <= HI)


def test_mutation_step_shrinks_with_eta():
    # Monte Carlo: mean |delta| decreases as the distribution index grows
    x = np.full((10_000, 6), 0.5)
    means = []
    for eta in (5.0, 20.0, 80.0):
        rng = make_rng(11)
        out = polynomial_mutation_batch(x, VariationConfig(pm=1.0, eta_m=eta), LO, HI, rng)
        means.append(np.abs(out - 0.5).mean())
    assert means[0] > means[1] > means[2]


def test_variation_deterministic_per_seed():
    cfg = VariationConfig()
    P1 = make_rng(1).random((50, 6))
    P2 = make_rng(2).random((50, 6))
    a = sbx_crossover_batch(P1, P2, cfg, LO, HI, make_rng(7))
    b = sbx_crossover_batch(P1, P2, cfg, LO, HI, make_rng(7))
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


@pytest.mark.parametrize(
    "m,H,expected",
    [(2, 90, 91), (3, 12, 91), (5, 6, 210), (2, 4, 5), (4, 5, comb(8, 3))],
)
def test_das_dennis_counts(m, H, expected):
    ws = das_dennis(m, H)
    assert len(ws) == expected == comb(H + m - 1, m - 1)
    V = ws.vectors
    assert np.allclose(V.sum(axis=1), 1.0, atol=1e-12)
    # components on the 1/H grid
    assert np.allclose(np.round(V * H), V * H, atol=1e-9)


def test_two_layer_matches_population_schedule():
    ws = two_layer(10, 3, 2)
    assert len(ws) == 275 == comb(12, 9) + comb(11, 9)
    assert np.allclose(ws.vectors.sum(axis=1), 1.0, atol=1e-12)
    # no duplicates across layers
    assert len(np.unique(ws.vectors.round(12), axis=0)) == 275


def test_weight_vector_set_validation():
    with pytest.raises(ValueError):
        WeightVectorSet(np.array([[0.5, 0.6]]))
    with pytest.raises(ValueError):
        WeightVectorSet(np.array([[0.5, 0.5], [0.5, 0.5]]))


def test_variation_config_validation():
    with pytest.raises(ValueError):
        VariationConfig(pc=1.5)
    with pytest.raises(ValueError):
        VariationConfig(eta_m=0.0)
    assert VariationConfig().pm_for(10) == pytest.approx(0.1)
