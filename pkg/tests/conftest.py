import numpy as np
import pytest

from cmobench.core import ProblemSpec


def toy_unconstrained(m: int = 2, n: int = 4) -> ProblemSpec:
    """Sphere-like unconstrained problem: objectives trade off along x[0]."""

    def evaluator(X):
        g = np.sum((X[:, 1:] - 0.5) ** 2, axis=1)
        f1 = X[:, 0] * (1.0 + g)
        f2 = (1.0 - X[:, 0]) * (1.0 + g)
        F = np.column_stack([f1, f2] + [f1 * 0.5 + f2 * 0.5] * (m - 2))
        return F, np.zeros((X.shape[0], 0)), np.zeros((X.shape[0], 0))

    return ProblemSpec(
        name="toy", m=m, n=n, p=0, q=0,
        lower=np.zeros(n), upper=np.ones(n), evaluator=evaluator,
    )


def toy_constrained(n: int = 4) -> ProblemSpec:
    """Two objectives plus one inequality keeping x[0] at or above 0.25."""

    def evaluator(X):
        g = np.sum((X[:, 1:] - 0.5) ** 2, axis=1)
        F = np.column_stack([X[:, 0] * (1 + g), (1 - X[:, 0]) * (1 + g)])
        G = (0.25 - X[:, 0])[:, None]
        return F, G, np.zeros((X.shape[0], 0))

    return ProblemSpec(
        name="toy-con", m=2, n=n, p=1, q=0,
        lower=np.zeros(n), upper=np.ones(n), evaluator=evaluator,
    )


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(1234))
