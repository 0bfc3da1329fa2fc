"""The four constrained EMO algorithms behind one entry point."""

from __future__ import annotations

from ..constraints import ConstraintConfig
from ..core import ProblemSpec
from .common import Algorithm, AlgorithmConfig, MoeadConfig, RunResult
from .ctaea import run_ctaea
from .moead import run_cmoead
from .nsga2 import run_cnsga2
from .nsga3 import run_cnsga3

_RUNNERS = {
    Algorithm.CNSGA2: run_cnsga2,
    Algorithm.CNSGA3: run_cnsga3,
    Algorithm.CMOEAD: run_cmoead,
    Algorithm.CTAEA: run_ctaea,
}


def run_algorithm(
    problem: ProblemSpec,
    cfg: AlgorithmConfig,
    cht: ConstraintConfig,
    mfe: int,
    seed: int,
    collect_trace: bool = False,
) -> RunResult:
    return _RUNNERS[cfg.algorithm](problem, cfg, cht, mfe, seed, collect_trace)


__all__ = [
    "Algorithm",
    "AlgorithmConfig",
    "MoeadConfig",
    "RunResult",
    "run_algorithm",
    "run_cnsga2",
    "run_cnsga3",
    "run_cmoead",
    "run_ctaea",
]
