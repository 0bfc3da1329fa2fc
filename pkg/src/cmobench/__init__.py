"""Constrained evolutionary multi-objective optimization with a switchable
constraint-handling layer (true violation magnitudes vs. a crisp feasibility
bit), plus the benchmark and comparison harness around it."""

from .algorithms import Algorithm, AlgorithmConfig, MoeadConfig, RunResult, run_algorithm
from .benchmarks import make_benchmark, reference_front, registry_lookup
from .constraints import Comparison, ConstraintConfig, CVMode, constrained_compare
from .core import (
    BudgetExhausted,
    EvaluationBudget,
    Population,
    ProblemSpec,
    Solution,
    evaluate,
    pareto_dominates,
)
from .metrics import MetricResult, hv, igd, igd_plus
from .stats import a12, median_iqr, wilcoxon_signed_rank

__version__ = "0.1.0"

__all__ = [
    "Algorithm",
    "AlgorithmConfig",
    "BudgetExhausted",
    "Comparison",
    "ConstraintConfig",
    "CVMode",
    "EvaluationBudget",
    "MetricResult",
    "MoeadConfig",
    "Population",
    "ProblemSpec",
    "RunResult",
    "Solution",
    "a12",
    "constrained_compare",
    "evaluate",
    "hv",
    "igd",
    "igd_plus",
    "make_benchmark",
    "median_iqr",
    "pareto_dominates",
    "reference_front",
    "registry_lookup",
    "run_algorithm",
    "wilcoxon_signed_rank",
]
