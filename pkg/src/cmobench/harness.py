"""Experiment runner: run-matrix execution, persistence and table emitters.

The result store is a CSV with one row per (run, metric).  Everything the
store and the emitters produce is deterministic for a given configuration;
wall-clock timings therefore live in a separate sidecar file and the
``wall_ms`` column of the store is a fixed placeholder.
"""

from __future__ import annotations

import concurrent.futures as cf
import csv
import functools
import io
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

import numpy as np
import yaml

from .algorithms import Algorithm, AlgorithmConfig, RunResult, run_algorithm
from .benchmarks import (
    SYNTHETIC_FAMILIES,
    canonical_name,
    ensure_front,
    front_filename,
    load_front,
    make_benchmark,
)
from .constraints import ConstraintConfig, CVMode
from .core import nondominated_mask
from .metrics import hv, igd, igd_plus
from .stats import (
    A12Band,
    ComparisonSummary,
    Orientation,
    a12,
    median_iqr,
    rank_sum_p,
    wilcoxon_p,
)
from .variation import WeightVectorSet, das_dennis, two_layer

CSV_HEADER = ["problem", "M", "algorithm", "cht_mode", "seed", "metric", "value", "failed", "evals", "wall_ms"]
METRICS = ("IGD", "IGDplus", "HV")
METRIC_ORIENTATION = {
    "IGD": Orientation.LOWER_BETTER,
    "IGDplus": Orientation.LOWER_BETTER,
    "HV": Orientation.HIGHER_BETTER,
}

# population size and reference-direction lattice per objective count
SYNTHETIC_POP = {2: 91, 3: 91, 5: 210, 10: 275}
SYNTHETIC_LATTICE = {2: ("single", 90), 3: ("single", 12), 5: ("single", 6), 10: ("two", 3, 2)}
RWCMOP_POP = {2: 80, 3: 105, 4: 143, 5: 212}

# evaluation budgets as multiples of N, per problem and objective count
MFE_MULTIPLIER = {
    "C1_DTLZ1": {2: 500, 3: 500, 5: 600, 10: 1000},
    "C1_DTLZ3": {2: 1000, 3: 1000, 5: 1500, 10: 3000},
    "C2_DTLZ2": {2: 250, 3: 250, 5: 350, 10: 750},
    "C3_DTLZ4": {2: 750, 3: 750, 5: 1250, 10: 3000},
    "DC1_DTLZ1": {2: 600, 3: 800, 5: 600, 10: 800},
    "DC1_DTLZ3": {2: 600, 3: 1000, 5: 1000, 10: 1200},
    "DC2_DTLZ1": {2: 700, 3: 700, 5: 500, 10: 600},
    "DC2_DTLZ3": {2: 900, 3: 1100, 5: 1400, 10: 1500},
    "DC3_DTLZ1": {2: 700, 3: 700, 5: 600, 10: 600},
    "DC3_DTLZ3": {2: 1000, 3: 1300, 5: 1400, 10: 1800},
}

ALGORITHM_LABEL = {
    "CNSGA2": "C-NSGA-II",
    "CNSGA3": "C-NSGA-III",
    "CMOEAD": "C-MOEA/D",
    "CTAEA": "C-TAEA",
}


@functools.lru_cache(maxsize=None)
def weights_for(m: int) -> WeightVectorSet:
    spec = SYNTHETIC_LATTICE[m]
    if spec[0] == "single":
        return das_dennis(m, spec[1])
    return two_layer(m, spec[1], spec[2])


def population_size(m: int) -> int:
    return SYNTHETIC_POP[m]


def default_mfe(problem: str, m: int) -> int:
    return MFE_MULTIPLIER[canonical_name(problem)][m] * population_size(m)


@dataclass
class ExperimentConfig:
    problems: list[tuple[str, int]]          # (name, m) cells
    algorithms: list[str] = field(default_factory=lambda: ["CNSGA2", "CNSGA3", "CMOEAD", "CTAEA"])
    cht_modes: list[str] = field(default_factory=lambda: ["truecv", "crisp"])
    seed_base: int = 3077
    repeats: int = 31
    budgets: dict = field(default_factory=dict)  # {(problem, m): mfe} overrides
    front_size: int = 1000
    jobs: int = 2
    pairing: str = "signed_rank"  # or "rank_sum"
    alpha: float = 0.05

    def __post_init__(self):
        if self.repeats < 1:
            raise ValueError("repeat count must be positive")
        self.problems = [(canonical_name(p), int(m)) for p, m in self.problems]
        self.algorithms = [a.upper() for a in self.algorithms]
        for a in self.algorithms:
            Algorithm(a)
        for mode in self.cht_modes:
            CVMode(mode)
        if self.pairing not in ("signed_rank", "rank_sum"):
            raise ValueError("pairing must be signed_rank or rank_sum")

    def mfe_for(self, problem: str, m: int) -> int:
        key = (canonical_name(problem), m)
        if key in self.budgets:
            return int(self.budgets[key])
        return default_mfe(*key)

    def cells(self) -> list[tuple]:
        out = []
        for problem, m in self.problems:
            mfe = self.mfe_for(problem, m)
            for algo in self.algorithms:
                for mode in self.cht_modes:
                    for rep in range(self.repeats):
                        out.append((problem, m, algo, mode, self.seed_base + rep, mfe))
        return out


def default_config(desk: bool = False, **overrides) -> ExperimentConfig:
    ms = [2, 3] if desk else [2, 3, 5, 10]
    problems = [(p, m) for p in SYNTHETIC_FAMILIES for m in ms]
    cfg = ExperimentConfig(problems=problems, repeats=11 if desk else 31)
    for key, value in overrides.items():
        setattr(cfg, key, value)
    return cfg


def load_config(path: Path) -> ExperimentConfig:
    raw = yaml.safe_load(Path(path).read_text())
    problems = []
    for entry in raw["problems"]:
        for m in entry["m"]:
            problems.append((entry["name"], int(m)))
    budgets = {}
    for name, per_m in (raw.get("budgets") or {}).items():
        for m, mfe in per_m.items():
            budgets[(canonical_name(name), int(m))] = int(mfe)
    return ExperimentConfig(
        problems=problems,
        algorithms=raw.get("algorithms", ["CNSGA2", "CNSGA3", "CMOEAD", "CTAEA"]),
        cht_modes=raw.get("cht_modes", ["truecv", "crisp"]),
        seed_base=int(raw.get("seed_base", 3077)),
        repeats=int(raw.get("repeats", 31)),
        budgets=budgets,
        front_size=int(raw.get("front_size", 1000)),
        jobs=int(raw.get("jobs", 2)),
        pairing=raw.get("pairing", "signed_rank"),
        alpha=float(raw.get("alpha", 0.05)),
    )


def dump_resolved_config(cfg: ExperimentConfig, out_dir: Path) -> None:
    resolved = {
        "problems": [{"name": p, "m": m, "N": population_size(m), "mfe": cfg.mfe_for(p, m)} for p, m in cfg.problems],
        "algorithms": cfg.algorithms,
        "cht_modes": cfg.cht_modes,
        "seed_base": cfg.seed_base,
        "repeats": cfg.repeats,
        "front_size": cfg.front_size,
        "pairing": cfg.pairing,
        "alpha": cfg.alpha,
        "reference_directions": {
            str(m): {"kind": SYNTHETIC_LATTICE[m][0], "H": list(SYNTHETIC_LATTICE[m][1:]), "count": population_size(m)}
            for m in sorted({m for _, m in cfg.problems})
        },
        "rwcmop_population_sizes": RWCMOP_POP,
    }
    (out_dir / "config_resolved.yaml").write_text(
        yaml.safe_dump(resolved, sort_keys=True, default_flow_style=False)
    )


# ---------------------------------------------------------------------------
# Single-run execution
# ---------------------------------------------------------------------------

def run_single(
    problem_name: str,
    m: int,
    algorithm: str,
    mode: str,
    seed: int,
    mfe: Optional[int] = None,
    collect_trace: bool = False,
) -> RunResult:
    problem = make_benchmark(problem_name, m)
    algo = Algorithm(algorithm.upper())
    N = population_size(m)
    weights = None if algo is Algorithm.CNSGA2 else weights_for(m)
    cfg = AlgorithmConfig(algorithm=algo, N=N, weights=weights)
    cht = ConstraintConfig(mode=CVMode(mode))
    if mfe is None:
        mfe = default_mfe(problem_name, m)
    return run_algorithm(problem, cfg, cht, mfe, seed, collect_trace)


def feasible_nondominated(result: RunResult) -> np.ndarray:
    """Objective vectors of the feasible nondominated final solutions."""
    F = result.F[result.feasible]
    if len(F) == 0:
        return F
    return F[nondominated_mask(F)]


def score_run(result: RunResult, ref_front: np.ndarray) -> dict[str, tuple[float, bool]]:
    A = feasible_nondominated(result)
    out = {}
    for name, fn in (("IGD", igd), ("IGDplus", igd_plus)):
        r = fn(A, ref_front)
        out[name] = (r.value, r.failed)
    r = hv(A, ref_front)
    out["HV"] = (r.value, r.failed)
    return out


def _run_cell(args: tuple) -> tuple:
    problem, m, algo, mode, seed, mfe, front_path = args
    t0 = time.perf_counter()
    result = run_single(problem, m, algo, mode, seed, mfe)
    scores = score_run(result, load_front(Path(front_path)))
    wall_ms = int(round((time.perf_counter() - t0) * 1000.0))
    rows = [
        (problem, m, algo, mode, seed, metric, value, failed, result.evaluations)
        for metric, (value, failed) in scores.items()
    ]
    return rows, wall_ms


# ---------------------------------------------------------------------------
# Result store
# ---------------------------------------------------------------------------

def _format_row(problem, m, algo, mode, seed, metric, value, failed, evals) -> list[str]:
    return [
        problem, str(m), algo, mode, str(seed), metric,
        f"{value:.5e}", "1" if failed else "0", str(evals), "0",
    ]


def _row_key(row: list[str]) -> tuple:
    return (row[0], int(row[1]), row[2], row[3], int(row[4]), METRICS.index(row[5]))


def read_store(path: Path) -> list[list[str]]:
    if not Path(path).exists():
        return []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_HEADER:
            raise ValueError(f"unexpected store header in {path}")
        return [row for row in reader]


def write_store(rows: Iterable[list[str]], path: Path) -> None:
    rows = sorted(rows, key=_row_key)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    writer.writerows(rows)
    Path(path).write_text(buf.getvalue())


def run_experiment(cfg: ExperimentConfig, out_dir: Path, jobs: Optional[int] = None) -> Path:
    """Execute the configured run matrix; returns the path of the store.

    Cells already present in an existing store are not recomputed, so an
    interrupted matrix resumes where it stopped.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    fronts_dir = out_dir / "fronts"
    front_paths = {}
    for problem, m in cfg.problems:
        front_paths[(problem, m)] = ensure_front(problem, m, fronts_dir, cfg.front_size)
    dump_resolved_config(cfg, out_dir)

    store_path = out_dir / "results.csv"
    existing = read_store(store_path)
    have = {(r[0], int(r[1]), r[2], r[3], int(r[4])) for r in existing}

    todo = [
        (problem, m, algo, mode, seed, mfe, str(front_paths[(problem, m)]))
        for (problem, m, algo, mode, seed, mfe) in cfg.cells()
        if (problem, m, algo, mode, seed) not in have
    ]

    jobs = cfg.jobs if jobs is None else jobs
    new_rows: list[list[str]] = []
    timings: list[tuple] = []
    if todo:
        if jobs > 1:
            with cf.ProcessPoolExecutor(max_workers=jobs) as pool:
                for (rows, wall_ms), task in zip(pool.map(_run_cell, todo, chunksize=1), todo):
                    new_rows.extend(_format_row(*row) for row in rows)
                    timings.append((task[0], task[1], task[2], task[3], task[4], wall_ms))
        else:
            for task in todo:
                rows, wall_ms = _run_cell(task)
                new_rows.extend(_format_row(*row) for row in rows)
                timings.append((task[0], task[1], task[2], task[3], task[4], wall_ms))

    write_store(existing + new_rows, store_path)
    if timings:
        timings_path = out_dir / "timings.csv"
        fresh = not timings_path.exists()
        with open(timings_path, "a", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            if fresh:
                writer.writerow(["problem", "M", "algorithm", "cht_mode", "seed", "wall_ms"])
            writer.writerows(sorted(timings))
    return store_path


# ---------------------------------------------------------------------------
# Comparison tables
# ---------------------------------------------------------------------------

def store_samples(rows: list[list[str]]) -> dict:
    """Store rows -> {(problem, m, algo, mode, metric): [value per seed]}."""
    cells: dict[tuple, list[tuple[int, float]]] = {}
    for r in rows:
        key = (r[0], int(r[1]), r[2], r[3], r[5])
        cells.setdefault(key, []).append((int(r[4]), float(r[6])))
    return {k: np.array([v for _, v in sorted(vals)]) for k, vals in cells.items()}


def compare_pair(
    x: np.ndarray,
    y: np.ndarray,
    orientation: Orientation,
    alpha: float,
    pairing: str = "signed_rank",
) -> tuple[str, float]:
    """Verdict for sample x against y plus the p-value used."""
    if pairing == "signed_rank":
        p, w_plus, w_minus, n = wilcoxon_p(x, y)
        if n == 0 or p >= alpha:
            return "=", p
        direction = float(np.median(x) - np.median(y))
        if direction == 0.0:
            direction = w_plus - w_minus
    else:
        p = rank_sum_p(x, y)
        if p >= alpha:
            return "=", p
        direction = float(np.median(x) - np.median(y))
    if direction == 0.0:
        return "=", p
    x_better = direction < 0 if orientation is Orientation.LOWER_BETTER else direction > 0
    return ("+" if x_better else "-"), p


def summarize_store(
    rows: list[list[str]],
    alpha: float = 0.05,
    pairing: str = "signed_rank",
) -> list[ComparisonSummary]:
    """Crisp-variant-vs-baseline comparison for every (problem, M, algo, metric)."""
    samples = store_samples(rows)
    keys = sorted({(r[0], int(r[1]), r[2]) for r in rows})
    out = []
    for problem, m, algo in keys:
        for metric in METRICS:
            xv = samples.get((problem, m, algo, "crisp", metric))
            yv = samples.get((problem, m, algo, "truecv", metric))
            if xv is None or yv is None:
                continue
            verdict, p = compare_pair(xv, yv, METRIC_ORIENTATION[metric], alpha, pairing)
            value, band = a12(xv, yv)
            mx, ix = median_iqr(xv)
            my, iy = median_iqr(yv)
            out.append(ComparisonSummary(
                problem=problem, m=m, metric=metric,
                first=f"v{ALGORITHM_LABEL[algo]}", second=ALGORITHM_LABEL[algo],
                verdict=verdict, p_value=p, a12=value, a12_band=band,
                median_first=mx, iqr_first=ix, median_second=my, iqr_second=iy,
            ))
    return out


def _fmt_median_iqr(median: float, iqr: float) -> str:
    return f"{median:.4e} ({iqr:.2e})"


def emit_comparison_tables(
    rows: list[list[str]],
    out_dir: Path,
    alpha: float = 0.05,
    pairing: str = "signed_rank",
) -> dict[tuple[str, str], str]:
    """Write one table per (algorithm, metric) plus a totals summary.

    Returns {(algorithm, metric): '+/-/=' totals} for downstream checks.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    summaries = summarize_store(rows, alpha, pairing)
    algos = sorted({s.second for s in summaries})
    totals: dict[tuple[str, str], str] = {}

    by_algo_metric: dict[tuple[str, str], list[ComparisonSummary]] = {}
    for s in summaries:
        by_algo_metric.setdefault((s.second, s.metric), []).append(s)

    for (algo_label, metric), group in sorted(by_algo_metric.items()):
        group = sorted(group, key=lambda s: (s.m, s.problem))
        algo_key = next(k for k, v in ALGORITHM_LABEL.items() if v == algo_label)
        lines = [
            f"# {metric} (median and IQR): {algo_label} variant (crisp) vs baseline (true CV)",
            f"# mark: '+' variant significantly better, '-' worse, '=' equivalent (alpha={alpha}, {pairing})",
            f"{'problem':<12}{'M':>4}  {'v' + algo_label:<26}{'mark':<6}{algo_label:<26}{'A12':>8}  {'band':<8}",
        ]
        plus = minus = equal = 0
        for s in group:
            plus += s.verdict == "+"
            minus += s.verdict == "-"
            equal += s.verdict == "="
            lines.append(
                f"{s.problem:<12}{s.m:>4}  {_fmt_median_iqr(s.median_first, s.iqr_first):<26}"
                f"{s.verdict:<6}{_fmt_median_iqr(s.median_second, s.iqr_second):<26}"
                f"{s.a12:>8.4f}  {s.a12_band.value:<8}"
            )
        total = f"{plus}/{minus}/{equal}"
        totals[(algo_key, metric)] = total
        lines.append(f"+/-/=: {total}")
        (out_dir / f"table_{algo_key}_{metric}.txt").write_text("\n".join(lines) + "\n")

    # main summary matrix
    lines = [
        "# Wilcoxon verdict totals (+/-/=): variant (crisp) vs baseline per algorithm and metric",
        f"{'metric':<10}" + "".join(f"{ALGORITHM_LABEL[a]:>14}" for a in ("CNSGA2", "CNSGA3", "CMOEAD", "CTAEA")),
    ]
    for metric in METRICS:
        row = [f"{metric:<10}"]
        for algo in ("CNSGA2", "CNSGA3", "CMOEAD", "CTAEA"):
            row.append(f"{totals.get((algo, metric), '-'):>14}")
        lines.append("".join(row))
    (out_dir / "summary.txt").write_text("\n".join(lines) + "\n")
    return totals


# ---------------------------------------------------------------------------
# Scatter data
# ---------------------------------------------------------------------------

def emit_scatter_data(result: RunResult, path: Path) -> None:
    """Rows of eval_index, objectives, cv and feasibility class, sufficient
    to regenerate the exploration scatter plots."""
    m = result.F.shape[1]
    final_nd = np.zeros(len(result.F), dtype=bool)
    feas = result.feasible
    if feas.any():
        nd_local = nondominated_mask(result.F[feas])
        idx = np.flatnonzero(feas)[nd_local]
        final_nd[idx] = True
    nd_eval_ids = set(result.eval_index[final_nd].tolist())

    lines = ["eval_index " + " ".join(f"f{i+1}" for i in range(m)) + " cv class"]

    def classify(eval_id: int, cv: float) -> str:
        if eval_id in nd_eval_ids:
            return "nondominated-final"
        return "feasible" if cv == 0.0 else "infeasible"

    if result.trace is not None:
        E, F, CV = result.trace["eval_index"], result.trace["F"], result.trace["cv"]
    else:
        E, F, CV = result.eval_index, result.F, result.cv
    for i in range(len(E)):
        objs = " ".join(f"{v:.10e}" for v in F[i])
        lines.append(f"{int(E[i])} {objs} {CV[i]:.10e} {classify(int(E[i]), float(CV[i]))}")
    Path(path).write_text("\n".join(lines) + "\n")
