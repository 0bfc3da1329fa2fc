"""Command-line entry point: run experiments, emit tables, scatter data and
reference fronts."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .benchmarks import SYNTHETIC_FAMILIES, ensure_front
from .harness import (
    ExperimentConfig,
    default_config,
    default_mfe,
    emit_comparison_tables,
    emit_scatter_data,
    load_config,
    read_store,
    run_experiment,
    run_single,
)


def _config_from_args(args) -> ExperimentConfig:
    if args.config:
        cfg = load_config(Path(args.config))
    else:
        cfg = default_config(desk=args.desk)
    if args.seed_base is not None:
        cfg.seed_base = args.seed_base
    if args.jobs is not None:
        cfg.jobs = args.jobs
    return cfg


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="cmobench")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute the experiment matrix")
    run_p.add_argument("--config", type=str, default=None, help="YAML experiment config")
    run_p.add_argument("--desk", action="store_true", help="desk-scale preset: M in {2,3}, 11 seeds")
    run_p.add_argument("--out", type=str, default="results")
    run_p.add_argument("--jobs", type=int, default=None)
    run_p.add_argument("--seed-base", type=int, default=None)

    tab_p = sub.add_parser("tables", help="emit comparison tables from a result store")
    tab_p.add_argument("--out", type=str, default="results", help="directory holding results.csv")
    tab_p.add_argument("--alpha", type=float, default=0.05)
    tab_p.add_argument("--pairing", choices=["signed_rank", "rank_sum"], default="signed_rank")

    sc_p = sub.add_parser("scatter", help="run one traced cell and emit scatter data")
    sc_p.add_argument("--problem", required=True)
    sc_p.add_argument("--m", type=int, required=True)
    sc_p.add_argument("--algorithm", required=True)
    sc_p.add_argument("--mode", choices=["truecv", "crisp"], default="truecv")
    sc_p.add_argument("--seed", type=int, default=0)
    sc_p.add_argument("--mfe", type=int, default=None)
    sc_p.add_argument("--no-trace", action="store_true", help="final population only")
    sc_p.add_argument("--out", type=str, default="results")

    fr_p = sub.add_parser("fronts", help="pre-generate reference front files")
    fr_p.add_argument("--out", type=str, default="results")
    fr_p.add_argument("--m", type=int, nargs="+", default=[2, 3, 5, 10])
    fr_p.add_argument("--size", type=int, default=1000)
    fr_p.add_argument("--problems", nargs="+", default=list(SYNTHETIC_FAMILIES))

    args = parser.parse_args(argv)
    out_dir = Path(args.out)

    if args.command == "run":
        cfg = _config_from_args(args)
        store = run_experiment(cfg, out_dir)
        emit_comparison_tables(read_store(store), out_dir / "tables", cfg.alpha, cfg.pairing)
        print(f"store: {store}")
        return 0

    if args.command == "tables":
        rows = read_store(out_dir / "results.csv")
        totals = emit_comparison_tables(rows, out_dir / "tables", args.alpha, args.pairing)
        for (algo, metric), t in sorted(totals.items()):
            print(f"{algo:<8}{metric:<9}{t}")
        return 0

    if args.command == "scatter":
        result = run_single(
            args.problem, args.m, args.algorithm, args.mode, args.seed,
            mfe=args.mfe, collect_trace=not args.no_trace,
        )
        out_dir.mkdir(parents=True, exist_ok=True)
        name = f"scatter_{args.problem}_M{args.m}_{args.algorithm}_{args.mode}_s{args.seed}.dat"
        emit_scatter_data(result, out_dir / name)
        print(f"scatter: {out_dir / name}")
        return 0

    if args.command == "fronts":
        for problem in args.problems:
            for m in args.m:
                path = ensure_front(problem, m, out_dir / "fronts", args.size)
                print(f"front: {path}")
        return 0

    return 1


if __name__ == "__main__":
    sys.exit(main())
