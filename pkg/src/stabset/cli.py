"""Command line entry point: ``stabset solve | bench | export``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import registry
from .experiment import (
    SOLVERS,
    ConfigError,
    ExperimentConfig,
    dump_samples,
    render_csv,
    render_tables,
    run_experiment,
    write_outputs,
)
from .graph import GraphError
from .qubo import build_qubo
from .qubo_io import FORMATS, export_qubo
from .samplers import DEFAULT_READS, DEFAULT_RESTARTS, DEFAULT_SWEEPS
from .exact import DEFAULT_TIME_LIMIT

# integrity, parse and config failures all exit 2
INPUT_ERRORS = (GraphError, registry.InstanceIntegrityError, LookupError, OSError, ConfigError)


def _instance_spec(args) -> str | dict:
    path = Path(args.instance)
    if args.complement or (path.is_file() and args.instance not in registry.MANIFEST):
        return {"name": path.name if path.is_file() else args.instance,
                "path": str(path), "complement": bool(args.complement)}
    return args.instance


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="")
    else:
        sys.stdout.write(text)


def cmd_solve(args) -> int:
    spec = _instance_spec(args)
    cfg = ExperimentConfig(
        instances=[spec],
        betas=[args.beta],
        reads=args.reads,
        solvers=[args.solver],
        master_seed=args.seed,
        time_limit=args.time_limit,
        restarts=args.restarts,
        sweeps=args.sweeps,
        extended_budget=args.extended_budget,
        data_dirs=args.data_dir,
    )
    # surface load problems before any solver runs
    if isinstance(spec, str):
        registry.resolve_instance(spec, args.data_dir)
    report = run_experiment(cfg)
    if report.has_errors:
        for r in report.rows:
            print(f"error: {r.instance}: {r.error}", file=sys.stderr)
        return 2
    text = render_tables(report, args.format)
    _emit(text, args.out)
    if args.samples:
        Path(args.samples).write_text(dump_samples(report), encoding="utf-8")
    return 0


def cmd_bench(args) -> int:
    cfg = ExperimentConfig.load(args.config)
    if args.jobs:
        cfg.jobs = args.jobs
    if args.out:
        cfg.out = args.out
    if args.extended_budget:
        cfg.extended_budget = True
    report = run_experiment(cfg)
    write_outputs(report, cfg)
    if not cfg.out:
        sys.stdout.write(render_csv(report))
    if not cfg.tables:
        print(render_tables(report), file=sys.stderr)
    for r in report.rows:
        if r.error:
            print(f"error: {r.instance}/{r.solver}/beta={r.beta}: {r.error}", file=sys.stderr)
    return 2 if report.has_errors else 0


def cmd_export(args) -> int:
    g = registry.resolve_instance(args.instance, args.data_dir, args.complement or None)
    text = export_qubo(build_qubo(g, args.beta), args.format)
    _emit(text + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stabset", description="Stable-set QUBO toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def instance_args(sp):
        sp.add_argument("--instance", required=True, help="manifest name, generator spec or DIMACS path")
        sp.add_argument("--complement", action="store_true", help="complement a DIMACS file on load")
        sp.add_argument("--data-dir", action="append", default=[], help="extra directory for DIMACS files")
        sp.add_argument("--beta", type=int, default=1)
        sp.add_argument("--out", help="write here instead of stdout")

    s = sub.add_parser("solve", help="run one solver on one instance")
    instance_args(s)
    s.add_argument("--solver", choices=SOLVERS, default="hybrid")
    s.add_argument("--reads", type=int, default=DEFAULT_READS)
    s.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    s.add_argument("--sweeps", type=int, default=DEFAULT_SWEEPS)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--time-limit", type=float, default=DEFAULT_TIME_LIMIT)
    s.add_argument("--extended-budget", action="store_true",
                   help="allow C125.9 and DSJC125.9 up to two hours of exact search")
    s.add_argument("--format", choices=("csv", "markdown"), default="csv")
    s.add_argument("--samples", help="JSON-lines dump of every annealer sample")
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bench", help="run a YAML/JSON experiment config")
    b.add_argument("--config", required=True)
    b.add_argument("--jobs", type=int, help="worker processes (overrides config)")
    b.add_argument("--out", help="CSV path (overrides config)")
    b.add_argument("--extended-budget", action="store_true")
    b.set_defaults(func=cmd_bench)

    e = sub.add_parser("export", help="write Q in coordinate or JSON-lines form")
    instance_args(e)
    e.add_argument("--format", choices=FORMATS, default="coordinate")
    e.set_defaults(func=cmd_export)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (*INPUT_ERRORS, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
