"""Batch runs over (instance, beta, solver) and the result tables."""

from __future__ import annotations

import csv
import io
import json
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import yaml

from . import exact, registry
from .graph import Graph
from .qubo import build_qubo, is_stable
from .samplers import (
    DEFAULT_READS,
    DEFAULT_RESTARTS,
    DEFAULT_SWEEPS,
    SampleSet,
    default_schedule,
    derive_seed,
    feasible_fraction,
    hybrid_solve,
    sa_sample,
)

SOLVERS = ("exact", "sa", "hybrid")
CSV_COLUMNS = (
    "instance", "n", "m", "alpha", "solver", "beta", "best_card", "stable",
    "optimal", "feasible_frac", "reads", "seed", "wall_ms", "error",
)
TIMING_COLUMNS = ("wall_ms",)
LEGEND = (
    "`!` best sample is not a stable set; `*` stable but below alpha(G); "
    "`?` after alpha(G): not proven optimal within the time limit."
)


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    instances: list[Any]
    betas: list[int] = field(default_factory=lambda: [1, 10, 100])
    reads: int = DEFAULT_READS
    solvers: list[str] = field(default_factory=lambda: list(SOLVERS))
    master_seed: int = 0
    time_limit: float = exact.DEFAULT_TIME_LIMIT
    extended_budget: bool = False
    restarts: int = DEFAULT_RESTARTS
    sweeps: int = DEFAULT_SWEEPS
    jobs: int = 1
    data_dirs: list[str] = field(default_factory=list)
    out: str | None = None
    samples: str | None = None
    tables: str | None = None

    def __post_init__(self) -> None:
        if not self.instances:
            raise ConfigError("config lists no instances")
        if not self.solvers:
            raise ConfigError("config lists no solvers")
        bad = [s for s in self.solvers if s not in SOLVERS]
        if bad:
            raise ConfigError(f"unknown solver(s) {bad}; choose from {SOLVERS}")
        for b in self.betas:
            if isinstance(b, bool) or not isinstance(b, int) or b < 1:
                raise ConfigError(f"betas must be integers >= 1, got {b!r}")
        if not self.betas:
            raise ConfigError("config lists no betas")
        for key in ("reads", "restarts", "sweeps", "jobs"):
            if getattr(self, key) < 1:
                raise ConfigError(f"{key} must be >= 1")
        if self.master_seed < 0:
            raise ConfigError("master_seed must be non-negative")

    @classmethod
    def load(cls, path: str | Path) -> "ExperimentConfig":
        """Read a YAML (or JSON) mapping whose keys are the field names."""
        raw = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: expected a mapping at top level")
        if "seed" in raw and "master_seed" not in raw:
            raw["master_seed"] = raw.pop("seed")
        unknown = set(raw) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
        return cls(**raw)


@dataclass
class ResultRow:
    instance: str
    solver: str
    beta: int
    n: int | None = None
    m: int | None = None
    alpha: int | None = None
    alpha_proven: bool = False
    best_card: int | None = None
    best_x: tuple[int, ...] | None = None
    stable: bool = False
    optimal: bool = False
    feasible_frac: float | None = None
    reads: int | None = None
    seed: int | None = None
    wall_ms: float = 0.0
    error: str = ""
    sampleset: SampleSet | None = field(default=None, repr=False)

    @property
    def status(self) -> str:
        if self.error or self.best_x is None:
            return "error"
        if not self.stable:
            return "infeasible"
        return "optimal" if self.optimal else "suboptimal"


@dataclass
class ExperimentReport:
    rows: list[ResultRow]
    config: ExperimentConfig | None = None
    graphs: dict[str, Graph] = field(default_factory=dict, repr=False)

    def verify(self) -> list[str]:
        """Recompute stable/optimal flags from the stored vectors; list mismatches."""
        bad = []
        for r in self.rows:
            if r.error or r.best_x is None:
                continue
            g = self.graphs[r.instance]
            stable = is_stable(g, r.best_x)
            optimal = stable and r.alpha is not None and sum(r.best_x) == r.alpha
            if (stable, optimal, sum(r.best_x)) != (r.stable, r.optimal, r.best_card):
                bad.append(f"{r.instance}/{r.solver}/beta={r.beta}")
        return bad

    @property
    def has_errors(self) -> bool:
        return any(r.error for r in self.rows)


def _instance_label(spec: Any) -> str:
    if isinstance(spec, dict):
        return str(spec.get("name") or spec["path"])
    return str(spec)


def _load(spec: Any, dirs: Sequence[str]) -> Graph:
    if isinstance(spec, dict):
        name = _instance_label(spec)
        if "path" in spec:
            entry = registry.MANIFEST.get(name)
            g = registry.load_with_polarity(
                Path(spec["path"]), name, entry.m if entry else None, spec.get("complement")
            )
            if entry and (g.n, g.m) != (entry.n, entry.m):
                raise registry.InstanceIntegrityError(
                    f"{name}: got n={g.n}, m={g.m}; manifest says n={entry.n}, m={entry.m}"
                )
            return g
        spec = spec["name"]
    return registry.resolve_instance(spec, dirs)


def row_seed(master_seed: int, instance: str, beta: int, solver: str) -> int:
    """Seed for one (instance, beta, solver) cell, independent of run order."""
    key = zlib.crc32(f"{instance}|{beta}|{solver}".encode())
    return derive_seed(master_seed, key) % (1 << 63)


def _classify(row: ResultRow, g: Graph) -> None:
    row.best_card = sum(row.best_x)
    row.stable = is_stable(g, row.best_x)
    row.optimal = row.stable and row.alpha is not None and row.best_card == row.alpha


def _run_instance(spec: Any, cfg: ExperimentConfig) -> tuple[list[ResultRow], Graph | None]:
    label = _instance_label(spec)
    try:
        g = _load(spec, cfg.data_dirs)
    except (OSError, ValueError, LookupError) as exc:
        msg = f"{type(exc).__name__}: {exc}"
        return [ResultRow(label, s, b, error=msg) for s in cfg.solvers for b in cfg.betas], None

    entry = registry.MANIFEST.get(label)
    alpha, proven, exact_res, exact_ms = None, False, None, 0.0
    need_alpha = "exact" in cfg.solvers or entry is None
    if need_alpha:
        t0 = time.perf_counter()
        limit = cfg.time_limit
        if cfg.extended_budget and label in exact.EXTENDED_BUDGET:
            limit = max(limit, exact.EXTENDED_TIME_LIMIT)
        exact_res = exact.branch_and_bound(g, limit)
        exact_ms = 1000 * (time.perf_counter() - t0)
        proven = exact_res.proven
        if proven:
            alpha = exact_res.alpha
        else:
            alpha = entry.alpha if entry else exact_res.upper_bound
    else:
        alpha, proven = entry.alpha, True

    rows = []
    for solver in cfg.solvers:
        for beta in cfg.betas:
            row = ResultRow(label, solver, beta, g.n, g.m, alpha, proven)
            t0 = time.perf_counter()
            if solver == "exact":
                row.best_x = exact_res.witness
                row.wall_ms = exact_ms
                _classify(row, g)
                rows.append(row)
                continue
            q = build_qubo(g, beta)
            seed = row_seed(cfg.master_seed, label, beta, solver)
            row.seed, row.reads = seed, cfg.reads
            sched = default_schedule(q, seed, sweeps=cfg.sweeps)
            if solver == "sa":
                ss = sa_sample(q, cfg.reads, sched, seed, instance_id=label)
                row.best_x = ss.best().x
                row.feasible_frac = feasible_fraction(ss, g)
                row.sampleset = ss
            else:
                best = hybrid_solve(g, beta, cfg.reads, cfg.restarts, seed, schedule=sched)
                row.best_x = best.x
            row.wall_ms = 1000 * (time.perf_counter() - t0)
            _classify(row, g)
            rows.append(row)
    return rows, g


def _worker(args):
    spec, cfg = args
    return _run_instance(spec, cfg)


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Run every configured solver on every instance and beta.

    Rows come back in config order (instances, then solvers, then betas)
    whatever ``cfg.jobs`` is; each cell's seed depends only on the master
    seed and the cell itself.
    """
    jobs = [(spec, cfg) for spec in cfg.instances]
    if cfg.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_worker, jobs))
    else:
        results = [_worker(j) for j in jobs]
    rows: list[ResultRow] = []
    graphs: dict[str, Graph] = {}
    for spec, (inst_rows, g) in zip(cfg.instances, results):
        rows.extend(inst_rows)
        if g is not None:
            graphs[_instance_label(spec)] = g
    return ExperimentReport(rows, cfg, graphs)


# output


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def csv_records(report: ExperimentReport) -> list[dict[str, str]]:
    out = []
    for r in report.rows:
        out.append({
            "instance": r.instance,
            "n": _cell(r.n),
            "m": _cell(r.m),
            "alpha": _cell(r.alpha),
            "solver": r.solver,
            "beta": _cell(r.beta),
            "best_card": _cell(r.best_card),
            "stable": "" if r.error else _cell(r.stable),
            "optimal": "" if r.error else _cell(r.optimal),
            "feasible_frac": "" if r.feasible_frac is None else f"{r.feasible_frac:.6f}",
            "reads": _cell(r.reads),
            "seed": _cell(r.seed),
            "wall_ms": "" if r.error else f"{r.wall_ms:.1f}",
            "error": r.error,
        })
    return out


def render_csv(report: ExperimentReport, columns: Sequence[str] = CSV_COLUMNS) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), extrasaction="ignore", lineterminator="\r\n")
    w.writeheader()
    w.writerows(csv_records(report))
    return buf.getvalue()


def _marked(r: ResultRow) -> str:
    if r.error or r.best_card is None:
        return "err"
    mark = {"infeasible": "!", "suboptimal": "*"}.get(r.status, "")
    return f"{r.best_card}{mark}"


def _grid(report: ExperimentReport, solver: str, cell, with_info: bool = True) -> list[str]:
    rows = [r for r in report.rows if r.solver == solver]
    if not rows:
        return []
    betas = list(dict.fromkeys(r.beta for r in rows))
    names = list(dict.fromkeys(r.instance for r in rows))
    by = {(r.instance, r.beta): r for r in rows}
    head = (["Graph", "n", "m", "alpha(G)"] if with_info else ["Graph"])
    head += [f"beta = {b}" for b in betas]
    lines = ["| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
    for name in names:
        first = by[(name, betas[0])]
        alpha = _cell(first.alpha) + ("" if first.alpha_proven or first.alpha is None else "?")
        info = [name, _cell(first.n), _cell(first.m), alpha] if with_info else [name]
        lines.append("| " + " | ".join(info + [cell(by[(name, b)]) for b in betas]) + " |")
    return lines


def _pct(r: ResultRow) -> str:
    return "err" if r.feasible_frac is None else f"{100 * r.feasible_frac:.2f}"


def render_tables(report: ExperimentReport, style: str = "markdown") -> str:
    """Result grids in the layout of the published tables, or the flat CSV.

    Markdown output has one instance-by-beta grid per solver (best
    cardinality with ``!``/``*`` markers) plus the percentage of stable
    samples for the annealer.
    """
    if not report.rows:
        raise ValueError("empty report")
    if style == "csv":
        return render_csv(report)
    if style != "markdown":
        raise ValueError(f"unknown style {style!r}")
    out: list[str] = []
    sections = [
        ("exact", "Exact branch and bound: alpha(G)", _marked, True),
        ("sa", "Simulated annealing: best-energy sample cardinality", _marked, True),
        ("hybrid", "Hybrid (anneal + repair + local search): cardinality", _marked, True),
        ("sa", "Simulated annealing: percentage of samples that are stable sets", _pct, False),
    ]
    for solver, title, cell, info in sections:
        grid = _grid(report, solver, cell, info)
        if grid:
            out += [f"### {title}", "", *grid, ""]
    out.append(LEGEND)
    errors = [r for r in report.rows if r.error]
    if errors:
        out += ["", "Errors:"]
        out += [f"- {r.instance}/{r.solver}/beta={r.beta}: {r.error}" for r in errors]
    return "\n".join(out) + "\n"


def dump_samples(report: ExperimentReport) -> str:
    """JSON lines, one object per annealer sample."""
    lines = []
    for r in report.rows:
        if r.sampleset is None:
            continue
        for k, s in enumerate(r.sampleset.samples):
            lines.append(json.dumps({
                "instance": r.instance,
                "beta": r.beta,
                "seed": r.seed,
                "read": k,
                "x": "".join(map(str, s.x)),
                "cardinality": s.cardinality,
                "violations": s.violations,
                "energy": s.energy if isinstance(s.energy, int) else str(s.energy),
            }))
    return "\n".join(lines) + ("\n" if lines else "")


def write_outputs(report: ExperimentReport, cfg: ExperimentConfig) -> None:
    if cfg.out:
        Path(cfg.out).write_text(render_csv(report), encoding="utf-8", newline="")
    if cfg.samples:
        Path(cfg.samples).write_text(dump_samples(report), encoding="utf-8")
    if cfg.tables:
        Path(cfg.tables).write_text(render_tables(report), encoding="utf-8")
