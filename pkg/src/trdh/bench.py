"""Benchmark harness: run solver x problem combinations and tabulate the statistics.

A run is described by a :class:`RunConfig`; :func:`run` builds the problem,
solves it and returns one flat record, :func:`run_suite` runs a list of
configurations and writes the records plus a metadata block.  The command
line front end is :func:`main` (``python -m trdh.bench`` or ``trdh-bench``).
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any

from . import __version__
from .diag_qn import DiagKind
from .lm_qn import QNKind
from .problems import FAMILIES, build_problem
from .problems.svm import MNIST_DIR_ENV
from .solvers import SolverOptions, Status, TrustRegionConstants, itrdh_solve, r2_solve, tr_solve, trdh_solve
from .solvers.tr import Subsolver

SOLVERS = ("R2", "TRDH", "iTRDH", "TR")
FORMATS = ("table", "csv", "json")

EXIT_CODES = {Status.FIRST_ORDER.value: 0, Status.MAX_ITER.value: 2, Status.STALLED.value: 2, "error": 1}

_OPTION_FIELDS = {f.name for f in dataclasses.fields(SolverOptions)}
_CONSTANT_FIELDS = {f.name for f in dataclasses.fields(TrustRegionConstants)}

# per-experiment tolerances and quasi-Newton choices
PRESETS: dict[str, dict[str, Any]] = {
    "bpdn": dict(problem="bpdn", hessian="lsr1",
                 options=dict(eps_abs=1e-5, eps_rel=1e-5, eps_abs_inner=1e-5, eps_rel_inner=1e-6, max_inner_iter=100)),
    "bpdn-cstr": dict(problem="bpdn-cstr", hessian="lsr1",
                      options=dict(eps_abs=1e-5, eps_rel=1e-5, eps_abs_inner=1e-5, eps_rel_inner=1e-6,
                                   max_inner_iter=100)),
    "nnmf": dict(problem="nnmf", hessian="lsr1",
                 options=dict(eps_abs=1e-5, eps_rel=1e-5, eps_abs_inner=1e-3, eps_rel_inner=1e-6, max_inner_iter=100)),
    "svm": dict(problem="svm", hessian="lbfgs",
                options=dict(eps_abs=1e-4, eps_rel=1e-4, eps_abs_inner=1e-3, eps_rel_inner=1e-6, max_inner_iter=100)),
    "svm-synthetic": dict(problem="svm-synthetic", hessian="lbfgs",
                          options=dict(eps_abs=1e-4, eps_rel=1e-4, eps_abs_inner=1e-3, eps_rel_inner=1e-6,
                                       max_inner_iter=100)),
    "fh": dict(problem="fh", hessian="lbfgs",
               options=dict(eps_abs=1e-4, eps_rel=1e-4, eps_abs_inner=1e-3, eps_rel_inner=1e-6, max_inner_iter=200)),
    "fh-cstr": dict(problem="fh-cstr", hessian="lbfgs",
                    options=dict(eps_abs=1e-4, eps_rel=1e-4, eps_abs_inner=1e-3, eps_rel_inner=1e-6,
                                 max_inner_iter=200)),
}

# column order of a result record; the type drives csv parsing
COLUMNS: list[tuple[str, type]] = [
    ("problem", str),
    ("solver", str),
    ("seed", int),
    ("status", str),
    ("exit_code", int),
    ("f", float),
    ("h_over_lambda", float),
    ("crit", float),
    ("x_error", float),
    ("n_f", int),
    ("n_grad", int),
    ("n_prox", int),
    ("iterations", int),
    ("n_inner", int),
    ("train_acc", float),
    ("test_acc", float),
    ("solution", list),
    ("error", str),
    ("time_s", float),
]


class ConfigError(ValueError):
    """Invalid run configuration; ``field`` names the offending entry."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass
class RunConfig:
    problem: str
    solver: str = "TRDH"
    diag: str = "spec"
    subsolver: str | None = None
    hessian: str | None = None
    seed: int = 0
    options: dict[str, Any] = field(default_factory=dict)
    problem_params: dict[str, Any] = field(default_factory=dict)
    memory: int = 5

    def validate(self) -> "RunConfig":
        if self.problem not in FAMILIES:
            raise ConfigError("problem", f"unknown family {self.problem!r}; choose from {', '.join(FAMILIES)}")
        if self.solver not in SOLVERS:
            raise ConfigError("solver", f"unknown solver {self.solver!r}; choose from {', '.join(SOLVERS)}")
        try:
            DiagKind(self.diag)
        except ValueError:
            raise ConfigError("diag", f"unknown diagonal kind {self.diag!r}") from None
        if self.solver == "TR":
            try:
                Subsolver(self.subsolver or "r2")
            except ValueError:
                raise ConfigError("subsolver", f"unknown subsolver {self.subsolver!r}") from None
            try:
                QNKind(self.hessian or "lsr1")
            except ValueError:
                raise ConfigError("hessian", f"unknown Hessian approximation {self.hessian!r}") from None
        else:
            if self.subsolver is not None:
                raise ConfigError("subsolver", "only valid with solver TR")
            if self.hessian is not None:
                raise ConfigError("hessian", "only valid with solver TR")
        for key in self.options:
            if key not in _OPTION_FIELDS | _CONSTANT_FIELDS:
                raise ConfigError(f"options.{key}", "not a solver option or trust-region constant")
        try:
            self.solver_options()
            self.constants()
        except (TypeError, ValueError) as exc:
            raise ConfigError("options", str(exc)) from None
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError("seed", "must be a nonnegative integer")
        if self.memory < 1:
            raise ConfigError("memory", "must be positive")
        return self

    def solver_options(self) -> SolverOptions:
        kw = {k: v for k, v in self.options.items() if k in _OPTION_FIELDS}
        kw.setdefault("diag_kind", self.diag)
        return SolverOptions(**kw)

    def constants(self) -> TrustRegionConstants:
        return TrustRegionConstants(**{k: v for k, v in self.options.items() if k in _CONSTANT_FIELDS})

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    @classmethod
    def from_preset(cls, preset: str, **kw) -> "RunConfig":
        if preset not in PRESETS:
            raise ConfigError("preset", f"unknown preset {preset!r}; choose from {', '.join(PRESETS)}")
        p = PRESETS[preset]
        options = dict(p["options"])
        options.update(kw.pop("options", {}))
        if kw.get("solver") == "TR" and kw.get("hessian") is None:
            kw["hessian"] = p["hessian"]
        return cls(problem=p["problem"], options=options, **kw)


def table_grid(preset: str, seed: int = 0, **kw) -> list[RunConfig]:
    """The 14 solver rows of a statistics table, in the usual order."""
    diags = ("spec", "psb", "andrei")
    rows = [RunConfig.from_preset(preset, solver="R2", seed=seed, **kw)]
    for d in diags:
        rows.append(RunConfig.from_preset(preset, solver="TRDH", diag=d, seed=seed, **kw))
        rows.append(RunConfig.from_preset(preset, solver="iTRDH", diag=d, seed=seed, **kw))
    rows.append(RunConfig.from_preset(preset, solver="TR", subsolver="r2", seed=seed, **kw))
    for d in ("psb", "andrei", "spec"):
        for sub in ("trdh", "itrdh"):
            rows.append(RunConfig.from_preset(preset, solver="TR", subsolver=sub, diag=d, seed=seed, **kw))
    return rows


def _label(cfg: RunConfig) -> str:
    diag = DiagKind(cfg.diag).label
    if cfg.solver == "R2":
        return "R2"
    if cfg.solver in ("TRDH", "iTRDH"):
        return f"{cfg.solver}-{diag}"
    sub = Subsolver(cfg.subsolver or "r2")
    if sub is Subsolver.R2:
        return "TR-R2"
    return f"TR-{'TRDH' if sub is Subsolver.TRDH else 'iTRDH'}-{diag}"


def _blank_record(cfg: RunConfig) -> dict[str, Any]:
    rec = {name: None for name, _ in COLUMNS}
    rec.update(problem=cfg.problem, solver=_label(cfg), seed=cfg.seed)
    return rec


def _solve(cfg: RunConfig, problem):
    opts, consts = cfg.solver_options(), cfg.constants()
    if cfg.solver == "R2":
        return r2_solve(problem, opts, consts)
    if cfg.solver == "TRDH":
        return trdh_solve(problem, opts, consts)
    if cfg.solver == "iTRDH":
        return itrdh_solve(problem, opts, consts)
    return tr_solve(problem, opts, consts, hessian=cfg.hessian or "lsr1", subsolver=cfg.subsolver or "r2",
                    memory=cfg.memory)


def run(config: RunConfig) -> dict[str, Any]:
    """Build the problem, solve it and return a flat result record.

    Failures (invalid configuration, unreadable data, solver errors) are
    reported in the record with status ``"error"`` and exit code 1.
    """
    rec = _blank_record(config)
    try:
        config.validate()
        problem, evaluate = build_problem(config.problem, seed=config.seed, **config.problem_params)
        x, stats = _solve(config, problem)
    except Exception as exc:  # every failure becomes a row
        rec.update(status="error", exit_code=EXIT_CODES["error"], error=f"{type(exc).__name__}: {exc}")
        return rec
    rec.update(
        status=stats.status.value,
        exit_code=EXIT_CODES[stats.status.value],
        f=stats.final_f,
        h_over_lambda=stats.final_h_over_lambda,
        crit=stats.final_criticality,
        x_error=stats.x_error,
        n_f=stats.n_f,
        n_grad=stats.n_grad,
        n_prox=stats.n_prox,
        iterations=stats.iterations,
        n_inner=stats.n_inner,
        time_s=stats.time_s,
    )
    if evaluate is not None:
        rec["train_acc"], rec["test_acc"] = evaluate(x)
    if x.size <= 10:
        rec["solution"] = [float(v) for v in x]
    return rec


def config_hash(configs: list[RunConfig]) -> str:
    blob = json.dumps([c.to_dict() for c in configs], sort_keys=True, default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


def suite_metadata(configs: list[RunConfig]) -> dict[str, Any]:
    return {
        "version": __version__,
        "config_sha256": config_hash(configs),
        "seeds": sorted({c.seed for c in configs}),
        "configs": [
            dict(c.to_dict(), solver_options=_jsonable(dataclasses.asdict(c.solver_options())),
                 constants=dataclasses.asdict(c.constants()))
            for c in configs
        ],
    }


def _jsonable(d):
    return {k: (v.value if isinstance(v, DiagKind) else v) for k, v in d.items()}


def run_suite(configs: list[RunConfig], out_path=None, fmt: str = "json", jobs: int = 1) -> dict[str, Any]:
    """Run every configuration; one row per configuration, in input order.

    Runs are independent and may execute in ``jobs`` worker processes; the
    output is written once all runs finish.  Returns ``{"metadata", "rows"}``.
    """
    if not configs:
        raise ValueError("configs must be nonempty")
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}")
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(run, configs))
    else:
        rows = [run(c) for c in configs]
    summary = {"metadata": suite_metadata(configs), "rows": rows}
    if out_path is not None:
        with open(out_path, "w", newline="") as fh:
            fh.write(render(summary, fmt))
    return summary


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _sci(v, digits=2):
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return "-"
    return f"{v:.{digits}e}"


def format_table(rows: list[dict[str, Any]]) -> str:
    """Human-readable table with the statistics in scientific notation."""
    head = ["problem", "solver", "seed", "status", "f(x)", "h(x)/lam", "sqrt(xi/nu)", "||x-x*||", "#f", "#grad",
            "#prox", "t(s)"]
    body = []
    for r in rows:
        hl = r["h_over_lambda"]
        body.append([
            r["problem"], r["solver"], str(r["seed"]), r["status"],
            _sci(r["f"]),
            "-" if hl is None else (f"{hl:.0f}" if float(hl).is_integer() else f"{hl:.2f}"),
            _sci(r["crit"], 1), _sci(r["x_error"], 1),
            *("-" if r[k] is None else str(r[k]) for k in ("n_f", "n_grad", "n_prox")),
            _sci(r["time_s"], 1),
        ])
        if r.get("train_acc") is not None:
            body[-1][7] = f"({r['train_acc']:.1f}, {r['test_acc']:.1f})"
        if r["status"] == "error":
            body[-1][4] = r["error"]
    widths = [max(len(h), *(len(b[i]) for b in body)) for i, h in enumerate(head)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(head, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(c.rjust(w) for c, w in zip(b, widths)) for b in body]
    return "\n".join(lines) + "\n"


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, list):
        return json.dumps(v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def format_csv(rows: list[dict[str, Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([name for name, _ in COLUMNS])
    for r in rows:
        writer.writerow([_csv_cell(r[name]) for name, _ in COLUMNS])
    return buf.getvalue()


def render(summary: dict[str, Any], fmt: str) -> str:
    rows = summary["rows"]
    if fmt == "table":
        return format_table(rows)
    if fmt == "csv":
        return format_csv(rows)
    return json.dumps(summary, indent=2, sort_keys=False) + "\n"


def parse_csv(text: str) -> list[dict[str, Any]]:
    """Inverse of :func:`format_csv`."""
    out = []
    for raw in csv.DictReader(io.StringIO(text)):
        rec = {}
        for name, typ in COLUMNS:
            cell = raw[name]
            if cell == "":
                rec[name] = None
            elif typ is list:
                rec[name] = json.loads(cell)
            else:
                rec[name] = typ(cell)
        out.append(rec)
    return out


def strip_timing(rows: list[dict[str, Any]]) -> list[dict[str, Any]]:
    return [{k: v for k, v in r.items() if k != "time_s"} for r in rows]


# ---------------------------------------------------------------------------
# command line
# ---------------------------------------------------------------------------


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _parse_sets(pairs: list[str]):
    options, params, extra = {}, {}, {}
    for item in pairs:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ConfigError("--set", f"expected key=value, got {item!r}")
        value = _parse_value(value)
        if key.startswith("problem."):
            params[key[len("problem."):]] = value
        elif key == "memory":
            extra["memory"] = int(value)
        elif key in _OPTION_FIELDS | _CONSTANT_FIELDS:
            options[key] = value
        else:
            raise ConfigError(f"--set {key}", "not a solver option, trust-region constant, memory or problem.<param>")
    return options, params, extra


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="trdh-bench",
        description="Run trust-region solvers with diagonal Hessians on benchmark problems.",
        epilog=f"SVM data: set ${MNIST_DIR_ENV} to a directory holding the MNIST IDX files.",
    )
    ap.add_argument("--preset", choices=sorted(PRESETS), help="problem family with its tolerances")
    ap.add_argument("--problem", choices=FAMILIES, help="problem family (overrides the preset's)")
    ap.add_argument("--solver", default="all", choices=SOLVERS + ("all",),
                    help="solver, or 'all' for the 14-row table (default)")
    ap.add_argument("--diag", default="spec", choices=[d.value for d in DiagKind if d is not DiagKind.NONE])
    ap.add_argument("--subsolver", choices=[s.value for s in Subsolver], help="TR only")
    ap.add_argument("--hessian", choices=[q.value for q in QNKind], help="TR only")
    ap.add_argument("--seed", type=int, nargs="+", default=[0])
    ap.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                    help="override a constant, e.g. eta1=1e-4 or problem.lam=0.2")
    ap.add_argument("--out", help="output file (default: stdout)")
    ap.add_argument("--format", default="table", choices=FORMATS)
    ap.add_argument("--jobs", type=int, default=1, help="worker processes across runs")
    return ap


def configs_from_args(args) -> list[RunConfig]:
    options, params, extra = _parse_sets(args.set)
    if args.preset is None and args.problem is None:
        raise ConfigError("--problem", "give --preset or --problem")
    preset = args.preset
    if preset is None:
        preset = args.problem if args.problem in PRESETS else None
    configs = []
    for seed in args.seed:
        if args.solver == "all":
            if preset is None:
                raise ConfigError("--solver", "'all' needs a preset")
            batch = table_grid(preset, seed=seed, options=options, problem_params=params, **extra)
        else:
            kw = dict(solver=args.solver, diag=args.diag, seed=seed, options=dict(options), problem_params=params,
                      **extra)
            if args.solver == "TR":
                kw.update(subsolver=args.subsolver or "r2", hessian=args.hessian)
            else:
                kw.update(subsolver=args.subsolver, hessian=args.hessian)
            batch = [RunConfig.from_preset(preset, **kw) if preset else RunConfig(problem=args.problem, **kw)]
        for c in batch:
            if args.problem is not None:
                c.problem = args.problem
            if c.solver == "TR" and args.hessian is not None:
                c.hessian = args.hessian
            c.validate()
        configs += batch
    return configs


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        configs = configs_from_args(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CODES["error"]
    summary = run_suite(configs, jobs=args.jobs)
    text = render(summary, args.format)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    codes = {r["exit_code"] for r in summary["rows"]}
    # an error outranks an unconverged run
    return 1 if 1 in codes else max(codes)


if __name__ == "__main__":
    sys.exit(main())
