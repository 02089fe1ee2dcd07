"""Command-line front end.

Exit status: 0 success, 1 runtime or I/O failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Sequence

from . import __version__
from .asymptotics import asymptotics_row
from .core import DistributionKind, matrix_from_csv
from .exceptions import RalError
from .experiments import (
    CltReport,
    ExperimentConfig,
    GapReport,
    Objective,
    ParisiReport,
    RatioReport,
    SummaryReport,
    UniformReport,
    clt_experiment,
    optimality_gap,
    parisi_experiment,
    ratio_experiment,
    run_trials,
    summary_experiment,
    uniform_experiment,
)
from .greedy import greedy_assign
from .report import emit_report, field_names, plot_convergence
from .solver import hungarian_max, hungarian_min
from .stats import exact_max_moments

SUBCOMMANDS = ("greedy", "solve", "asymptotics", "oracle", "simulate", "clt", "parisi", "uniform", "gap", "plot")
SIMULATE_CLASS = ("simulate", "clt", "parisi", "uniform", "gap")
ASYMPTOTICS_FIELDS = ["n", "leading_order", "fernique_upper", "A_n", "B_n_sq", "parisi_sum", "steele_expansion"]
ORACLE_FIELDS = ["m", "mean", "variance", "third_abs_central"]
RECORD_FIELDS = ["n", "trial", "value", "elapsed_ms", "seed_master", "seed_trial"]

_DIST_ALIASES = {"gaussian": DistributionKind.GAUSSIAN, "exp": DistributionKind.EXPONENTIAL,
                 "uniform": DistributionKind.UNIFORM}


class UsageError(Exception):
    exit_status = 2


@dataclass
class CliConfig:
    subcommand: str
    flags: dict = field(default_factory=dict)
    out_path: str | None = None
    format: str = "csv"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _int_list(text: str) -> list[int]:
    try:
        values = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError(f"expected positive integers, got {text!r}")
    return values


def _seed(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def _bounded_int(lo: int):
    def parse(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
        if v < lo:
            raise argparse.ArgumentTypeError(f"must be >= {lo}, got {v}")
        return v

    return parse


def _default_workers() -> int:
    env = os.environ.get("RAL_WORKERS")
    if env is None:
        return 1
    try:
        return max(0, int(env))
    except ValueError:
        raise UsageError(f"RAL_WORKERS must be an integer, got {env!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ral", allow_abbrev=False,
                description="Gaussian random assignment: greedy strategy, exact solver, asymptotics, Monte Carlo.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="subcommand", metavar="SUBCOMMAND", parser_class=_Parser)
    sub.required = True

    out = _Parser(add_help=False, allow_abbrev=False)
    out.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    out.add_argument("--format", choices=("csv", "json"), default="csv")

    mc = _Parser(add_help=False, allow_abbrev=False)
    mc.add_argument("--trials", type=_bounded_int(2), required=True, help="trials per n (>= 2)")
    mc.add_argument("--seed", type=_seed, required=True, help="master seed (unsigned 64-bit)")
    mc.add_argument("--workers", type=_bounded_int(0), default=None,
                    help="worker processes, 0 = one per CPU (fallback: $RAL_WORKERS, else 1)")
    mc.add_argument("--records", action="store_true", help="emit per-trial records instead of the per-n report")
    mc.add_argument("--progress", action="store_true", help="trial counter on stderr")

    matrix_in = _Parser(add_help=False, allow_abbrev=False)
    matrix_in.add_argument("--input", metavar="PATH", default="-", help="CSV matrix (default: stdin)")
    matrix_in.add_argument("--out", metavar="PATH", help="output file (default: stdout)")

    sub.add_parser("greedy", parents=[matrix_in], allow_abbrev=False,
                   help="greedy assignment of a CSV matrix, JSON result")
    s = sub.add_parser("solve", parents=[matrix_in], allow_abbrev=False, help="exact assignment of a CSV matrix")
    s.add_argument("--objective", choices=("max", "min"), default="max")

    s = sub.add_parser("asymptotics", parents=[out], allow_abbrev=False, help="table of closed-form constants")
    s.add_argument("--n", type=_int_list, required=True, help="comma list of n")

    s = sub.add_parser("oracle", parents=[out], allow_abbrev=False, help="quadrature moments of the max of m normals")
    s.add_argument("--m", type=_int_list, required=True, help="comma list of m")

    s = sub.add_parser("simulate", parents=[out, mc], allow_abbrev=False, help="Monte Carlo of the assignment value")
    s.add_argument("--n", type=_int_list, required=True)
    s.add_argument("--dist", choices=tuple(_DIST_ALIASES), default="gaussian")
    s.add_argument("--objective", choices=("greedy", "max", "min"), default="greedy")

    for name, help_text in (
        ("clt", "standardized greedy values vs the normal law (single n)"),
        ("parisi", "Exp(1) min assignment vs sum 1/k^2"),
        ("uniform", "U(0,1) min assignment vs the two-term expansion"),
        ("gap", "paired greedy vs exact maximum"),
    ):
        s = sub.add_parser(name, parents=[out, mc], allow_abbrev=False, help=help_text)
        s.add_argument("--n", type=_int_list, required=True)

    s = sub.add_parser("plot", allow_abbrev=False, help="SVG convergence plot from a report CSV")
    s.add_argument("--input", metavar="CSV", required=True)
    s.add_argument("--out", metavar="SVG", required=True)
    s.add_argument("--x", default="n", help="x column (log scale)")
    s.add_argument("--y", default="ratio", help="y column")
    s.add_argument("--reference", type=float, default=1.0, help="horizontal reference line")
    return p


def parse_args(argv: Sequence[str]) -> CliConfig:
    ns = build_parser().parse_args(list(argv))
    flags = dict(vars(ns))
    cmd = flags.pop("subcommand")
    out_path = flags.pop("out", None)
    fmt = flags.pop("format", "csv") if cmd not in ("greedy", "solve") else "json"
    if cmd in SIMULATE_CLASS and flags.get("workers") is None:
        flags["workers"] = _default_workers()
    if cmd == "clt" and len(flags["n"]) != 1:
        raise UsageError("ral clt: error: --n takes a single value")
    if "dist" in flags:
        flags["dist"] = _DIST_ALIASES[flags["dist"]]
    return CliConfig(cmd, flags, out_path, fmt)


# -- dispatch ---------------------------------------------------------------


def _read_matrix(path: str):
    text = sys.stdin.read() if path == "-" else open(path).read()
    return matrix_from_csv(text)


def _experiment_config(cfg: CliConfig, dist, objective) -> ExperimentConfig:
    f = cfg.flags
    return ExperimentConfig(tuple(f["n"]), f["trials"], f["seed"], dist, objective, f["workers"])


def _emit(cfg: CliConfig, report, fields) -> int:
    return emit_report(report, cfg.format, cfg.out_path, fields=fields)


def _note_band(report_cls) -> None:
    print(f"# band: {report_cls.BAND}", file=sys.stderr)


def run(cfg: CliConfig) -> int:
    f = cfg.flags
    cmd = cfg.subcommand
    if cmd in ("greedy", "solve"):
        m = _read_matrix(f["input"])
        t0 = time.perf_counter()
        if cmd == "greedy":
            res = greedy_assign(m)
        else:
            res = hungarian_max(m) if f["objective"] == "max" else hungarian_min(m)
        payload = res.to_dict() | {"elapsed_ms": (time.perf_counter() - t0) * 1e3}
        text = json.dumps(payload) + "\n"
        if cfg.out_path:
            with open(cfg.out_path, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return 0
    if cmd == "asymptotics":
        _emit(cfg, [asymptotics_row(n) for n in f["n"]], ASYMPTOTICS_FIELDS)
        return 0
    if cmd == "oracle":
        rows = [vars(exact_max_moments(m)) for m in f["m"]]
        _emit(cfg, rows, ORACLE_FIELDS)
        return 0
    if cmd == "plot":
        plot_convergence(f["input"], cfg.out_path, f["x"], f["y"], f["reference"])
        return 0

    progress = f["progress"]
    if cmd == "simulate":
        dist, objective = f["dist"], Objective(f["objective"])
    elif cmd == "parisi":
        dist, objective = DistributionKind.EXPONENTIAL, Objective.EXACT_MIN
    elif cmd == "uniform":
        dist, objective = DistributionKind.UNIFORM, Objective.EXACT_MIN
    else:
        dist, objective = DistributionKind.GAUSSIAN, Objective.GREEDY_MAX
    exp_cfg = _experiment_config(cfg, dist, objective)

    if f["records"] and cmd != "gap":
        _emit(cfg, run_trials(exp_cfg, progress), RECORD_FIELDS)
        return 0
    if cmd == "simulate":
        if dist is DistributionKind.GAUSSIAN and objective is not Objective.EXACT_MIN:
            report, cls = ratio_experiment(exp_cfg, progress), RatioReport
        else:
            report, cls = summary_experiment(exp_cfg, progress), SummaryReport
    elif cmd == "clt":
        report, cls = clt_experiment(exp_cfg, progress), CltReport
    elif cmd == "parisi":
        report, cls = parisi_experiment(exp_cfg, progress), ParisiReport
    elif cmd == "uniform":
        report, cls = uniform_experiment(exp_cfg, progress), UniformReport
    else:
        if f["records"]:
            raise UsageError("ral gap: error: --records is not supported for paired runs")
        report, cls = optimality_gap(exp_cfg, progress), GapReport
    _note_band(cls)
    _emit(cfg, report, field_names(cls))
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        return run(parse_args(argv))
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except (RalError, OSError, ValueError) as exc:
        print(f"ral: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
