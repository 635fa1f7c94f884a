"""Command line front end.

Exit codes: 0 success, 1 oracle disagreement, 2 bad input state, 64 usage error.
Datasets go to ``--out`` (or stdout); human summaries go to stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .analysis import (
    FAMILIES,
    FERMION_RATIO_HIGH,
    FERMION_RATIO_LOW,
    boson_extremal_curves,
    fermion_concurrence_range,
    fermion_ratio_of_alpha,
    qubit_extremal_curves,
    sample_states,
    verify,
)
from .dynamics import TMIN_VARIANTS, EnergyLadder, orthogonality_time
from .errors import OrthospeedError
from .states import load_state

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_USAGE = 64

PHASE_COUNT = {"qubit": 4, "boson": 3, "fermion": 6}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    family: Optional[str] = None
    count: Optional[int] = None
    seed: int = 0
    tol: float = 1e-6
    tmin_variant: str = "eq11"
    out: Optional[str] = None
    format: Optional[str] = None
    epsilon: float = 1.0
    hbar: float = 1.0
    resolution: int = 101
    grid_points: int = 10**6
    state_file: Optional[str] = None

    def __post_init__(self):
        if self.count is not None and self.count < 1:
            raise UsageError(f"--count must be >= 1, got {self.count}")
        if not (self.epsilon > 0 and self.hbar > 0):
            raise UsageError("--epsilon and --hbar must be positive")
        if self.family is not None and self.family not in FAMILIES:
            raise UsageError(f"--family must be one of {', '.join(FAMILIES)}")
        if self.tmin_variant not in TMIN_VARIANTS:
            raise UsageError(f"--tmin-variant must be one of {', '.join(TMIN_VARIANTS)}")


_CONFIG_TYPES = {
    "family": str,
    "count": int,
    "seed": int,
    "tol": float,
    "tmin-variant": str,
    "out": str,
    "format": str,
    "epsilon": float,
    "hbar": float,
    "resolution": int,
    "grid-points": int,
}


def read_config(path) -> dict:
    """Parse ``key=value`` lines; ``#`` starts a comment."""
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("_", "-")
        if key not in _CONFIG_TYPES:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key.replace("-", "_")] = _CONFIG_TYPES[key](val)
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {val!r}") from exc
    return values


def fmt(x) -> str:
    """CSV cell: shortest round-trip repr, empty for missing values."""
    if x is None:
        return ""
    return repr(float(x))


def _write_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands ----------------------------------------------------------------

def cmd_analyze(cfg: RunConfig) -> int:
    state = load_state(cfg.state_file)
    rep = orthogonality_time(state, tmin_variant=cfg.tmin_variant)
    rep = rep.scaled(EnergyLadder(cfg.epsilon, cfg.hbar))
    fmt_ = cfg.format or "text"
    if fmt_ == "json":
        _emit(json.dumps(rep.to_dict(), indent=2) + "\n", cfg.out)
    elif fmt_ == "csv":
        d = rep.to_dict()
        d["root_angles"] = " ".join(fmt(a) for a in rep.root_angles)
        keys = ["family", "concurrence", "e_mean", "delta_e", "t_min", "tau", "ratio", "root_angles"]
        row = [d[k] if isinstance(d[k], str) else fmt(d[k]) for k in keys]
        _emit(_write_csv(keys, [row]), cfg.out)
    else:
        lines = [
            f"family={rep.family}",
            f"C={rep.concurrence:.6f}",
            f"E={rep.e_mean:.6f}",
            f"dE={rep.delta_e:.6f}",
            f"T_min={rep.t_min:.6f}",
            f"tau={rep.tau:.6f}" if rep.attainable else "tau=unattainable",
            f"ratio={rep.ratio:.6f}" if rep.attainable else "ratio=-",
            "root_angles=" + " ".join(f"{a:.6f}" for a in rep.root_angles),
        ]
        if rep.t_min_boson_paper is not None:
            lines.insert(5, f"T_min_eq11={rep.t_min_eq11:.6f}")
            lines.insert(6, f"T_min_boson_paper={rep.t_min_boson_paper:.6f}")
        _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK


def curve_rows(family: str, resolution: int, tmin_variant: str = "eq11"):
    """Header and rows of the extremal-curve dataset for ``family``."""
    if resolution < 2:
        raise UsageError(f"--resolution must be >= 2, got {resolution}")
    if family == "qubit":
        rows = []
        for c in np.linspace(0.0, 1.0, resolution):
            lo, hi = qubit_extremal_curves(float(c))
            rows.append([fmt(c), fmt(lo), fmt(hi)])
        return ["C", "ratio_min", "ratio_max"], rows
    if family == "boson":
        rows = []
        for c in np.linspace(0.0, 1.0, resolution):
            lo, hi, a_lo, a_hi = boson_extremal_curves(float(c), tmin_variant)
            rows.append([fmt(c), fmt(lo), fmt(hi), fmt(a_lo), fmt(a_hi)])
        return ["C", "ratio_min", "ratio_max", "alpha_min", "alpha_max"], rows
    rows = []
    for a in np.linspace(math.pi / 3.0, math.pi, resolution):
        lo, hi = fermion_concurrence_range(float(a))
        rows.append([fmt(a), f"{fmt(lo)}:{fmt(hi)}", fmt(fermion_ratio_of_alpha(float(a)))])
    return ["alpha", "C_available", "ratio_bounds"], rows


def cmd_curves(cfg: RunConfig) -> int:
    if cfg.family is None:
        raise UsageError("curves needs --family")
    header, rows = curve_rows(cfg.family, cfg.resolution, cfg.tmin_variant)
    if (cfg.format or "csv") == "json":
        _emit(json.dumps([dict(zip(header, r)) for r in rows], indent=1) + "\n", cfg.out)
    else:
        _emit(_write_csv(header, rows), cfg.out)
    if cfg.family == "fermion":
        print(f"fermion ratio bounds: {FERMION_RATIO_LOW:.6f} .. {FERMION_RATIO_HIGH:.6f}",
              file=sys.stderr)
    return EXIT_OK


def sample_header(family: str) -> list[str]:
    return ["C", "ratio", "alpha", "beta", "delta_or_lambda"] + [
        f"phi_{i}" for i in range(PHASE_COUNT[family])
    ]


def sample_rows(points) -> list[list[str]]:
    return [
        [fmt(p.concurrence), fmt(p.ratio), fmt(p.alpha), fmt(p.beta), fmt(p.delta_or_lambda)]
        + [fmt(ph) for ph in p.phases]
        for p in points
    ]


def cmd_sample(cfg: RunConfig) -> int:
    if cfg.family is None or cfg.count is None:
        raise UsageError("sample needs --family and --count")
    points = sample_states(cfg.family, cfg.count, cfg.seed, tmin_variant=cfg.tmin_variant)
    if (cfg.format or "csv") == "json":
        header = sample_header(cfg.family)
        docs = [dict(zip(header, r)) for r in sample_rows(points)]
        _emit(json.dumps(docs, indent=1) + "\n", cfg.out)
    else:
        _emit(_write_csv(sample_header(cfg.family), sample_rows(points)), cfg.out)
    ratios = [p.ratio for p in points]
    print(f"{cfg.family}: {len(points)} states, ratio in [{min(ratios):.6f}, {max(ratios):.6f}]"
          " (phases uniform on [0, 2pi))", file=sys.stderr)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.family is None or cfg.count is None:
        raise UsageError("verify needs --family and --count")
    report = verify(cfg.family, cfg.count, cfg.seed, cfg.tol, grid_points=cfg.grid_points)
    _emit(json.dumps(report.to_dict(), indent=1) + "\n", cfg.out)
    status = "PASS" if report.ok else "FAIL"
    print(
        f"{status} {cfg.family}: {report.count} states, "
        f"max |tau - tau_oracle| = {report.max_tau_deviation:.3e}, "
        f"max moment deviation = {report.max_moment_deviation:.3e}, "
        f"{len(report.failures)} failures (tol {cfg.tol:g})",
        file=sys.stderr,
    )
    return EXIT_OK if report.ok else EXIT_VERIFY_FAILED


COMMANDS = {
    "analyze": cmd_analyze,
    "curves": cmd_curves,
    "sample": cmd_sample,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="orthospeed", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--config", help="key=value file; flags override it")
        p.add_argument("--tmin-variant", choices=TMIN_VARIANTS)
        p.add_argument("--out", help="write the dataset here instead of stdout")
        p.add_argument("--format", choices=("csv", "json", "text"))
        p.add_argument("--epsilon", type=float, help="level spacing (default 1)")
        p.add_argument("--hbar", type=float, help="reduced Planck constant (default 1)")

    p = sub.add_parser("analyze", help="speed report for one state (JSON interchange file)")
    p.add_argument("state_file")
    common(p)

    p = sub.add_parser("curves", help="extremal tau/T_min curves")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--resolution", type=int)
    common(p)

    p = sub.add_parser("sample", help="random orthogonality-reaching states")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--count", type=int)
    p.add_argument("--seed", type=int)
    common(p)

    p = sub.add_parser("verify", help="cross-check root-based tau against a brute-force scan")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--count", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--grid-points", type=int)
    common(p)
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    merged = read_config(args.config) if getattr(args, "config", None) else {}
    for f in fields(RunConfig):
        val = getattr(args, f.name, None)
        if val is not None:
            merged[f.name] = val
    merged["command"] = args.command
    return RunConfig(**merged)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = make_config(args)
        if cfg.format == "text" and cfg.command != "analyze":
            raise UsageError("--format text is only available for analyze")
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"orthospeed: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OrthospeedError, OSError) as exc:
        print(f"orthospeed: invalid input: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
