"""Command line front end: ``sweep``, ``shapes``, ``error`` and ``verify``.

Every option can also be set in a ``key = value`` file given with
``--config``; keys use the long flag names (dashes or underscores), and
flags on the command line override the file.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import math
import os
import sys
from contextlib import contextmanager
from typing import Iterable

import numpy as np

from . import oracle, verification
from . import wavepacket as wp
from .sweep import FIELD_NAMES, LogGrid, NonConvergence, RunConfig, evaluate_point, run_sweep

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
SHAPE_SAMPLES = 2048

DEFAULTS = {
    "format": "csv",
    "out": None,
    "eta": wp.DEFAULT_ETA,
    "theta": math.pi / 2,
    "phi": math.pi,
    "shapes": "gaussian,square,exponential",
    "grid": "0.01:100:61",
    "oracle": False,
    "grid_points": 2**14,
    "jobs": None,
    "seed": 0,
    "shape": "gaussian",
    "wq_dt": 1.0,
}


class UsageError(Exception):
    pass


def _add_common(p: argparse.ArgumentParser) -> None:
    # defaults are None so that config-file values can fill the gaps
    p.add_argument("--config", help="key = value file; flags override it")
    p.add_argument("--format", choices=["csv", "jsonl"])
    p.add_argument("--out", help="output path (default: standard output)")
    p.add_argument("--eta", type=float, help="edge smoothing of square/exponential (default 1/pi)")
    p.add_argument("--theta", type=float, help="angle of H_S to the measured axis (default pi/2)")
    p.add_argument("--phi", type=float, help="kick strength (default pi)")
    p.add_argument("--shapes", help="comma separated subset of gaussian,square,exponential")
    p.add_argument("--grid", help="log-spaced omega_q*dt range MIN:MAX:COUNT (default 0.01:100:61)")
    p.add_argument("--oracle", action="store_true", default=None, help="cross-check with the grid oracle")
    p.add_argument("--grid-points", type=int, help="oracle grid size (default 16384)")
    p.add_argument("--jobs", type=int, help="worker processes (default: all cores)")
    p.add_argument("--seed", type=int, help="audit seed (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="waymeter",
        description="Readout error of a qubit measured by a flying-particle meter, against its conservation-law bound.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("sweep", "error, bound and ratio over the omega_q*dt grid"),
        ("shapes", "sampled |psi|^2 of each shape at omega_q*dt = 1, centered on zero"),
        ("error", "one point: epsilon, epsilon_B and their ratio"),
        ("verify", "run the acceptance checks; exit 1 if any fails"),
    ):
        p = sub.add_parser(name, help=text, description=text)
        _add_common(p)
        if name in ("error", "shapes"):
            p.add_argument("--wq-dt", type=float, help="omega_q * dt (default 1)")
        if name == "error":
            p.add_argument("--shape", choices=sorted(wp.SHAPE_NAMES), help="default gaussian")
    return parser


def _read_config(path: str) -> dict:
    text = open(path, encoding="utf-8").read()
    cp = configparser.ConfigParser(interpolation=None)
    if not text.lstrip().startswith("["):
        text = "[run]\n" + text
    cp.read_string(text)
    out = {}
    for section in cp.sections():
        for key, value in cp.items(section):
            key = key.replace("-", "_")
            if key not in DEFAULTS:
                raise UsageError(f"unknown config key {key!r} in {path}")
            out[key] = value
    return out


_CONVERT = {
    "eta": float,
    "theta": float,
    "phi": float,
    "grid_points": int,
    "jobs": int,
    "seed": int,
    "wq_dt": float,
}


def _as_bool(text) -> bool:
    if isinstance(text, bool):
        return text
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def resolve_options(args: argparse.Namespace) -> dict:
    """Defaults, then config file, then flags."""
    opts = dict(DEFAULTS)
    if args.config:
        try:
            opts.update(_read_config(args.config))
        except (OSError, configparser.Error) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            opts[key] = value
    try:
        for key, fn in _CONVERT.items():
            if opts[key] is not None:
                opts[key] = fn(opts[key])
        opts["oracle"] = _as_bool(opts["oracle"])
        opts["grid"] = LogGrid.parse(opts["grid"]) if isinstance(opts["grid"], str) else opts["grid"]
        opts["shapes"] = tuple(s.strip() for s in str(opts["shapes"]).split(",") if s.strip())
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if opts["format"] not in ("csv", "jsonl"):
        raise UsageError(f"unknown format {opts['format']!r}")
    return opts


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def _csv_value(v):
    return repr(float(v)) if isinstance(v, (float, np.floating)) else v


def write_records(records: Iterable[dict], fmt: str, fh, fieldnames: list[str]) -> None:
    if fmt == "jsonl":
        for r in records:
            fh.write(json.dumps({k: _json_value(r[k]) for k in fieldnames}) + "\n")
        return
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(fieldnames)
    for r in records:
        w.writerow([_csv_value(r[k]) for k in fieldnames])


@contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _run_config(opts: dict) -> RunConfig:
    try:
        return RunConfig(
            shapes=opts["shapes"],
            grid=opts["grid"],
            eta=opts["eta"],
            theta=opts["theta"],
            phi=opts["phi"],
            oracle=opts["oracle"],
            grid_points=opts["grid_points"],
            jobs=opts["jobs"],
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _fields(oracle_on: bool) -> list[str]:
    return FIELD_NAMES if oracle_on else [f for f in FIELD_NAMES if f != "epsilon_oracle"]


def cmd_sweep(opts: dict) -> int:
    cfg = _run_config(opts)
    points = run_sweep(cfg)
    with _output(opts["out"]) as fh:
        write_records((p.record() for p in points), opts["format"], fh, _fields(cfg.oracle))
    return EXIT_OK


def cmd_error(opts: dict) -> int:
    cfg = _run_config({**opts, "shapes": (opts["shape"],)})
    if not opts["wq_dt"] > 0:
        raise UsageError("wq-dt must be positive")
    p = evaluate_point(opts["shape"], opts["wq_dt"], cfg.eta, cfg.theta, cfg.phi, cfg.oracle, cfg.grid_points)
    with _output(opts["out"]) as fh:
        write_records([p.record()], opts["format"], fh, _fields(cfg.oracle))
    return EXIT_OK


def shape_samples(shapes, eta: float, wq_dt: float = 1.0, n: int = SHAPE_SAMPLES):
    """(name, t, density) arrays for each shape at omega_q = 1, mean arrival time moved to 0."""
    out = []
    for name in shapes:
        profile = wp.make_shape(name, wq_dt, eta)
        mu = wp.mean_time(profile)
        lo, hi = profile.window()
        t = np.linspace(lo - mu, hi - mu, n)
        out.append((name, t, wp.density(profile, t + mu)))
    return out


def cmd_shapes(opts: dict) -> int:
    cfg = _run_config(opts)
    if not opts["wq_dt"] > 0:
        raise UsageError("wq-dt must be positive")
    rows = (
        {"series": name, "t": float(ti), "density": float(di)}
        for name, t, d in shape_samples(cfg.shapes, cfg.eta, opts["wq_dt"])
        for ti, di in zip(t, d)
    )
    with _output(opts["out"]) as fh:
        write_records(rows, opts["format"], fh, ["series", "t", "density"])
    return EXIT_OK


def cmd_verify(opts: dict) -> int:
    if opts["grid_points"] < 3:
        raise UsageError("grid-points must be at least 3")
    vo = verification.VerifyOptions(eta=opts["eta"], seed=opts["seed"], grid_points=opts["grid_points"])
    results = []
    for number, *_ in verification.CHECKS:
        r = verification.run_check(number, vo)
        print(r.line(), flush=True)
        results.append(r)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    if opts["out"]:
        names = ["number", "name", "passed", "measured", "tolerance", "elapsed", "budget", "detail"]
        with _output(opts["out"]) as fh:
            write_records((r.record() for r in results), opts["format"], fh, names)
    return EXIT_VERIFY if failed else EXIT_OK


COMMANDS = {"sweep": cmd_sweep, "shapes": cmd_shapes, "error": cmd_error, "verify": cmd_verify}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on bad usage
    try:
        opts = resolve_options(args)
        return COMMANDS[args.command](opts)
    except UsageError as exc:
        print(f"waymeter: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NonConvergence, ArithmeticError, oracle.WindowTooSmall) as exc:
        print(f"waymeter: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        sys.stdout = open(os.devnull, "w")
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
