"""Command line entry point: ``rwa-rg {rabi,jc,riccati,figure,sweep}``.

Settings resolve in the order flag, then ``--config`` file, then built-in
default. The config file holds ``key = value`` lines whose keys are the long
flag names (``big_delta`` or ``big-delta``). ``RWA_RG_OUTPUT_DIR`` only sets
the directory used when ``--output`` is not given.
"""

from __future__ import annotations

import argparse
import configparser
import logging
import os
import sys
import warnings
from pathlib import Path
from typing import Optional

from . import __version__
from .core import MethodTag, Model, ModelParams, ParameterError, TimeGrid
from .experiments import ExperimentSpec, figure_preset, run, sweep_epsilon
from .integrator import DEFAULT_N_MAX, IntegrationError, IntegratorConfig
from .output import emit, emit_table

log = logging.getLogger("rwa_rg")

OUTPUT_DIR_ENV = "RWA_RG_OUTPUT_DIR"

DEFAULTS = {
    "delta": 0.0,
    "big_delta": 10.0,
    "epsilon": None,
    "t_max": None,
    "samples": 2000,
    "order": 2,
    "methods": None,
    "n_max": DEFAULT_N_MAX,
    "rel_tol": 1e-10,
    "abs_tol": 1e-12,
    "output": None,
    "format": "csv",
    "epsilons": "0.1,0.05",
    "model": "rabi",
    "jobs": 1,
}

DEFAULT_METHODS = {
    "rabi": "rwa,two_scale,renormalized,numeric",
    "jc": "rwa,renormalized,numeric",
    "riccati": "riccati_renormalized,riccati_numeric,numeric",
}
DEFAULT_T_MAX = {"rabi": 20.0, "jc": 20.0, "riccati": 1.4}

CASTS = {
    "delta": float, "big_delta": float, "epsilon": float, "t_max": float,
    "samples": int, "order": int, "n_max": int, "rel_tol": float, "abs_tol": float,
    "jobs": int,
}


def read_config(path) -> dict:
    """Parse a flat ``key = value`` file; unknown keys are rejected."""
    parser = configparser.ConfigParser(interpolation=None)
    text = Path(path).read_text(encoding="utf-8")
    parser.read_string("[defaults]\n" + text)
    out = {}
    for key, value in parser.items("defaults"):
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise ParameterError(f"unknown config key {key!r} in {path}")
        out[key] = CASTS.get(key, str)(value)
    return out


def _common(p: argparse.ArgumentParser, methods: bool = True) -> None:
    p.add_argument("--delta", type=float, help="detuning (series methods need 0)")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--big-delta", type=float, help="counter-rotating frequency")
    g.add_argument("--epsilon", type=float, help="1 / big-delta")
    p.add_argument("--t-max", type=float, help="end of the time window")
    p.add_argument("--samples", type=int, help="number of uniform samples (default 2000)")
    p.add_argument("--order", type=int, help="order of single_scale / two_scale when not given inline")
    if methods:
        p.add_argument("--methods", help="comma separated, e.g. rwa,two_scale(1),numeric")
    p.add_argument("--n-max", type=int, help="JC ladder cutoff (default 15)")
    p.add_argument("--rel-tol", type=float)
    p.add_argument("--abs-tol", type=float)
    p.add_argument("--output", help="output file, '-' for stdout")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--config", help="key = value file of defaults")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rwa-rg", description=(
        "Rabi and Jaynes-Cummings dynamics: closed-form expansions against a numeric reference."))
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("rabi", "two-level Rabi model"),
                        ("jc", "Jaynes-Cummings ladder, one initial photon"),
                        ("riccati", "Riccati ratio b/a for the Rabi model")):
        _common(sub.add_parser(name, help=help_))
    fig = sub.add_parser("figure", help="reproduce one figure's dataset")
    fig.add_argument("number", type=int, choices=range(1, 9))
    _common(fig, methods=False)
    sw = sub.add_parser("sweep", help="errors and ratios across epsilon values")
    _common(sw)
    sw.add_argument("--model", choices=("rabi", "jc"))
    sw.add_argument("--epsilons", help="comma separated, at least two")
    sw.add_argument("--jobs", type=int, help="worker threads")
    return parser


def resolve(args: argparse.Namespace) -> dict:
    """Merge flags over config file over defaults."""
    conf = read_config(args.config) if getattr(args, "config", None) else {}
    out = dict(DEFAULTS)
    out.update(conf)
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            out[key] = value
    # --epsilon and --big-delta are exclusive across both sources: the flag wins.
    if getattr(args, "epsilon", None) is not None:
        out["big_delta"] = None
    elif getattr(args, "big_delta", None) is not None:
        out["epsilon"] = None
    elif conf.get("epsilon") is not None and "big_delta" in conf:
        raise ParameterError("config sets both big_delta and epsilon")
    out["big_delta_set"] = out["epsilon"] is not None or "big_delta" in conf or \
        getattr(args, "big_delta", None) is not None
    if out["epsilon"] is not None:
        if not out["epsilon"] > 0:
            raise ParameterError("epsilon must be positive")
        out["big_delta"] = 1.0 / out["epsilon"]
    return out


def _default_output(name: str, fmt: str) -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV) or ".") / f"{name}.{fmt}"


def _integrator(opts: dict) -> IntegratorConfig:
    return IntegratorConfig(rel_tol=opts["rel_tol"], abs_tol=opts["abs_tol"])


def _spec(command: str, opts: dict, explicit: argparse.Namespace) -> ExperimentSpec:
    if command == "figure":
        bd = opts["big_delta"] if opts["big_delta_set"] else None
        return figure_preset(explicit.number, big_delta=bd, t_max=opts["t_max"],
                             n_samples=opts["samples"], integrator=_integrator(opts),
                             n_max=opts["n_max"])
    kind = opts["model"] if command == "sweep" else command
    model = Model.JAYNES_CUMMINGS if kind == "jc" else Model.RABI
    methods = opts["methods"] or DEFAULT_METHODS[kind]
    tags = tuple(MethodTag.parse(m, default_order=opts["order"])
                 for m in methods.split(",") if m.strip())
    t_max = opts["t_max"] if opts["t_max"] is not None else DEFAULT_T_MAX[kind]
    params = ModelParams(opts["delta"], opts["big_delta"], model)
    return ExperimentSpec(model, tags, params, TimeGrid.uniform(t_max, opts["samples"]),
                          _integrator(opts), opts["n_max"], name=command)


def _summary(result) -> None:
    if result.report is None:
        return
    for label, e in result.report.errors.items():
        if e.max_error_a is None:
            continue
        log.info("%s: max |P_a error| %.3g at tau=%.4g", label, e.max_error_a, e.time_of_max_a)


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        opts = resolve(args)
        spec = _spec(args.command, opts, args)
        fmt = opts["format"]
        if args.command == "sweep":
            eps = [float(e) for e in str(opts["epsilons"]).split(",") if e.strip()]
            table = sweep_epsilon(spec, eps, jobs=opts["jobs"])
            target = opts["output"] or _default_output(f"sweep-{spec.model.value}", fmt)
            written = emit_table(table, target, fmt)
        else:
            with warnings.catch_warnings():
                warnings.simplefilter("always")
                result = run(spec)
            _summary(result)
            target = opts["output"] or _default_output(spec.name, fmt)
            written = emit(result, target, fmt)
    except (ParameterError, IntegrationError) as exc:
        print(f"rwa-rg: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"rwa-rg: cannot write output: {exc}", file=sys.stderr)
        return 3
    for path in written:
        log.info("wrote %s", path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
