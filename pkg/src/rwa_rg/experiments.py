"""Experiment specs, method-vs-numeric error reports, figure presets and epsilon sweeps."""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from . import jc_series, rabi_series, riccati
from .core import (
    Method,
    MethodTag,
    Model,
    ModelParams,
    ParameterError,
    StrongCouplingWarning,
    TimeGrid,
    Trajectory,
    map_times,
    validate_params,
)
from .integrator import DEFAULT_N_MAX, IntegratorConfig, solve_rabi

RABI_METHODS = frozenset(Method)
JC_METHODS = frozenset({Method.NUMERIC, Method.RWA, Method.RENORMALIZED})


class ConfigurationError(ParameterError):
    """The requested combination of model, methods and parameters is unsupported."""


@dataclass(frozen=True)
class ExperimentSpec:
    model: Model
    methods: tuple
    params: ModelParams
    grid: TimeGrid
    integrator: IntegratorConfig = IntegratorConfig()
    n_max: int = DEFAULT_N_MAX
    name: str = "experiment"

    def validate(self) -> "ExperimentSpec":
        if not self.methods:
            raise ConfigurationError("an experiment needs at least one method")
        validate_params(self.params)
        allowed = RABI_METHODS if self.model is Model.RABI else JC_METHODS
        for m in self.methods:
            if m.kind not in allowed:
                raise ConfigurationError(f"{m.label} is not available for the {self.model.value} model")
            if m.is_series and self.params.delta != 0:
                raise ConfigurationError(
                    f"{m.label} is a resonant series and needs delta = 0, got {self.params.delta!r}")
        if self.model is Model.JAYNES_CUMMINGS and self.n_max < 1:
            raise ConfigurationError("n_max must be >= 1")
        return self

    @property
    def has_numeric(self) -> bool:
        return any(m.kind is Method.NUMERIC for m in self.methods)


@dataclass(frozen=True)
class MethodError:
    method: str
    max_error_a: float
    time_of_max_a: float
    max_error_b: Optional[float] = None
    time_of_max_b: Optional[float] = None


@dataclass(frozen=True)
class ErrorReport:
    """Max-abs probability errors of each method against the numeric reference.

    For the ladder, ``a`` refers to ``|a_1|**2`` and ``b`` to ``|b_0|**2``.
    """

    errors: dict
    reference: str = Method.NUMERIC.value

    def __getitem__(self, label: str) -> MethodError:
        return self.errors[label]


@dataclass
class RunResult:
    spec: ExperimentSpec
    trajectories: dict
    report: Optional[ErrorReport]
    meta: dict = field(default_factory=dict)


def _rabi_series_traj(spec: ExperimentSpec, tag: MethodTag) -> Trajectory:
    tau = spec.grid.times
    eps = spec.params.epsilon
    valid = None
    if tag.kind is Method.RWA:
        amp = rabi_series.rwa(tau)
        a, b = amp.a, amp.b
    elif tag.kind is Method.SINGLE_SCALE:
        amp = rabi_series.single_scale(tau / eps, eps, tag.order)
        a, b = amp.a, amp.b
    elif tag.kind is Method.TWO_SCALE:
        amp = rabi_series.two_scale(map_times(tau, eps), eps, tag.order)
        a, b = amp.a, amp.b
    elif tag.kind is Method.RENORMALIZED:
        amp = rabi_series.renormalized(map_times(tau, eps), eps)
        a, b = amp.a, amp.b
    elif tag.kind is Method.RICCATI_RENORMALIZED:
        u = riccati.renorm_u(tau, eps, on_pole="nan")
        valid = np.isfinite(u)
        a, b = riccati.riccati_amplitudes(u)
    elif tag.kind is Method.RICCATI_NUMERIC:
        states = riccati.integrate_riccati(eps, spec.grid, spec.integrator)
        u = np.array([s.u for s in states])
        valid = np.array([s.valid for s in states])
        a, b = riccati.riccati_amplitudes(u)
    else:
        raise ConfigurationError(f"unsupported method {tag.label}")
    return Trajectory(spec.grid, np.asarray(a, complex), np.asarray(b, complex), tag,
                      spec.params, valid=valid)


def _jc_series_traj(spec: ExperimentSpec, tag: MethodTag) -> Trajectory:
    tau = spec.grid.times
    eps = spec.params.epsilon
    if tag.kind is Method.RWA:
        a1, b0 = jc_series.rwa_jc(tau)
        zero = np.zeros_like(a1)
        a = np.stack([zero, a1], axis=1)
        b = np.stack([b0, zero], axis=1)
        return Trajectory(spec.grid, a, b, tag, spec.params, channels=[0, 1])
    if tag.kind is Method.RENORMALIZED:
        a1 = jc_series.renormalized_a1(map_times(tau, eps), eps)
        # b_1 vanishes identically by parity; no series is claimed for other channels.
        return Trajectory(spec.grid, a1[:, None], np.zeros((len(tau), 1), complex), tag,
                          spec.params, channels=[1])
    raise ConfigurationError(f"unsupported method {tag.label}")


def _numeric(spec: ExperimentSpec) -> Trajectory:
    if spec.model is Model.RABI:
        return solve_rabi(spec.params, spec.grid, spec.integrator)
    traj, used, trunc, ok = jc_series.converged_ladder(
        spec.params, spec.grid, spec.integrator, spec.n_max)
    traj.meta.update(n_max=used, truncation_error=trunc, truncation_converged=ok)
    return traj


def _channel(traj: Trajectory, which: str, n: int):
    if traj.channels is None or n not in traj.channels:
        return None
    col = traj.channels.index(n)
    return (traj.prob_a if which == "a" else traj.prob_b)[:, col]


def _max_err(values, ref, valid, tau):
    if values is None or ref is None:
        return None, None
    err = np.abs(values - ref)
    if valid is not None:
        err = np.where(valid, err, -np.inf)
    if not np.any(np.isfinite(err)):
        return None, None
    i = int(np.nanargmax(err))
    return float(err[i]), float(tau[i])


def error_report(trajectories: dict, model: Model) -> Optional[ErrorReport]:
    """Errors on probabilities of every non-numeric trajectory against ``numeric``."""
    ref = trajectories.get(Method.NUMERIC.value)
    if ref is None:
        return None
    tau = ref.times
    out = {}
    for label, traj in trajectories.items():
        if label == Method.NUMERIC.value:
            continue
        if model is Model.RABI:
            pa, pb = traj.prob_a, traj.prob_b
            ra, rb = ref.prob_a, ref.prob_b
        else:
            pa, ra = _channel(traj, "a", 1), _channel(ref, "a", 1)
            pb, rb = _channel(traj, "b", 0), _channel(ref, "b", 0)
        ea, ta = _max_err(pa, ra, traj.valid, tau)
        eb, tb = _max_err(pb, rb, traj.valid, tau)
        out[label] = MethodError(label, ea, ta, eb, tb)
    return ErrorReport(out)


def run(spec: ExperimentSpec) -> RunResult:
    """Evaluate every method of ``spec`` on its grid and compare against the numeric run."""
    spec.validate()
    trajectories = {}
    for tag in spec.methods:
        if tag.kind is Method.NUMERIC:
            traj = _numeric(spec)
        elif spec.model is Model.RABI:
            traj = _rabi_series_traj(spec, tag)
        else:
            traj = _jc_series_traj(spec, tag)
        trajectories[tag.label] = traj
    return RunResult(spec, trajectories, error_report(trajectories, spec.model))


@dataclass(frozen=True)
class ConvergenceRow:
    epsilon: float
    method: str
    max_error_a: float
    time_of_max_a: float
    ratio_to_next: Optional[float]


@dataclass(frozen=True)
class ConvergenceTable:
    rows: tuple

    def errors(self, method: str) -> list:
        return [r.max_error_a for r in self.rows if r.method == method]

    def ratios(self, method: str) -> list:
        return [r.ratio_to_next for r in self.rows
                if r.method == method and r.ratio_to_next is not None]


def _run_quiet(spec: ExperimentSpec) -> RunResult:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", StrongCouplingWarning)
        return run(spec)


def sweep_epsilon(base: ExperimentSpec, epsilons: Sequence[float], jobs: int = 1) -> ConvergenceTable:
    """Rerun ``base`` at each epsilon and tabulate max errors and successive ratios.

    ``ratio_to_next`` is ``error(eps_i) / error(eps_{i+1})``. Cells run in
    a thread pool when ``jobs > 1``; the table order follows ``epsilons``.
    """
    epsilons = [float(e) for e in epsilons]
    if len(epsilons) < 2:
        raise ConfigurationError("a sweep needs at least two epsilon values")
    methods = tuple(base.methods)
    if not base.has_numeric:
        methods = methods + (MethodTag(Method.NUMERIC),)
    specs = [
        replace(base, methods=methods,
                params=ModelParams.from_epsilon(e, base.params.delta, base.model),
                name=f"{base.name}-eps{e:g}")
        for e in epsilons
    ]
    for s in specs:
        s.validate()
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_quiet, specs))
    else:
        results = [_run_quiet(s) for s in specs]
    rows = []
    labels = [m.label for m in methods if m.kind is not Method.NUMERIC]
    for label in labels:
        errs = [r.report[label] for r in results]
        for i, (e, me) in enumerate(zip(epsilons, errs)):
            ratio = None
            if i + 1 < len(errs):
                nxt = errs[i + 1].max_error_a
                ratio = me.max_error_a / nxt if nxt else float("inf")
            rows.append(ConvergenceRow(e, label, me.max_error_a, me.time_of_max_a, ratio))
    return ConvergenceTable(tuple(rows))


def _tags(*names: str) -> tuple:
    return tuple(MethodTag.parse(n) for n in names)


# Figure presets: (model, big_delta, window, methods). Time is in units of the
# inverse Rabi (or JC) frequency. The JC presets default to big_delta = 10;
# pass big_delta (or --big-delta) for other values, e.g. 50.
PRESETS = {
    1: (Model.RABI, 50.0, 10.0, ("rwa", "numeric")),
    2: (Model.RABI, 50.0, 2.0, ("rwa", "single_scale(2)", "numeric")),
    3: (Model.RABI, 10.0, 150.0, ("rwa", "two_scale(2)", "numeric")),
    4: (Model.RABI, 10.0, 150.0, ("two_scale(2)", "renormalized", "numeric")),
    5: (Model.JAYNES_CUMMINGS, 10.0, 100.0, ("rwa", "numeric")),
    6: (Model.JAYNES_CUMMINGS, 10.0, 100.0, ("rwa", "renormalized", "numeric")),
    7: (Model.JAYNES_CUMMINGS, 2.0, 10.0, ("renormalized", "numeric")),
    8: (Model.RABI, 10.0, 3.0, ("rwa", "riccati_renormalized", "riccati_numeric", "numeric")),
}


def figure_preset(number: int, big_delta: Optional[float] = None, t_max: Optional[float] = None,
                  n_samples: int = 2000, integrator: IntegratorConfig = IntegratorConfig(),
                  n_max: int = DEFAULT_N_MAX) -> ExperimentSpec:
    if number not in PRESETS:
        raise ConfigurationError(f"no preset for figure {number}; choose 1-8")
    model, bd, window, names = PRESETS[number]
    params = ModelParams(0.0, big_delta if big_delta is not None else bd, model)
    grid = TimeGrid.uniform(t_max if t_max is not None else window, n_samples)
    return ExperimentSpec(model, _tags(*names), params, grid, integrator, n_max, name=f"fig{number}")
