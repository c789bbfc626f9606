"""Reference solutions of the Rabi equations and the truncated JC ladder.

An adaptive Dormand-Prince 5(4) pair with quartic dense output integrates the
complex amplitude equations. The drive phases are evaluated exactly at every
stage time. Model-specific right-hand sides run in the compiled kernel when
it is available; arbitrary right-hand sides go through the Python driver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from . import _kernels
from .core import (
    AmplitudePair,
    LadderState,
    Method,
    MethodTag,
    Model,
    ModelParams,
    ParameterError,
    TimeGrid,
    Trajectory,
    validate_params,
)

DEFAULT_N_MAX = 15


class IntegrationError(RuntimeError):
    """The adaptive integrator could not reach the end of the grid."""

    def __init__(self, message: str, last_time: float):
        super().__init__(f"{message} (last good time {last_time!r})")
        self.last_time = last_time


@dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances and step bounds.

    ``max_step=None`` resolves to ``0.1 / big_delta`` so that every
    counter-rotating period is covered by at least ~60 steps.
    ``initial_step=None`` lets the driver estimate one.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: Optional[float] = None
    initial_step: Optional[float] = None
    min_step: float = 0.0
    max_steps: int = 50_000_000

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ParameterError("tolerances must be positive")
        if self.max_step is not None and not self.max_step > 0:
            raise ParameterError("max_step must be positive")
        if self.initial_step is not None and not self.initial_step > 0:
            raise ParameterError("initial_step must be positive")

    def resolved_max_step(self, big_delta: Optional[float]) -> float:
        if self.max_step is not None:
            return self.max_step
        if big_delta is None:
            return math.inf
        return 0.1 / big_delta

    def halved(self) -> "IntegratorConfig":
        return replace(self, rel_tol=self.rel_tol / 2, abs_tol=self.abs_tol / 2)


def rabi_rhs(t: float, state: AmplitudePair, params: ModelParams) -> AmplitudePair:
    """Time derivative of the dimensionless Rabi amplitudes."""
    slow = np.exp(1j * params.delta * t)
    fast = np.exp(1j * params.big_delta * t)
    da = -1j * (np.conj(slow) + np.conj(fast)) * state.b
    db = -1j * (slow + fast) * state.a
    return AmplitudePair(da, db)


def jc_rhs(t: float, state: LadderState, params: ModelParams) -> LadderState:
    """Time derivative of the truncated Jaynes-Cummings ladder.

    Amplitudes with photon number above ``n_max`` are taken to be zero.
    """
    a = np.asarray(state.a, dtype=complex)
    b = np.asarray(state.b, dtype=complex)
    n = np.arange(state.n_max + 1)
    slow = np.exp(1j * params.delta * t)
    fast = np.exp(1j * params.big_delta * t)
    da = np.zeros_like(a)
    db = np.zeros_like(b)
    da[1:] += np.sqrt(n[1:]) * np.conj(slow) * b[:-1]
    da[:-1] -= np.sqrt(n[1:]) * np.conj(fast) * b[1:]
    db[1:] += np.sqrt(n[1:]) * fast * a[:-1]
    db[:-1] -= np.sqrt(n[1:]) * slow * a[1:]
    return LadderState(state.n_max, da, db)


def _raise_on_status(status: int, t_last: float) -> None:
    if status == _kernels.STEP_UNDERFLOW:
        raise IntegrationError("step size underflow", t_last)
    if status == _kernels.MAX_STEPS:
        raise IntegrationError("maximum number of steps exceeded", t_last)
    if status == _kernels.BLOWUP:
        raise IntegrationError("solution blew up", t_last)


def _check_initial(y0: np.ndarray) -> None:
    if not np.all(np.isfinite(y0)):
        raise ParameterError("initial state must be finite")


def integrate(rhs: Callable, initial, grid: TimeGrid,
              config: IntegratorConfig = IntegratorConfig(),
              params: Optional[ModelParams] = None) -> Trajectory:
    """Integrate ``rhs(t, state, params)`` from ``grid.t_start`` and sample on ``grid``.

    ``rhs`` is :func:`rabi_rhs`, :func:`jc_rhs` or any callable with the same
    calling convention taking and returning :class:`AmplitudePair` or
    :class:`LadderState`. The two model right-hand sides are dispatched to
    the compiled kernel; anything else runs on the Python driver.
    """
    if params is None:
        raise ParameterError("integrate needs the model parameters")
    validate_params(params)
    times = grid.times
    h_max = config.resolved_max_step(params.big_delta)
    h_init = config.initial_step or 0.0
    kern = _kernels.backend
    tol = (config.rel_tol, config.abs_tol, h_max, h_init, config.min_step, config.max_steps)

    if isinstance(initial, LadderState):
        n_max = initial.n_max
        y0 = initial.to_vector()
        _check_initial(y0)
        if rhs is jc_rhs:
            ys, status, t_last, _, _ = kern.solve_jc(params.delta, params.big_delta, n_max,
                                                     y0, times, *tol)
        else:
            def f(t, y):
                return rhs(t, LadderState.from_vector(y), params).to_vector()
            ys, status, t_last, _, _ = _kernels.python_backend.dopri5(
                f, y0, times, *tol[:5], max_steps=config.max_steps)
        _raise_on_status(status, t_last)
        m = n_max + 1
        return Trajectory(grid, ys[:, :m], ys[:, m:], MethodTag(Method.NUMERIC), params,
                          channels=list(range(m)))

    y0 = np.array([initial.a, initial.b], dtype=complex)
    _check_initial(y0)
    if rhs is rabi_rhs:
        ys, status, t_last, _, _ = kern.solve_rabi(params.delta, params.big_delta, y0, times, *tol)
    else:
        def f(t, y):
            d = rhs(t, AmplitudePair(y[0], y[1]), params)
            return np.array([d.a, d.b], dtype=complex)
        ys, status, t_last, _, _ = _kernels.python_backend.dopri5(
            f, y0, times, *tol[:5], max_steps=config.max_steps)
    _raise_on_status(status, t_last)
    return Trajectory(grid, ys[:, 0], ys[:, 1], MethodTag(Method.NUMERIC), params)


def solve_rabi(params: ModelParams, grid: TimeGrid,
               config: IntegratorConfig = IntegratorConfig(),
               initial: AmplitudePair = AmplitudePair(1.0, 0.0)) -> Trajectory:
    """Numeric Rabi trajectory, by default from the ground state."""
    if params.model is not Model.RABI:
        params = replace(params, model=Model.RABI)
    return integrate(rabi_rhs, initial, grid, config, params)


def solve_jc(params: ModelParams, grid: TimeGrid,
             config: IntegratorConfig = IntegratorConfig(),
             n_max: int = DEFAULT_N_MAX,
             initial: Optional[LadderState] = None) -> Trajectory:
    """Numeric truncated-ladder trajectory, by default from ``a_1(0) = 1``."""
    if params.model is not Model.JAYNES_CUMMINGS:
        params = replace(params, model=Model.JAYNES_CUMMINGS)
    if initial is None:
        initial = LadderState.single_photon(n_max)
    return integrate(jc_rhs, initial, grid, config, params)


def norm_drift(traj: Trajectory) -> float:
    """Largest deviation of the total probability from one over the grid."""
    return float(np.max(np.abs(traj.total_probability - 1.0)))


def propagate(rhs: Callable, initial, tau_end: float, params: ModelParams,
              config: IntegratorConfig = IntegratorConfig()):
    """State at ``tau_end`` starting from ``initial`` at time zero."""
    if tau_end < 0:
        raise ParameterError("tau_end must be non-negative")
    if tau_end == 0:
        return initial
    traj = integrate(rhs, initial, TimeGrid(0.0, float(tau_end), 2), config, params)
    return traj.states[-1]
