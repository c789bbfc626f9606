"""Closed forms for the resonant Jaynes-Cummings model with one initial photon.

The atom starts in its ground state with one photon in the field
(``a_1(0) = 1``). Only the ``a_1`` channel has a renormalized expansion;
other channels come from the numeric ladder.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .core import (
    STRONG_COUPLING_EPSILON,
    ModelParams,
    Model,
    ParameterError,
    StrongCouplingWarning,
    TimeGrid,
    TwoTimes,
    check_two_times,
    map_times,
)
from .integrator import DEFAULT_N_MAX, IntegratorConfig, solve_jc

SQRT3 = np.sqrt(3.0)

# Six-digit convergence target for the ladder truncation and the largest
# cutoff tried before giving up.
TRUNCATION_TOL = 1e-6
MAX_N_MAX = 120


def rwa_jc(t):
    """Rotating wave solution ``(a_1, b_0) = (cos t, -sin t)``."""
    t = np.asarray(t, dtype=float)
    return np.cos(t) + 0j, -np.sin(t) + 0j


def renorm_group_A2(t2, epsilon):
    """Renormalized group multiplying ``2 eps**2 exp(-i t1)``: ``cos(sqrt3 t2) exp(i eps t2)``."""
    t2 = np.asarray(t2)
    return np.cos(SQRT3 * t2) * np.exp(1j * epsilon * t2)


def renorm_group_A1(t2, epsilon):
    """Renormalized slow group, a weighted pair of counter-propagating phases.

    Reduces to ``cos t2`` at ``epsilon = 0``. The weights ``(1 +- eps)/2``
    sum to one, so the modulus never exceeds one for ``0 <= eps <= 1``.
    """
    t2 = np.asarray(t2)
    e = epsilon
    return ((1 + e) / 2 * np.exp(1j * t2 * (1 + e - e * e / 2))
            + (1 - e) / 2 * np.exp(-1j * t2 * (1 - e - e * e / 2)))


def _renormalized_a1(t1, t2, epsilon):
    e = epsilon
    fast = np.exp(-1j * np.asarray(t1))
    return (renorm_group_A1(t2, e)
            + 2 * e * e * fast * renorm_group_A2(t2, e)
            - 2 * e * e * np.cos(t2)
            + 1j * e ** 3 * (2 * SQRT3 * fast * np.sin(SQRT3 * np.asarray(t2)) + 2.5 * np.sin(t2)))


def renormalized_a1(times: TwoTimes, epsilon: float):
    """Third-order renormalized multi-scale expansion of ``a_1``."""
    if not epsilon >= 0:
        raise ParameterError(f"epsilon must be non-negative, got {epsilon!r}")
    if epsilon > 0:
        check_two_times(times, epsilon)
    return _renormalized_a1(np.asarray(times.t1, float), np.asarray(times.t2, float), epsilon)


def a1_expansion_terms(t1, t2):
    """Two-scale coefficients of ``a_1`` at orders 0 to 3, secular terms included."""
    t1 = np.asarray(t1, dtype=float)
    t2 = np.asarray(t2, dtype=float)
    c, s = np.cos(t2), np.sin(t2)
    c3, s3 = np.cos(SQRT3 * t2), np.sin(SQRT3 * t2)
    fast = np.exp(-1j * t1)
    return (
        c + 0j,
        1j * (t2 * c + s),
        0.5 * (-(4 + t2 ** 2) * c - t2 * s) + 2 * fast * c3,
        -1j / 6 * ((3 * t2 + t2 ** 3) * c - 15 * s) + 2j * fast * (t2 * c3 + SQRT3 * s3),
    )


@dataclass(frozen=True)
class BreakdownResult:
    epsilon: float
    max_error: float
    time_of_max: float
    n_max: int
    truncation_error: float
    converged: bool


def converged_ladder(params: ModelParams, grid: TimeGrid,
                     config: IntegratorConfig = IntegratorConfig(),
                     n_max: int = DEFAULT_N_MAX,
                     tol: float = TRUNCATION_TOL):
    """Numeric ladder with a cutoff whose ``|a_1|**2`` is converged to ``tol``.

    Starts at ``n_max`` and doubles the cutoff until the trajectory agrees
    with the doubled one, stopping at :data:`MAX_N_MAX`. Returns
    ``(trajectory, n_max, truncation_error, converged)``.
    """
    traj = solve_jc(params, grid, config, n_max)
    diff = np.inf
    while True:
        bigger = min(2 * n_max, MAX_N_MAX)
        if bigger <= n_max:
            return traj, n_max, diff, False
        ref = solve_jc(params, grid, config, bigger)
        diff = float(np.max(np.abs(traj.prob_a[:, 1] - ref.prob_a[:, 1])))
        if diff < tol:
            return traj, n_max, diff, True
        traj, n_max = ref, bigger


def breakdown_probe(epsilon: float, tau_max: float, n_samples: int = 2000,
                    config: IntegratorConfig = IntegratorConfig(),
                    n_max: int = DEFAULT_N_MAX) -> BreakdownResult:
    """Largest ``| |a_1^R|**2 - |a_1,num|**2 |`` over ``[0, tau_max]``."""
    if not epsilon > 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon!r}")
    params = ModelParams.from_epsilon(epsilon, model=Model.JAYNES_CUMMINGS)
    grid = TimeGrid.uniform(tau_max, n_samples)
    with warnings.catch_warnings():
        if epsilon >= STRONG_COUPLING_EPSILON:
            warnings.simplefilter("ignore", StrongCouplingWarning)
        traj, used, trunc, ok = converged_ladder(params, grid, config, n_max)
    times = map_times(grid.times, epsilon)
    err = np.abs(np.abs(renormalized_a1(times, epsilon)) ** 2 - traj.prob_a[:, 1])
    i = int(np.argmax(err))
    return BreakdownResult(epsilon, float(err[i]), float(grid.times[i]), used, trunc, ok)
