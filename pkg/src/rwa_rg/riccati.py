"""Riccati form of the resonant Rabi model for the ratio ``u = b / a``.

``u`` has poles wherever ``a`` vanishes; near ``tau = pi/2 + k pi`` for the
rotating wave solution. Closed forms raise :class:`PoleError` within
:data:`POLE_GUARD` of such a pole, and the numeric solver stops and flags the
remaining samples once ``|u|`` exceeds :data:`BLOWUP`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import ParameterError, TimeGrid
from .integrator import IntegrationError, IntegratorConfig

POLE_GUARD = 1e-6
BLOWUP = 1e6


class PoleError(ArithmeticError):
    """Evaluation too close to a pole of ``u``."""

    def __init__(self, t: float, pole: float):
        super().__init__(f"t = {t!r} is within {POLE_GUARD:g} of the pole at {pole!r}")
        self.t = t
        self.pole = pole


@dataclass(frozen=True)
class RiccatiState:
    u: complex
    valid: bool = True


def nearest_pole(t):
    """Nearest point of the form ``pi/2 + k pi``."""
    return math.pi / 2 + np.round((np.asarray(t, dtype=float) - math.pi / 2) / math.pi) * math.pi


def _pole_mask(t):
    t = np.asarray(t, dtype=float)
    return np.abs(t - nearest_pole(t)) < POLE_GUARD


def _guard(t, on_pole: str):
    mask = _pole_mask(t)
    if on_pole == "raise" and np.any(mask):
        bad = float(np.asarray(t, dtype=float)[mask].flat[0]) if np.ndim(t) else float(t)
        raise PoleError(bad, float(nearest_pole(bad)))
    if on_pole not in ("raise", "nan"):
        raise ParameterError("on_pole must be 'raise' or 'nan'")
    return mask


def u0(t, on_pole: str = "raise"):
    """Rotating wave ratio ``-i tan t``, i.e. ``(1 - e^{2it}) / (1 + e^{2it})``."""
    mask = _guard(t, on_pole)
    out = -1j * np.tan(np.asarray(t, dtype=float))
    return np.where(mask, np.nan, out) if np.ndim(out) else (complex("nan") if mask else complex(out))


def u0_dot(t):
    """Analytic derivative of :func:`u0`, ``-i sec**2 t``."""
    return -1j / np.cos(np.asarray(t, dtype=float)) ** 2


def riccati_rhs(t: float, u: complex, epsilon: float) -> complex:
    """``du/dt`` from ``i u' + (1 + e^{-it/eps}) u**2 - (1 + e^{it/eps}) = 0``."""
    fast = np.exp(1j * t / epsilon)
    return 1j * ((1 + np.conj(fast)) * u * u - (1 + fast))


def renorm_u(t, epsilon, on_pole: str = "raise"):
    """Second-order renormalized expansion of ``u``.

    ``t`` is the physical dimensionless time; ``1/epsilon`` is the
    counter-rotating frequency. The rational factors are evaluated in
    tangent form: with ``c = cos t``,

    * ``(1 + 2 e^{2it(1+eps/2)} + e^{4it}) / (1 + e^{2it})**2 = (cos 2t + e^{i eps t}) / (2 c**2)``
    * ``3 (1 - e^{4it}) / (2 (1 + e^{2it})**2) = -(3i/2) tan t``
    """
    mask = _guard(t, on_pole)
    t = np.asarray(t, dtype=float)
    with np.errstate(all="ignore"):
        u = -1j * np.tan(t)
        du = u0_dot(t)
        if epsilon == 0:
            out = u
        else:
            fast = np.exp(1j * t / epsilon)
            cos2 = np.cos(t) ** 2
            first = -u * u / fast - fast + (np.cos(2 * t) + np.exp(1j * epsilon * t)) / (2 * cos2)
            second = (2j * u * (du - 1j * u * u + 1j) / fast - 2 * u * fast + u ** 3 / fast ** 2
                      - 1.5j * np.tan(t))
            out = u + epsilon * first + epsilon ** 2 * second
    if np.ndim(out):
        return np.where(mask, np.nan, out)
    return complex("nan") if mask else complex(out)


def renorm_u_exponential(t, epsilon):
    """:func:`renorm_u` written with complex exponentials, for cross-checks."""
    t = np.asarray(t, dtype=float)
    E = np.exp
    u = (1 - E(2j * t)) / (1 + E(2j * t))
    du = u0_dot(t)
    first = (-u ** 2 * E(-1j * t / epsilon) - E(1j * t / epsilon)
             + (1 + 2 * E(2j * t * (1 + epsilon / 2)) + E(4j * t)) / (1 + E(2j * t)) ** 2)
    second = (2j * u * (du - 1j * u ** 2 + 1j) * E(-1j * t / epsilon) - 2 * u * E(1j * t / epsilon)
              + u ** 3 * E(-2j * t / epsilon) + 3 * (1 - E(4j * t)) / (2 * (1 + E(2j * t)) ** 2))
    return u + epsilon * first + epsilon ** 2 * second


def probabilities_from_u(u):
    """``(|a|**2, |b|**2)`` from the ratio ``u = b/a``; they sum to exactly one.

    The smaller probability is computed directly and the larger as its
    complement, which keeps both accurate and the sum exact in floating point.
    """
    m = np.abs(np.asarray(u)) ** 2
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        small_a = 1.0 / (1.0 + m)
        small_b = 1.0 / (1.0 + 1.0 / m)
    pa = np.where(m >= 1.0, small_a, 1.0 - small_b)
    pb = np.where(m >= 1.0, 1.0 - small_a, small_b)
    if np.ndim(pa) == 0:
        return float(pa), float(pb)
    return pa, pb


def integrate_riccati(epsilon: float, grid: TimeGrid,
                      config: IntegratorConfig = IntegratorConfig(),
                      u_init: complex = 0.0, blowup: float = BLOWUP) -> list[RiccatiState]:
    """Integrate the Riccati equation for ``u`` on ``grid``.

    Integration halts once ``|u|`` exceeds ``blowup``, which happens on the
    approach to a pole; that sample and all later ones come back with
    ``valid=False`` and ``u = nan``. With the counter-rotating terms present
    ``a`` only gets within about ``epsilon`` of zero, so ``|u|`` peaks near
    ``1/epsilon`` and the default threshold is reached only for tiny epsilon.
    """
    if not epsilon > 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon!r}")
    big_delta = 1.0 / epsilon
    ys, status, t_last, n_filled, _ = _kernels.backend.solve_riccati(
        big_delta, complex(u_init), grid.times, config.rel_tol, config.abs_tol,
        config.resolved_max_step(big_delta), blowup, config.initial_step or 0.0, config.min_step,
        config.max_steps)
    if status not in (_kernels.OK, _kernels.BLOWUP):
        raise IntegrationError("Riccati integration failed", t_last)
    u = ys[:, 0]
    states = []
    for i in range(grid.n_samples):
        ok = i < n_filled and np.isfinite(u[i]) and abs(u[i]) <= blowup
        states.append(RiccatiState(complex(u[i]) if ok else complex("nan"), bool(ok)))
    return states


def riccati_amplitudes(u):
    """Amplitudes consistent with ``u`` in the gauge where ``a`` is real and non-negative."""
    pa, _ = probabilities_from_u(u)
    a = np.sqrt(pa) + 0j
    return a, a * np.asarray(u)
