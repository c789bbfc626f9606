"""Closed-form approximations to the resonant Rabi model.

Initial condition throughout: ``a(0) = 1``, ``b(0) = 0``. Functions
broadcast over numpy arrays of times.

Time conventions:

* :func:`rwa` takes the physical dimensionless time ``tau``.
* :func:`single_scale` takes the stretched time ``t = tau / epsilon``.
* :func:`two_scale` and :func:`renormalized` take :class:`TwoTimes`
  ``(t1, t2) = (tau / epsilon, tau)``, usually built by :func:`map_times`.
"""

from __future__ import annotations

import numpy as np

from .core import (
    AmplitudePair,
    ParameterError,
    TwoTimes,
    UnsupportedOrderError,
    check_two_times,
)

MAX_ORDER = 2


def _check_order(order: int) -> None:
    if order not in (0, 1, 2):
        raise UnsupportedOrderError(f"order must be 0, 1 or 2, got {order!r}")


def _check_epsilon(epsilon: float) -> None:
    if not epsilon >= 0:
        raise ParameterError(f"epsilon must be non-negative, got {epsilon!r}")


def rwa(t) -> AmplitudePair:
    """Rotating wave solution ``a = cos t``, ``b = -i sin t``."""
    t = np.asarray(t, dtype=float)
    return AmplitudePair(np.cos(t) + 0j, -1j * np.sin(t))


# Single-scale terms. Both a_1 and b_0, b_2 vanish identically.

def single_scale_a2(t):
    return np.exp(1j * t) - 1j * t * np.exp(-1j * t) - 0.5 * t * t - 1.0


def single_scale_b1(t):
    return -1j * t - np.exp(1j * t) + 1.0


def single_scale(t, epsilon: float, order: int = 2) -> AmplitudePair:
    """Naive power series in epsilon, evaluated at stretched time ``t``.

    The order-2 ``a`` coefficient contains ``-t**2 / 2`` and ``b``'s
    order-1 coefficient contains ``-i t``; both grow without bound.
    """
    _check_order(order)
    _check_epsilon(epsilon)
    t = np.asarray(t, dtype=float)
    a = np.ones_like(t, dtype=complex)
    b = np.zeros_like(t, dtype=complex)
    if order >= 1:
        b = b + epsilon * single_scale_b1(t)
    if order >= 2:
        a = a + epsilon ** 2 * single_scale_a2(t)
    return AmplitudePair(a, b)


def two_scale_terms(t1, t2):
    """Coefficients ``(a_k, b_k)`` for ``k = 0, 1, 2`` of the two-scale expansion."""
    c, s = np.cos(t2), np.sin(t2)
    e_p, e_m = np.exp(1j * t1), np.exp(-1j * t1)
    a = (c + 0j, -1j * s * e_m, 0.5 * t2 * s - c + c * e_p)
    b = (-1j * s, c - c * e_p, 0.5j * (t2 * c + s) + 1j * s * (e_p - e_m))
    return a, b


def _sum_orders(terms, epsilon, order):
    out = terms[0]
    for k in range(1, order + 1):
        out = out + epsilon ** k * terms[k]
    return out


def two_scale(times: TwoTimes, epsilon: float, order: int = 2) -> AmplitudePair:
    """Two-scale expansion truncated after ``epsilon**order``.

    Order 0 is the rotating wave solution in ``t2``. At order 2 the ``a``
    channel carries the secular term ``(eps**2 / 2) t2 sin t2``.
    """
    _check_order(order)
    _check_epsilon(epsilon)
    if epsilon == 0:
        return rwa(times.t2)
    check_two_times(times, epsilon)
    a_terms, b_terms = two_scale_terms(np.asarray(times.t1, float), np.asarray(times.t2, float))
    return AmplitudePair(_sum_orders(a_terms, epsilon, order),
                         _sum_orders(b_terms, epsilon, order))


def renorm_group_A(sign: int, t2, epsilon):
    """Renormalized half-amplitude ``exp(+-i t2 (1 - eps**2/2)) / 2``.

    The two signs sum to the renormalized secular group
    ``cos((1 - eps**2/2) t2)``; to second order in epsilon this equals
    ``cos t2 + (eps**2/2) t2 sin t2``.
    """
    if sign not in (1, -1):
        raise ParameterError("sign must be +1 or -1")
    return 0.5 * np.exp(sign * 1j * np.asarray(t2) * (1 - epsilon * epsilon / 2))


def _renormalized_a(t1, t2, epsilon):
    c, s = np.cos(t2), np.sin(t2)
    group = renorm_group_A(1, t2, epsilon) + renorm_group_A(-1, t2, epsilon)
    return (group - 1j * epsilon * s * np.exp(-1j * t1)
            + epsilon ** 2 * (-c + c * np.exp(1j * t1)))


def _renormalized_b(t1, t2, epsilon):
    # Same grouping applied to b: -i sin t2 + (i eps^2/2) t2 cos t2 -> -i sin((1 - eps^2/2) t2).
    c, s = np.cos(t2), np.sin(t2)
    e_p, e_m = np.exp(1j * t1), np.exp(-1j * t1)
    group = -1j * np.sin((1 - epsilon * epsilon / 2) * np.asarray(t2))
    return (group + epsilon * (c - c * e_p)
            + epsilon ** 2 * (0.5j * s + 1j * s * (e_p - e_m)))


def renormalized(times: TwoTimes, epsilon: float) -> AmplitudePair:
    """Renormalized multi-scale expansion, accurate to ``O(eps**3)`` and free of secular terms.

    The ``b`` channel applies the grouping used for ``a`` to the two-scale
    ``b`` series: the secular ``(i/2) t2 cos t2`` piece is absorbed into
    ``-i sin((1 - eps**2/2) t2)`` and the rest of the second-order term is
    kept as is.
    """
    _check_epsilon(epsilon)
    if epsilon == 0:
        return rwa(times.t2)
    check_two_times(times, epsilon)
    t1 = np.asarray(times.t1, float)
    t2 = np.asarray(times.t2, float)
    return AmplitudePair(_renormalized_a(t1, t2, epsilon), _renormalized_b(t1, t2, epsilon))
