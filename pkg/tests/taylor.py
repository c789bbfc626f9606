"""Taylor coefficients in epsilon by the trapezoidal rule on a circle.

For ``f`` analytic in a disc around zero, sampling ``f(r e^{i theta})`` at
``n`` equally spaced angles gives the coefficients to near machine precision
with none of the cancellation of real finite differences.
"""

import numpy as np


def taylor_coefficients(f, order: int, radius: float = 0.25, n: int = 64):
    """Coefficients ``c_0..c_order`` of ``f(eps) = sum c_k eps**k``.

    ``f`` takes a complex epsilon and returns an array (or scalar).
    """
    theta = 2 * np.pi * np.arange(n) / n
    z = radius * np.exp(1j * theta)
    vals = np.array([np.asarray(f(zz), dtype=complex) for zz in z])
    coeffs = []
    for k in range(order + 1):
        w = np.exp(-1j * k * theta).reshape((n,) + (1,) * (vals.ndim - 1))
        coeffs.append((w * vals).mean(axis=0) / radius ** k)
    return coeffs
