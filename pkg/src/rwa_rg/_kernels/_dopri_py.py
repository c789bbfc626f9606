"""Pure-Python Dormand-Prince 5(4) driver with dense output.

Mirrors ``_dopri.pyx`` step for step, so both backends agree to rounding.
Used when the compiled extension is unavailable and for arbitrary
right-hand sides passed to :func:`rwa_rg.integrator.integrate`.
"""

import math

import numpy as np

# Status codes shared with the compiled backend.
OK = 0
STEP_UNDERFLOW = 1
BLOWUP = 2
MAX_STEPS = 3

C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
B = A[6] + (0.0,)
# Fifth-order minus embedded fourth-order weights.
E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)
# Shampine's quartic dense output; row i multiplies stage i by
# (theta, theta**2, theta**3, theta**4).
P = (
    (1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432),
    (0.0, 0.0, 0.0, 0.0),
    (0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799),
    (0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072),
    (0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632),
    (0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844),
    (0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423),
)

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 10.0


def _rms(err, y_old, y_new, rtol, atol):
    scale = atol + rtol * np.maximum(np.abs(y_old), np.abs(y_new))
    return math.sqrt(float(np.mean((np.abs(err) / scale) ** 2)))


def initial_step(f, t0, y0, f0, rtol, atol, h_max):
    """Hairer-Norsett-Wanner starting step estimate for a 5th-order method."""
    scale = atol + rtol * np.abs(y0)
    d0 = math.sqrt(float(np.mean((np.abs(y0) / scale) ** 2)))
    d1 = math.sqrt(float(np.mean((np.abs(f0) / scale) ** 2)))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, h_max)
    f1 = f(t0 + h0, y0 + h0 * f0)
    d2 = math.sqrt(float(np.mean((np.abs(f1 - f0) / scale) ** 2))) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1, h_max)


def dopri5(f, y0, t_eval, rtol, atol, h_max, h_init=0.0, h_min=0.0, blowup=math.inf,
           max_steps=50_000_000):
    """Integrate ``y' = f(t, y)`` and sample at ``t_eval`` (sorted, ``t_eval[0]`` is t0).

    Returns ``(ys, status, t_last, n_filled, n_steps)``. On failure the rows
    past ``n_filled`` are left as NaN and ``t_last`` is the last accepted time.
    """
    t_eval = np.asarray(t_eval, dtype=float)
    y = np.array(y0, dtype=complex)
    n = len(t_eval)
    ys = np.full((n, y.size), np.nan + 0j, dtype=complex)
    ys[0] = y
    t = float(t_eval[0])
    t_end = float(t_eval[-1])
    idx = 1
    while idx < n and t_eval[idx] <= t:
        ys[idx] = y
        idx += 1
    if idx == n:
        return ys, OK, t, n, 0

    k = [None] * 7
    k[0] = f(t, y)
    h = h_init if h_init > 0 else initial_step(f, t, y, k[0], rtol, atol, h_max)
    h = min(h, h_max)
    status = OK
    steps = 0
    rejected = False
    while idx < n:
        if steps >= max_steps:
            status = MAX_STEPS
            break
        last = t + h >= t_end
        if last:
            h = t_end - t
        for s in range(1, 7):
            acc = y.copy()
            for j, a in enumerate(A[s]):
                if a != 0.0:
                    acc += (h * a) * k[j]
            if s == 6:
                y_new = acc
            k[s] = f(t + C[s] * h, acc)
        err = h * sum(e * kk for e, kk in zip(E, k) if e != 0.0)
        err_norm = _rms(err, y, y_new, rtol, atol)
        steps += 1
        if err_norm <= 1.0:
            t_new = t_end if last else t + h
            while idx < n and t_eval[idx] <= t_new:
                if t_eval[idx] == t_new:
                    ys[idx] = y_new
                else:
                    th = (t_eval[idx] - t) / h
                    powers = (th, th * th, th ** 3, th ** 4)
                    acc = y.copy()
                    for i in range(7):
                        q = sum(p * w for p, w in zip(P[i], powers))
                        if q != 0.0:
                            acc += (h * q) * k[i]
                    ys[idx] = acc
                idx += 1
            t, y = t_new, y_new
            k[0] = k[6]
            if float(np.max(np.abs(y))) > blowup:
                status = BLOWUP
                break
            if err_norm == 0.0:
                factor = MAX_FACTOR
            else:
                factor = min(MAX_FACTOR, SAFETY * err_norm ** -0.2)
            if rejected:
                factor = min(1.0, factor)
            rejected = False
            h = min(h * factor, h_max)
        else:
            h *= max(MIN_FACTOR, SAFETY * err_norm ** -0.2)
            rejected = True
        if idx < n and h <= max(h_min, 16 * np.spacing(max(abs(t), 1.0))):
            status = STEP_UNDERFLOW
            break
    return ys, status, t, idx, steps


def rabi_rhs_vec(delta, big_delta):
    def f(t, y):
        slow = complex(math.cos(delta * t), math.sin(delta * t))
        fast = complex(math.cos(big_delta * t), math.sin(big_delta * t))
        a, b = y[0], y[1]
        return np.array([
            -1j * (slow.conjugate() + fast.conjugate()) * b,
            -1j * (slow + fast) * a,
        ])
    return f


def jc_rhs_vec(delta, big_delta, n_max):
    m = n_max + 1
    sq = np.sqrt(np.arange(m, dtype=float))
    sq1 = np.sqrt(np.arange(1, m + 1, dtype=float))

    def f(t, y):
        a, b = y[:m], y[m:]
        slow = complex(math.cos(delta * t), math.sin(delta * t))
        fast = complex(math.cos(big_delta * t), math.sin(big_delta * t))
        dy = np.zeros(2 * m, dtype=complex)
        da, db = dy[:m], dy[m:]
        da[1:] += sq[1:] * slow.conjugate() * b[:-1]
        da[:-1] -= sq1[:-1] * fast.conjugate() * b[1:]
        db[1:] += sq[1:] * fast * a[:-1]
        db[:-1] -= sq1[:-1] * slow * a[1:]
        return dy
    return f


def riccati_rhs_vec(big_delta):
    def f(t, y):
        u = y[0]
        fast = complex(math.cos(big_delta * t), math.sin(big_delta * t))
        return np.array([1j * ((1 + fast.conjugate()) * u * u - (1 + fast))])
    return f


def solve_rabi(delta, big_delta, y0, t_eval, rtol, atol, h_max, h_init=0.0, h_min=0.0,
               max_steps=50_000_000):
    return dopri5(rabi_rhs_vec(delta, big_delta), y0, t_eval, rtol, atol, h_max,
                  h_init, h_min, max_steps=max_steps)


def solve_jc(delta, big_delta, n_max, y0, t_eval, rtol, atol, h_max, h_init=0.0, h_min=0.0,
             max_steps=50_000_000):
    return dopri5(jc_rhs_vec(delta, big_delta, n_max), y0, t_eval, rtol, atol, h_max,
                  h_init, h_min, max_steps=max_steps)


def solve_riccati(big_delta, u0, t_eval, rtol, atol, h_max, blowup, h_init=0.0, h_min=0.0,
                  max_steps=50_000_000):
    return dopri5(riccati_rhs_vec(big_delta), [u0], t_eval, rtol, atol, h_max,
                  h_init, h_min, blowup=blowup, max_steps=max_steps)
