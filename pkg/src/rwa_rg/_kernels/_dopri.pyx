# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Dormand-Prince 5(4) kernels for the Rabi, Jaynes-Cummings and
Riccati right-hand sides.

Same algorithm, constants and step control as ``_dopri_py``; the GIL is
released for the whole integration so sweeps can run in threads.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, cos, sin, fabs, pow, nextafter, INFINITY
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef extern from "<complex.h>" nogil:
    double cabs(double complex)

cdef enum:
    OK = 0
    STEP_UNDERFLOW = 1
    BLOWUP = 2
    MAX_STEPS = 3

ctypedef void (*rhs_t)(double t, const double complex* y, double complex* dy,
                       int n, const double* par) noexcept nogil

cdef double C[7]
cdef double A[7][6]
cdef double E[7]
cdef double P[7][4]

C[:] = [0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0]
A[0][:] = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
A[1][:] = [1.0 / 5, 0.0, 0.0, 0.0, 0.0, 0.0]
A[2][:] = [3.0 / 40, 9.0 / 40, 0.0, 0.0, 0.0, 0.0]
A[3][:] = [44.0 / 45, -56.0 / 15, 32.0 / 9, 0.0, 0.0, 0.0]
A[4][:] = [19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0.0, 0.0]
A[5][:] = [9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0.0]
A[6][:] = [35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84]
E[:] = [71.0 / 57600, 0.0, -71.0 / 16695, 71.0 / 1920, -17253.0 / 339200, 22.0 / 525, -1.0 / 40]
P[0][:] = [1.0, -8048581381.0 / 2820520608, 8663915743.0 / 2820520608, -12715105075.0 / 11282082432]
P[1][:] = [0.0, 0.0, 0.0, 0.0]
P[2][:] = [0.0, 131558114200.0 / 32700410799, -68118460800.0 / 10900136933, 87487479700.0 / 32700410799]
P[3][:] = [0.0, -1754552775.0 / 470086768, 14199869525.0 / 1410260304, -10690763975.0 / 1880347072]
P[4][:] = [0.0, 127303824393.0 / 49829197408, -318862633887.0 / 49829197408, 701980252875.0 / 199316789632]
P[5][:] = [0.0, -282668133.0 / 205662961, 2019193451.0 / 616988883, -1453857185.0 / 822651844]
P[6][:] = [0.0, 40617522.0 / 29380423, -110615467.0 / 29380423, 69997945.0 / 29380423]

cdef double SAFETY = 0.9
cdef double MIN_FACTOR = 0.2
cdef double MAX_FACTOR = 10.0


cdef inline double complex _phase(double x) noexcept nogil:
    return cos(x) + 1j * sin(x)


cdef inline double complex _conj(double complex z) noexcept nogil:
    return z.real - 1j * z.imag


cdef void _rabi(double t, const double complex* y, double complex* dy,
                int n, const double* par) noexcept nogil:
    # par = (delta, big_delta)
    cdef double complex slow = _phase(par[0] * t)
    cdef double complex fast = _phase(par[1] * t)
    dy[0] = -1j * (_conj(slow) + _conj(fast)) * y[1]
    dy[1] = -1j * (slow + fast) * y[0]


cdef void _jc(double t, const double complex* y, double complex* dy,
              int n, const double* par) noexcept nogil:
    # par = (delta, big_delta, sqrt(0), sqrt(1), ..., sqrt(m)); y = (a_0..a_{m-1}, b_0..b_{m-1})
    cdef int m = n // 2
    cdef const double* sq = par + 2
    cdef double complex slow = _phase(par[0] * t)
    cdef double complex fast = _phase(par[1] * t)
    cdef double complex slow_c = _conj(slow)
    cdef double complex fast_c = _conj(fast)
    cdef const double complex* a = y
    cdef const double complex* b = y + m
    cdef int k
    for k in range(m):
        dy[k] = 0.0
        dy[m + k] = 0.0
    for k in range(1, m):
        dy[k] = dy[k] + sq[k] * slow_c * b[k - 1]
        dy[m + k] = dy[m + k] + sq[k] * fast * a[k - 1]
    for k in range(m - 1):
        dy[k] = dy[k] - sq[k + 1] * fast_c * b[k + 1]
        dy[m + k] = dy[m + k] - sq[k + 1] * slow * a[k + 1]


cdef void _riccati(double t, const double complex* y, double complex* dy,
                   int n, const double* par) noexcept nogil:
    # par = (big_delta,)
    cdef double complex fast = _phase(par[0] * t)
    cdef double complex u = y[0]
    dy[0] = 1j * ((1 + _conj(fast)) * u * u - (1 + fast))


cdef double _rms(const double complex* err, const double complex* y_old,
                 const double complex* y_new, int n, double rtol, double atol) noexcept nogil:
    cdef double acc = 0.0, sc, r, ao, an
    cdef int i
    for i in range(n):
        ao = cabs(y_old[i])
        an = cabs(y_new[i])
        sc = atol + rtol * (ao if ao > an else an)
        r = cabs(err[i]) / sc
        acc += r * r
    return sqrt(acc / n)


cdef double _initial_step(rhs_t f, const double* par, double t0, const double complex* y0,
                          const double complex* f0, int n, double rtol, double atol,
                          double h_max, double complex* tmp, double complex* f1) noexcept nogil:
    cdef double d0 = 0.0, d1 = 0.0, d2 = 0.0, sc, h0, h1, r, dm
    cdef int i
    for i in range(n):
        sc = atol + rtol * cabs(y0[i])
        r = cabs(y0[i]) / sc
        d0 += r * r
        r = cabs(f0[i]) / sc
        d1 += r * r
    d0 = sqrt(d0 / n)
    d1 = sqrt(d1 / n)
    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6
    else:
        h0 = 0.01 * d0 / d1
    if h0 > h_max:
        h0 = h_max
    for i in range(n):
        tmp[i] = y0[i] + h0 * f0[i]
    f(t0 + h0, tmp, f1, n, par)
    for i in range(n):
        sc = atol + rtol * cabs(y0[i])
        r = cabs(f1[i] - f0[i]) / sc
        d2 += r * r
    d2 = sqrt(d2 / n) / h0
    dm = d1 if d1 > d2 else d2
    if dm <= 1e-15:
        h1 = 1e-6 if 1e-6 > h0 * 1e-3 else h0 * 1e-3
    else:
        h1 = pow(0.01 / dm, 1.0 / 5)
    r = 100 * h0
    if h1 < r:
        r = h1
    if h_max < r:
        r = h_max
    return r


cdef int _dopri5(rhs_t f, const double* par, int n, double complex* y,
                 const double* t_eval, int n_eval, double complex* out,
                 double rtol, double atol, double h_max, double h_init, double h_min,
                 double blowup, long max_steps,
                 double* t_last, int* n_filled, long* n_steps) noexcept nogil:
    cdef double complex* work = <double complex*> malloc(10 * n * sizeof(double complex))
    if work == NULL:
        return -1
    cdef double complex* k[7]
    cdef int s, j, i, idx
    for s in range(7):
        k[s] = work + s * n
    cdef double complex* acc = work + 7 * n
    cdef double complex* y_new = work + 8 * n
    cdef double complex* err = work + 9 * n
    cdef double t = t_eval[0], t_end = t_eval[n_eval - 1], t_new, h, err_norm, factor
    cdef double th, q, ymax, floor_h
    cdef double pw[4]
    cdef double complex* swap
    cdef int status = OK, last, rejected = 0
    cdef long steps = 0

    for i in range(n):
        out[i] = y[i]
    idx = 1
    while idx < n_eval and t_eval[idx] <= t:
        for i in range(n):
            out[idx * n + i] = y[i]
        idx += 1
    if idx == n_eval:
        free(work)
        t_last[0] = t
        n_filled[0] = n_eval
        n_steps[0] = 0
        return OK

    f(t, y, k[0], n, par)
    if h_init > 0:
        h = h_init
    else:
        h = _initial_step(f, par, t, y, k[0], n, rtol, atol, h_max, acc, k[1])
    if h > h_max:
        h = h_max

    while idx < n_eval:
        if steps >= max_steps:
            status = MAX_STEPS
            break
        last = t + h >= t_end
        if last:
            h = t_end - t
        for s in range(1, 7):
            for i in range(n):
                acc[i] = y[i]
            for j in range(s):
                if A[s][j] != 0.0:
                    for i in range(n):
                        acc[i] = acc[i] + (h * A[s][j]) * k[j][i]
            if s == 6:
                for i in range(n):
                    y_new[i] = acc[i]
            f(t + C[s] * h, acc, k[s], n, par)
        for i in range(n):
            err[i] = 0.0
        for j in range(7):
            if E[j] != 0.0:
                for i in range(n):
                    err[i] = err[i] + E[j] * k[j][i]
        for i in range(n):
            err[i] = h * err[i]
        err_norm = _rms(err, y, y_new, n, rtol, atol)
        steps += 1
        if err_norm <= 1.0:
            t_new = t_end if last else t + h
            while idx < n_eval and t_eval[idx] <= t_new:
                if t_eval[idx] == t_new:
                    for i in range(n):
                        out[idx * n + i] = y_new[i]
                else:
                    th = (t_eval[idx] - t) / h
                    pw[0] = th
                    pw[1] = th * th
                    pw[2] = th * th * th
                    pw[3] = pw[1] * pw[1]
                    for i in range(n):
                        acc[i] = y[i]
                    for j in range(7):
                        q = P[j][0] * pw[0] + P[j][1] * pw[1] + P[j][2] * pw[2] + P[j][3] * pw[3]
                        if q != 0.0:
                            for i in range(n):
                                acc[i] = acc[i] + (h * q) * k[j][i]
                    for i in range(n):
                        out[idx * n + i] = acc[i]
                idx += 1
            t = t_new
            for i in range(n):
                y[i] = y_new[i]
            swap = k[0]
            k[0] = k[6]
            k[6] = swap
            ymax = 0.0
            for i in range(n):
                if cabs(y[i]) > ymax:
                    ymax = cabs(y[i])
            if ymax > blowup:
                status = BLOWUP
                break
            if err_norm == 0.0:
                factor = MAX_FACTOR
            else:
                factor = SAFETY * pow(err_norm, -0.2)
                if factor > MAX_FACTOR:
                    factor = MAX_FACTOR
            if rejected and factor > 1.0:
                factor = 1.0
            rejected = 0
            h = h * factor
            if h > h_max:
                h = h_max
        else:
            factor = SAFETY * pow(err_norm, -0.2)
            if factor < MIN_FACTOR:
                factor = MIN_FACTOR
            h = h * factor
            rejected = 1
        floor_h = 16 * (nextafter(fabs(t) if fabs(t) > 1.0 else 1.0, INFINITY)
                        - (fabs(t) if fabs(t) > 1.0 else 1.0))
        if h_min > floor_h:
            floor_h = h_min
        if idx < n_eval and h <= floor_h:
            status = STEP_UNDERFLOW
            break

    free(work)
    t_last[0] = t
    n_filled[0] = idx
    n_steps[0] = steps
    return status


cdef tuple _run(rhs_t f, double[::1] par, object y0, object t_eval, double rtol, double atol,
                double h_max, double h_init, double h_min, double blowup, long max_steps):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] y = np.array(y0, dtype=np.complex128).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] te = np.ascontiguousarray(t_eval, dtype=np.float64)
    cdef int n = y.shape[0]
    cdef int n_eval = te.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out = np.full((n_eval, n), np.nan + 0j, dtype=np.complex128)
    cdef double t_last = 0.0
    cdef int n_filled = 0
    cdef long n_steps = 0
    cdef int status
    cdef double complex* yp = <double complex*> y.data
    cdef double* tp = <double*> te.data
    cdef double complex* op = <double complex*> out.data
    cdef const double* pp = &par[0]
    with nogil:
        status = _dopri5(f, pp, n, yp, tp, n_eval, op, rtol, atol, h_max, h_init, h_min,
                         blowup, max_steps, &t_last, &n_filled, &n_steps)
    if status < 0:
        raise MemoryError()
    return out, status, t_last, n_filled, n_steps


def solve_rabi(double delta, double big_delta, y0, t_eval, double rtol, double atol,
               double h_max, double h_init=0.0, double h_min=0.0, long max_steps=50_000_000):
    par = np.array([delta, big_delta], dtype=np.float64)
    return _run(_rabi, par, y0, t_eval, rtol, atol, h_max, h_init, h_min, INFINITY, max_steps)


def solve_jc(double delta, double big_delta, int n_max, y0, t_eval, double rtol, double atol,
             double h_max, double h_init=0.0, double h_min=0.0, long max_steps=50_000_000):
    par = np.concatenate([[delta, big_delta], np.sqrt(np.arange(n_max + 2, dtype=np.float64))])
    return _run(_jc, par, y0, t_eval, rtol, atol, h_max, h_init, h_min, INFINITY, max_steps)


def solve_riccati(double big_delta, double complex u0, t_eval, double rtol, double atol,
                  double h_max, double blowup, double h_init=0.0, double h_min=0.0,
                  long max_steps=50_000_000):
    par = np.array([big_delta], dtype=np.float64)
    return _run(_riccati, par, [u0], t_eval, rtol, atol, h_max, h_init, h_min, blowup, max_steps)
