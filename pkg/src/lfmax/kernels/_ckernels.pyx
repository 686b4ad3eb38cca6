# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; mirrors _numpy_impl exactly."""

from libc.math cimport cos, fabs, floor, log, sin, sqrt

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"

cdef double TWO_PI = 6.283185307179586476925286766559


def logabs_charpoly_grid(object angles_in, object thetas_in):
    """out[i] = sum_n log(2 |sin((angles[n] - thetas[i]) / 2)|)."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] angles = np.ascontiguousarray(
        angles_in, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] thetas = np.ascontiguousarray(
        thetas_in, dtype=np.float64)
    cdef Py_ssize_t n_ang = angles.shape[0]
    cdef Py_ssize_t n_th = thetas.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n_th, dtype=np.float64)
    cdef Py_ssize_t i, j
    cdef double acc, s, th
    cdef double neg_inf = -np.inf
    for i in range(n_th):
        th = thetas[i]
        acc = 0.0
        for j in range(n_ang):
            s = fabs(2.0 * sin((angles[j] - th) / 2.0))
            if s == 0.0:
                acc = neg_inf
                break
            acc += log(s)
        out[i] = acc
    return out


cdef double _logabs_at(double* angles, Py_ssize_t n_ang, double th):
    cdef double acc = 0.0
    cdef double s
    cdef Py_ssize_t j
    for j in range(n_ang):
        s = fabs(2.0 * sin((angles[j] - th) / 2.0))
        if s == 0.0:
            return -1e308
        acc += log(s)
    return acc


def max_logabs_charpoly_batch(object batch_in, int oversample=8, double tol=1e-10):
    """Per-row max of log|Lambda(theta)|: recurrence-swept grid + refinement.

    The grid pass computes prod_j sin((angles[j] - theta_i)/2) for the
    uniform grid via the three-term sine recurrence, one multiply per
    (angle, grid point); the product of n <= 1024 factors bounded by 1
    cannot overflow, and underflow to zero only happens where the value
    is far from the maximum.  The champion is then refined by exact
    golden-section evaluations.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=2] batch = np.ascontiguousarray(
        batch_in, dtype=np.float64)
    cdef Py_ssize_t n_rows = batch.shape[0]
    cdef Py_ssize_t n_ang = batch.shape[1]
    if n_ang > 1024:
        raise ValueError("max kernel supports up to 1024 angles per row")
    cdef Py_ssize_t n_grid = oversample * n_ang
    cdef double step = TWO_PI / n_grid
    cdef double half = step / 2.0
    cdef double c2 = 2.0 * cos(half)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n_rows, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] prod = np.empty(n_grid, dtype=np.float64)
    cdef Py_ssize_t r, i, j, best
    cdef double phi, s_prev, s_cur, s_next, best_val, x
    cdef double invphi = 0.6180339887498949
    cdef double a, b, cc, dd, fc, fd
    for r in range(n_rows):
        for i in range(n_grid):
            prod[i] = 1.0
        for j in range(n_ang):
            phi = batch[r, j]
            # s_i = sin((phi - i*step)/2), advanced by the recurrence
            s_prev = sin(phi / 2.0 + half)
            s_cur = sin(phi / 2.0)
            for i in range(n_grid):
                prod[i] *= s_cur
                s_next = c2 * s_cur - s_prev
                s_prev = s_cur
                s_cur = s_next
        best = 0
        best_val = fabs(prod[0])
        for i in range(1, n_grid):
            x = fabs(prod[i])
            if x > best_val:
                best_val = x
                best = i
        # golden-section refinement with exact evaluations
        a = best * step - step
        b = best * step + step
        cc = b - invphi * (b - a)
        dd = a + invphi * (b - a)
        fc = _logabs_at(&batch[r, 0], n_ang, cc)
        fd = _logabs_at(&batch[r, 0], n_ang, dd)
        while b - a > tol:
            if fc >= fd:
                b = dd
                dd = cc
                fd = fc
                cc = b - invphi * (b - a)
                fc = _logabs_at(&batch[r, 0], n_ang, cc)
            else:
                a = cc
                cc = dd
                fc = fd
                dd = a + invphi * (b - a)
                fd = _logabs_at(&batch[r, 0], n_ang, dd)
        x = _logabs_at(&batch[r, 0], n_ang, best * step)
        if fc > x:
            x = fc
        if fd > x:
            x = fd
        out[r] = x
    return out


cdef double _szego_logabs_at(double complex* alphas, Py_ssize_t n, double theta):
    cdef double complex z = cos(theta) + 1j * sin(theta)
    cdef double complex phi = 1.0
    cdef double complex phi_star = 1.0
    cdef double complex zphi
    cdef Py_ssize_t k
    for k in range(n):
        zphi = z * phi
        phi = zphi - alphas[k].conjugate() * phi_star
        phi_star = phi_star - alphas[k] * zphi
    cdef double m = abs(phi)
    if m == 0.0:
        return -1e308
    return log(m)


def max_logabs_szego_batch(object batch_in, int oversample=8, double tol=1e-10):
    """Per-row max over theta of log |Phi_N(e^i theta)| from Verblunsky rows."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] batch = np.ascontiguousarray(
        batch_in, dtype=np.complex128)
    cdef Py_ssize_t n_rows = batch.shape[0]
    cdef Py_ssize_t n = batch.shape[1]
    cdef Py_ssize_t n_grid = oversample * n
    cdef double step = TWO_PI / n_grid
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n_rows, dtype=np.float64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] zs = np.exp(
        1j * np.arange(n_grid) * step)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] phi = np.empty(
        n_grid, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] phi_star = np.empty(
        n_grid, dtype=np.complex128)
    cdef Py_ssize_t r, i, k, best
    cdef double complex a, zphi
    cdef double best_val, x
    cdef double invphi = 0.6180339887498949
    cdef double lo, hi, cc, dd, fc, fd
    for r in range(n_rows):
        for i in range(n_grid):
            phi[i] = 1.0
            phi_star[i] = 1.0
        for k in range(n):
            a = batch[r, k]
            for i in range(n_grid):
                zphi = zs[i] * phi[i]
                phi[i] = zphi - a.conjugate() * phi_star[i]
                phi_star[i] = phi_star[i] - a * zphi
        best = 0
        best_val = abs(phi[0])
        for i in range(1, n_grid):
            x = abs(phi[i])
            if x > best_val:
                best_val = x
                best = i
        lo = best * step - step
        hi = best * step + step
        cc = hi - invphi * (hi - lo)
        dd = lo + invphi * (hi - lo)
        fc = _szego_logabs_at(&batch[r, 0], n, cc)
        fd = _szego_logabs_at(&batch[r, 0], n, dd)
        while hi - lo > tol:
            if fc >= fd:
                hi = dd
                dd = cc
                fd = fc
                cc = hi - invphi * (hi - lo)
                fc = _szego_logabs_at(&batch[r, 0], n, cc)
            else:
                lo = cc
                cc = dd
                fc = fd
                dd = lo + invphi * (hi - lo)
                fd = _szego_logabs_at(&batch[r, 0], n, dd)
        x = log(best_val)
        if fc > x:
            x = fc
        if fd > x:
            x = fd
        out[r] = x
    return out


def rs_main_sum(object ts_in, object thetas_in):
    """Riemann-Siegel main sum 2 sum_{n<=nu(t)} cos(theta - t log n)/sqrt(n)."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ts = np.ascontiguousarray(
        ts_in, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] thetas = np.ascontiguousarray(
        thetas_in, dtype=np.float64)
    cdef Py_ssize_t m = ts.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(m, dtype=np.float64)
    cdef Py_ssize_t i, n, nu
    cdef double t, th, acc
    for i in range(m):
        t = ts[i]
        th = thetas[i]
        nu = <Py_ssize_t>floor(sqrt(t / TWO_PI))
        acc = 0.0
        for n in range(1, nu + 1):
            acc += cos(th - t * log(<double>n)) / sqrt(<double>n)
        out[i] = 2.0 * acc
    return out


cdef int _kronecker_scalar(long long a, long long n):
    cdef int result = 1
    cdef long long tmp
    if n == 0:
        return 1 if (a == 1 or a == -1) else 0
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        tmp = a % 8
        if tmp < 0:
            tmp += 8
        if tmp == 3 or tmp == 5:
            result = -result
    a %= n
    if a < 0:
        a += n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 == 3 or n % 8 == 5:
                result = -result
        tmp = a
        a = n
        n = tmp
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker_many(long long d, object ns_in):
    """Kronecker symbol (d|n) for an array of positive integers n."""
    cdef cnp.ndarray[cnp.int64_t, ndim=1] ns = np.ascontiguousarray(
        ns_in, dtype=np.int64)
    cdef Py_ssize_t m = ns.shape[0]
    cdef cnp.ndarray[cnp.int8_t, ndim=1] out = np.empty(m, dtype=np.int8)
    cdef Py_ssize_t i
    for i in range(m):
        out[i] = _kronecker_scalar(d, ns[i])
    return out
