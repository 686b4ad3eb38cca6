"""Pure numpy implementations of the hot kernels.

Same call signatures as the compiled extension; selected automatically
when the extension is unavailable or LFMAX_PURE_PYTHON=1 is set.
"""

from __future__ import annotations

import numpy as np

BACKEND = "numpy"


def logabs_charpoly_grid(angles: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """out[i] = sum_n log(2 |sin((angles[n] - thetas[i]) / 2)|).

    Exact eigenangle hits produce -inf.
    """
    angles = np.asarray(angles, dtype=np.float64)
    thetas = np.asarray(thetas, dtype=np.float64)
    out = np.empty(thetas.size, dtype=np.float64)
    # block over thetas to bound the (n_thetas x n_angles) temporary
    block = max(1, int(4_000_000 // max(angles.size, 1)))
    with np.errstate(divide="ignore"):
        for lo in range(0, thetas.size, block):
            th = thetas[lo : lo + block, None]
            s = np.abs(2.0 * np.sin((angles[None, :] - th) / 2.0))
            out[lo : lo + block] = np.sum(np.log(s), axis=1)
    return out


def max_logabs_charpoly_batch(
    angles_batch: np.ndarray, oversample: int = 8, tol: float = 1e-10
) -> np.ndarray:
    """Per-row maximum of log|Lambda(theta)| over theta in [0, 2pi).

    Seeds from a uniform grid of oversample * n_angles points, then
    golden-section refines around the grid champion.
    """
    angles_batch = np.asarray(angles_batch, dtype=np.float64)
    n_rows, n_ang = angles_batch.shape
    n_grid = oversample * n_ang
    step = 2.0 * np.pi / n_grid
    grid = np.arange(n_grid) * step
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    out = np.empty(n_rows)
    for r in range(n_rows):
        angles = angles_batch[r]
        vals = logabs_charpoly_grid(angles, grid)
        best = int(np.argmax(vals))
        a = grid[best] - step
        b = grid[best] + step
        c = b - invphi * (b - a)
        d = a + invphi * (b - a)
        fc = logabs_charpoly_grid(angles, np.array([c]))[0]
        fd = logabs_charpoly_grid(angles, np.array([d]))[0]
        while b - a > tol:
            if fc >= fd:
                b, d, fd = d, c, fc
                c = b - invphi * (b - a)
                fc = logabs_charpoly_grid(angles, np.array([c]))[0]
            else:
                a, c, fc = c, d, fd
                d = a + invphi * (b - a)
                fd = logabs_charpoly_grid(angles, np.array([d]))[0]
        out[r] = max(float(vals[best]), float(fc), float(fd))
    return out


def _szego_logabs(alphas: np.ndarray, zs: np.ndarray) -> np.ndarray:
    """log |Phi_N(z)| for one coefficient row over an array of |z| = 1."""
    phi = np.ones(zs.size, dtype=np.complex128)
    phi_star = phi.copy()
    for a in alphas:
        phi, phi_star = zs * phi - np.conj(a) * phi_star, phi_star - a * zs * phi
    with np.errstate(divide="ignore"):
        return np.log(np.abs(phi))


def max_logabs_szego_batch(
    alphas_batch: np.ndarray, oversample: int = 8, tol: float = 1e-10
) -> np.ndarray:
    """Per-row max over theta of log |Lambda(theta)| = log |Phi_N(e^i theta)|.

    Works directly on Verblunsky coefficients, so no eigendecomposition
    is ever performed.  Grid seeding plus golden-section refinement, as
    in max_logabs_charpoly_batch.
    """
    alphas_batch = np.asarray(alphas_batch, dtype=np.complex128)
    n_rows, n_ang = alphas_batch.shape
    n_grid = oversample * n_ang
    step = 2.0 * np.pi / n_grid
    zs = np.exp(1j * np.arange(n_grid) * step)
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    out = np.empty(n_rows)
    for r in range(n_rows):
        alphas = alphas_batch[r]

        def f(theta):
            return _szego_logabs(alphas, np.exp(1j * np.atleast_1d(theta)))

        vals = _szego_logabs(alphas, zs)
        best = int(np.argmax(vals))
        a = best * step - step
        b = best * step + step
        c = b - invphi * (b - a)
        d = a + invphi * (b - a)
        fc, fd = f(c)[0], f(d)[0]
        while b - a > tol:
            if fc >= fd:
                b, d, fd = d, c, fc
                c = b - invphi * (b - a)
                fc = f(c)[0]
            else:
                a, c, fc = c, d, fd
                d = a + invphi * (b - a)
                fd = f(d)[0]
        out[r] = max(float(vals[best]), float(fc), float(fd))
    return out


def rs_main_sum(ts: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """Riemann-Siegel main sum 2 sum_{n<=nu(t)} cos(theta - t log n)/sqrt(n).

    ts and thetas are matched arrays; nu(t) = floor(sqrt(t / 2 pi)).
    """
    ts = np.asarray(ts, dtype=np.float64)
    thetas = np.asarray(thetas, dtype=np.float64)
    nu = np.floor(np.sqrt(ts / (2.0 * np.pi))).astype(np.int64)
    out = np.zeros(ts.size, dtype=np.float64)
    nu_max = int(nu.max(initial=0))
    if nu_max == 0:
        return out
    n = np.arange(1, nu_max + 1, dtype=np.float64)
    logn = np.log(n)
    rsq = 1.0 / np.sqrt(n)
    # group points sharing the same truncation length
    for m in np.unique(nu):
        if m == 0:
            continue
        idx = np.nonzero(nu == m)[0]
        phase = thetas[idx, None] - ts[idx, None] * logn[None, :m]
        out[idx] = 2.0 * np.sum(np.cos(phase) * rsq[None, :m], axis=1)
    return out


def kronecker_many(d: int, ns: np.ndarray) -> np.ndarray:
    """Kronecker symbol (d|n) for an array of positive integers n."""
    ns = np.asarray(ns, dtype=np.int64)
    out = np.empty(ns.size, dtype=np.int8)
    for i in range(ns.size):
        out[i] = _kronecker_scalar(d, int(ns[i]))
    return out


def _kronecker_scalar(a: int, n: int) -> int:
    # standard binary Kronecker algorithm; n > 0 here
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    # factor out twos from n
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0
