"""Special functions and arithmetic tables used by every other module.

Everything here is a pure function (or an immutable table), safe to share
across threads.  APIs for quantities that overflow doubles return logs.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np
from scipy.special import loggamma as _cx_loggamma

from .errors import DomainError, NumericalError, ResourceError

EULER_GAMMA = 0.5772156649015328606065120900824024
# zeta'(-1) = 1/12 - log(Glaisher); pinned rather than computed.
ZETA_PRIME_MINUS_ONE = -0.165421143700450929213919660242780642764

# Bernoulli numbers B_4, B_6, ... B_14 for asymptotic tails.
_BERNOULLI_EVEN = [-1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730, 7.0 / 6]


def log_gamma(x: float) -> float:
    """log Gamma(x) for real x > 0."""
    if not math.isfinite(x) or x <= 0:
        raise DomainError(f"log_gamma requires finite x > 0, got {x!r}")
    return math.lgamma(x)


# ---------------------------------------------------------------------------
# Barnes G
# ---------------------------------------------------------------------------

_BARNES_ASYM_CUT = 16.0


def _log_barnes_g_asymptotic(x: float) -> float:
    # log G(z+1) = z^2/4 + z log Gamma(z+1) - (z(z+1)/2 + 1/12) log z
    #              - log A + sum_k B_{2k+2} / (2k(2k+1)(2k+2) z^{2k})
    # with log A = 1/12 - zeta'(-1).
    z = x - 1.0
    log_a = 1.0 / 12 - ZETA_PRIME_MINUS_ONE
    out = (
        z * z / 4.0
        + z * math.lgamma(z + 1.0)
        - (z * (z + 1.0) / 2.0 + 1.0 / 12) * math.log(z)
        - log_a
    )
    zpow = z * z
    for k, b in enumerate(_BERNOULLI_EVEN, start=1):
        out += b / (2 * k * (2 * k + 1) * (2 * k + 2) * zpow)
        zpow *= z * z
    return out


def log_barnes_g(x: float) -> float:
    """log of the Barnes G-function for real x >= 1.

    Integer arguments up to 512 go through the recursion
    G(z+1) = Gamma(z) G(z) from G(1) = 1, so the moment identities that
    depend on exact telescoping hold to rounding error.  Everything else
    uses the asymptotic expansion, recursing upward first if needed.
    """
    if not math.isfinite(x) or x < 1.0:
        raise DomainError(f"log_barnes_g requires x >= 1, got {x!r}")
    n = round(x)
    if x == n and n <= 512:
        return sum(math.lgamma(j) for j in range(2, n))
    if x >= _BARNES_ASYM_CUT:
        return _log_barnes_g_asymptotic(x)
    m = int(math.ceil(_BARNES_ASYM_CUT - x))
    shifted = _log_barnes_g_asymptotic(x + m)
    return shifted - sum(math.lgamma(x + j) for j in range(m))


def log_barnes_ratio_asymptotic(k: float) -> float:
    """Large-k expansion of log( G(1+k)^2 / G(1+2k) ), error O(1/k)."""
    if k <= 1:
        raise DomainError("asymptotic ratio needs k > 1")
    return (
        k * k * (-math.log(k) + 1.5 - 2.0 * math.log(2.0))
        - math.log(k) / 12.0
        + math.log(2.0) / 12.0
        + ZETA_PRIME_MINUS_ONE
    )


# ---------------------------------------------------------------------------
# Exponential integral E1
# ---------------------------------------------------------------------------


def exp_integral_e1(z: complex) -> complex:
    """E1(z) = integral_z^inf e^-w / w dw for Re z >= 0, z != 0.

    Power series for |z| <= 4, modified-Lentz continued fraction beyond.
    Relative error <= 1e-10 on the closed right half plane minus the origin.
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError("exp_integral_e1 requires finite z")
    if z == 0 or z.real < 0:
        raise DomainError(f"exp_integral_e1 requires Re z >= 0 and z != 0, got {z!r}")
    if abs(z) <= 4.0:
        # E1(z) = -gamma - log z + sum_{n>=1} (-1)^{n+1} z^n / (n n!)
        total = -EULER_GAMMA - cmath.log(z)
        term = complex(1.0)
        for n in range(1, 120):
            term *= -z / n
            contrib = -term / n
            total += contrib
            if abs(contrib) < 1e-18 * (1.0 + abs(total)):
                break
        return total
    # E1(z) = e^-z / (z + 1/(1 + 1/(z + 2/(1 + 2/(z + ...)))))
    tiny = 1e-300
    f = z if z != 0 else tiny
    c = f
    d = complex(0.0)
    for i in range(1, 500):
        # partial numerators alternate a_{2k-1} = a_{2k} = k over b = 1, z
        a = (i + 1) // 2
        b = 1.0 if i % 2 else z
        d = b + a * d
        if d == 0:
            d = tiny
        c = b + a / c
        if c == 0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-14:
            return cmath.exp(-z) / f
    raise NumericalError(f"E1 continued fraction failed to converge at z={z!r}")


# ---------------------------------------------------------------------------
# Arithmetic factor a(k) of the moment formula
# ---------------------------------------------------------------------------

_A_EXACT_KMAX = 60.0


def _prime_zeta_tail(j: int, primes: np.ndarray) -> float:
    """sum over primes p > max(primes) of p^-j.

    The head and P(j) agree to ~j log(cut) digits, far beyond double
    precision, so the subtraction is done in extended precision.
    """
    with mp.workdps(60):
        head = mp.fsum(mp.mpf(int(p)) ** (-j) for p in primes)
        return float(mp.primezeta(j) - head)


def _mu_table(limit: int) -> np.ndarray:
    mu = np.ones(limit + 1, dtype=np.int8)
    primes_mask = np.ones(limit + 1, dtype=bool)
    primes_mask[:2] = False
    for p in range(2, limit + 1):
        if primes_mask[p]:
            primes_mask[2 * p :: p] = False
            mu[p::p] *= -1
            mu[p * p :: p * p] = 0
    return mu


def _inner_sum_log(k: float, log_p: float) -> float:
    """log of sum_m (Gamma(m+k)/(m! Gamma(k)))^2 p^-m, by logsumexp."""
    lgk = math.lgamma(k)
    best = 0.0
    logs = [0.0]
    m = 0
    while True:
        m += 1
        lt = 2.0 * (math.lgamma(m + k) - math.lgamma(m + 1) - lgk) - m * log_p
        logs.append(lt)
        if lt > best:
            best = lt
        elif lt < best - 46.0:
            break
        if m > 5000:  # unreachable for p >= 2
            raise NumericalError("inner moment sum did not terminate")
    return best + math.log(math.fsum(math.exp(v - best) for v in logs))


def _log_euler_term_series_coeffs(k: float, order: int) -> np.ndarray:
    """Taylor coefficients c_j of g(x) = k^2 log(1-x) + log(sum_m r_m x^m).

    c_0 = c_1 = 0; the tail of the Euler product over large primes is
    sum_p g(1/p) = sum_j c_j P(j).
    """
    r = np.zeros(order + 1)
    r[0] = 1.0
    for m in range(1, order + 1):
        r[m] = r[m - 1] * ((k + m - 1.0) / m) ** 2
    # power-series log: h_n = r_n - (1/n) sum_{j<n} j h_j r_{n-j}
    h = np.zeros(order + 1)
    for n in range(1, order + 1):
        s = r[n]
        for j in range(1, n):
            s -= (j / n) * h[j] * r[n - j]
        h[n] = s
    c = h.copy()
    for j in range(1, order + 1):
        c[j] -= k * k / j
    return c


def arithmetic_factor_a(k: float, rel_tol: float = 1e-12) -> float:
    """log of the arithmetic factor a(k) in the moment formula.

    a(k) = prod_p (1-1/p)^{k^2} sum_m (Gamma(m+k)/(m! Gamma(k)))^2 p^-m.
    Primes below a k-dependent cutoff are handled exactly; the rest of
    the product is summed through the Taylor expansion of the per-prime
    log term against prime zeta values, which keeps the truncation error
    far below rel_tol.  Above k=60 the Conrey-Gonek asymptotic
    -k^2 log(2 e^gamma log k) is used instead.
    """
    if not math.isfinite(k) or k < 0:
        raise DomainError(f"arithmetic_factor_a requires k >= 0, got {k!r}")
    if rel_tol <= 0:
        raise DomainError("rel_tol must be positive")
    if k == 0.0 or k == 1.0:
        return 0.0  # analytic collapse: empty exponents / telescoping product
    if k > _A_EXACT_KMAX:
        return -k * k * math.log(2.0 * math.exp(EULER_GAMMA) * math.log(k))
    # loose and tight tolerances use genuinely different truncations, so
    # their agreement is a real consistency check
    if rel_tol > 1e-9:
        p_cut = int(max(200, 12 * k * k))
    else:
        p_cut = int(max(400, 24 * k * k))
    if p_cut > 5_000_000:
        raise ResourceError(f"prime cutoff {p_cut} too large")
    primes = prime_sieve(p_cut)
    total = 0.0
    terms = []
    for p in primes:
        lp = math.log(p)
        terms.append(k * k * math.log1p(-1.0 / p) + _inner_sum_log(k, lp))
    total = math.fsum(terms)
    # tail over p > p_cut through the series coefficients and prime zeta
    order = 10 if rel_tol > 1e-9 else 14
    c = _log_euler_term_series_coeffs(k, order)
    log_cut = math.log(p_cut)
    for j in range(2, order + 1):
        # crude tail bound sum_{p>cut} p^-j < cut^{1-j}/((j-1) log cut);
        # skip (not break): odd-j coefficients can vanish identically
        if abs(c[j]) * p_cut ** (1.0 - j) / ((j - 1.0) * log_cut) < 1e-18 * abs(total):
            continue
        total += c[j] * _prime_zeta_tail(j, primes)
    return total


# ---------------------------------------------------------------------------
# von Mangoldt table
# ---------------------------------------------------------------------------


def prime_sieve(limit: int) -> np.ndarray:
    """Ascending array of primes <= limit."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.nonzero(mask)[0].astype(np.int64)


@dataclass(frozen=True)
class VonMangoldtTable:
    """Lambda(n) for n <= limit, plus the underlying prime list."""

    limit: int
    values: np.ndarray = field(repr=False)  # values[n] = Lambda(n)
    primes: np.ndarray = field(repr=False)

    def value(self, n: int) -> float:
        if not 1 <= n <= self.limit:
            raise DomainError(f"n={n} outside table limit {self.limit}")
        return float(self.values[n])

    def psi(self) -> float:
        """Chebyshev psi(limit) = sum of Lambda(n) over the table."""
        return float(self.values.sum())


def sieve_von_mangoldt(X: int) -> VonMangoldtTable:
    """Build the von Mangoldt table Lambda(n), n <= X."""
    if X < 1:
        raise DomainError(f"sieve_von_mangoldt requires X >= 1, got {X}")
    if X > 200_000_000:
        raise ResourceError(f"von Mangoldt table of size {X} exceeds the desk cap")
    values = np.zeros(X + 1)
    primes = prime_sieve(X)
    for p in primes:
        lp = math.log(p)
        q = int(p)
        while q <= X:
            values[q] = lp
            q *= int(p)
    return VonMangoldtTable(limit=X, values=values, primes=primes)


# ---------------------------------------------------------------------------
# Riemann-Siegel theta
# ---------------------------------------------------------------------------


def riemann_siegel_theta(t: float) -> float:
    """theta(t) = Im log Gamma(1/4 + it/2) - (t/2) log pi; odd in t."""
    if not math.isfinite(t):
        raise DomainError("riemann_siegel_theta requires finite t")
    if t < 0:
        return -riemann_siegel_theta(-t)
    if t < 10.0:
        return float(_cx_loggamma(0.25 + 0.5j * t).imag) - 0.5 * t * math.log(math.pi)
    return theta_asymptotic(t)


def theta_asymptotic(t):
    """Asymptotic theta(t) for t >= 10; accepts scalars or numpy arrays."""
    t = np.asarray(t, dtype=np.float64)
    out = (
        t / 2.0 * np.log(t / (2.0 * math.pi))
        - t / 2.0
        - math.pi / 8.0
        + 1.0 / (48.0 * t)
        + 7.0 / (5760.0 * t**3)
        + 31.0 / (80640.0 * t**5)
        + 127.0 / (430080.0 * t**7)
    )
    return float(out) if out.ndim == 0 else out
