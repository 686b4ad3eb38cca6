"""Deterministic asymptotic analysis: conjecture curves, moment bounds,
validity limits, and the saddle-point convolution.

Everything here is a pure function of (log T, parameters); T itself is
never materialized, so log T = 1e8 is a perfectly ordinary input.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

from .errors import DomainError, NumericalError
from .mathfn import arithmetic_factor_a, log_barnes_g

SQRT2 = math.sqrt(2.0)


class Direction(enum.Enum):
    UPPER = "upper"
    LOWER = "lower"


@dataclass(frozen=True)
class BoundReport:
    log_t: float
    parameter: float  # ell for Upper, k for Lower
    c: float  # parameter / sqrt(log T / log log T)
    log_m_bound: float
    direction: Direction
    constant: float = 1.0


def _loglog(log_t: float) -> float:
    if log_t <= 1.0:
        raise DomainError(f"need log T > 1, got {log_t}")
    return math.log(log_t)


def conjecture_curve(log_t: float, B: float = 0.5) -> float:
    """sqrt(B log T log log T), the conjectured log of the maximum."""
    if B <= 0:
        raise DomainError("B must be positive")
    return math.sqrt(B * log_t * _loglog(log_t))


def ks_log_moment(log_t: float, k: float) -> float:
    """log of the moment conjecture: Barnes ratio + log a(k) + k^2 log log T."""
    if k < 0:
        raise DomainError("k must be >= 0")
    if k == 0.0:
        return 0.0
    barnes = 2.0 * log_barnes_g(k + 1.0) - log_barnes_g(2.0 * k + 1.0)
    return barnes + arithmetic_factor_a(k) + k * k * _loglog(log_t)


def moment_upper_bound(log_t: float, ell: float, constant: float = 1.0) -> BoundReport:
    """log max <= log(C T log T)/(2 ell) + ks_log_moment/(2 ell)."""
    if ell <= 0:
        raise DomainError("ell must be positive")
    llt = _loglog(log_t)
    bound = (math.log(constant) + log_t + llt + ks_log_moment(log_t, ell)) / (2.0 * ell)
    return BoundReport(
        log_t=log_t,
        parameter=ell,
        c=ell / math.sqrt(log_t / llt),
        log_m_bound=bound,
        direction=Direction.UPPER,
        constant=constant,
    )


def moment_lower_bound(log_t: float, k: float) -> BoundReport:
    """log max >= ks_log_moment/(2k): somewhere the integrand is at least its mean."""
    if k <= 0:
        raise DomainError("k must be positive")
    llt = _loglog(log_t)
    return BoundReport(
        log_t=log_t,
        parameter=k,
        c=k / math.sqrt(log_t / llt),
        log_m_bound=ks_log_moment(log_t, k) / (2.0 * k),
        direction=Direction.LOWER,
    )


def _golden_min(f: Callable[[float], float], a: float, b: float, tol: float) -> float:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def _parabolic_polish(f: Callable[[float], float], x: float, h: float) -> float:
    # golden section stalls at sqrt(eps) near a minimum (value comparisons
    # go flat); one parabola through x-h, x, x+h recovers the vertex
    lo, mid, hi = f(x - h), f(x), f(x + h)
    denom = lo - 2.0 * mid + hi
    if denom <= 0:
        return x
    return x + h * (lo - hi) / (2.0 * denom)


def leading_order_minimizer() -> tuple[float, float]:
    """Minimize 1/(2c) + c/4 numerically; analytically c = sqrt(2), value 1/sqrt(2)."""
    f = lambda c: 1.0 / (2.0 * c) + c / 4.0  # noqa: E731
    c_star = _golden_min(f, 0.2, 5.0, 1e-6)
    c_star = _parabolic_polish(f, c_star, 1e-5)
    return c_star, f(c_star)


def _moment_rate(ell: float, llt: float) -> float:
    """(1/2 ell) log of the conjectured 2ell-th moment, leading form:
    (1/2) ell log log T - (1/2) ell log ell.  The optimization and the
    validity contradiction both live at this order; the constant-size
    corrections inside ks_log_moment are below their shared envelope."""
    return 0.5 * ell * (llt - math.log(ell))


def optimize_upper_bound(log_t: float, constant: float = 1.0) -> dict:
    """Minimize the moment upper bound over ell = c sqrt(log T / log log T)."""
    llt = _loglog(log_t)
    if llt <= 1.0:
        raise DomainError("optimize_upper_bound needs log log T > 1")
    scale = math.sqrt(log_t / llt)

    def bound_of_c(c: float) -> float:
        ell = c * scale
        return (math.log(constant) + log_t + llt) / (2.0 * ell) + _moment_rate(ell, llt)

    c_star = _golden_min(bound_of_c, 0.2, 5.0, 1e-9)
    return {"c_star": c_star, "bound": bound_of_c(c_star)}


def ks_validity_limit(log_t: float) -> float:
    """2 sqrt(2) sqrt(log T / log log T): beyond this k the conjecture fails."""
    return 2.0 * SQRT2 * math.sqrt(log_t / _loglog(log_t))


def validity_contradiction(log_t: float, c: float, constant: float = 1.0) -> bool:
    """True iff the lower bound at k = c sqrt(log T/log log T) exceeds
    the optimized upper bound at ell = sqrt(2) sqrt(log T/log log T)."""
    llt = _loglog(log_t)
    scale = math.sqrt(log_t / llt)
    lower = _moment_rate(c * scale, llt)
    ell = SQRT2 * scale
    upper = (math.log(constant) + log_t + llt) / (2.0 * ell) + _moment_rate(ell, llt)
    return lower > upper


def tau_threshold(log_t: float, k: float) -> float:
    """log of the largest K so that T log^{k^2} T / K^{2k} stays >= 1."""
    if k <= 0:
        raise DomainError("k must be positive")
    return log_t / (2.0 * k) + (k / 2.0) * _loglog(log_t) - (k / 2.0) * math.log(k)


def tau_optimal(log_t: float) -> dict:
    """Minimize tau_threshold over k; the minimum reproduces the conjecture curve."""
    llt = _loglog(log_t)
    guess = math.sqrt(2.0 * log_t / llt)
    k_star = _golden_min(lambda k: tau_threshold(log_t, k), 0.2 * guess, 5.0 * guess, 1e-9)
    return {"k_star": k_star, "tau_log": tau_threshold(log_t, k_star)}


# ---------------------------------------------------------------------------
# Saddle point of the convolution of the prime and zero tails
# ---------------------------------------------------------------------------


def _fk_denominator(x: float, alpha: float, llt: float) -> float:
    # below x = e the -log x term is clamped to its x = e value; the
    # saddle always sits far to the right of the clamp
    return (1.0 - alpha) * llt - (math.log(x) if x > math.e else 1.0)


def f_k(x: float, log_t: float, alpha: float, d: float) -> float:
    """(log K - x)^2/(alpha log log T) + x^2/((1-alpha) log log T - log x)."""
    llt = _loglog(log_t)
    log_k = d * math.sqrt(log_t * llt)
    denom = _fk_denominator(x, alpha, llt)
    if denom <= 0:
        raise DomainError(f"x={x} beyond the zero-tail pole")
    return (log_k - x) ** 2 / (alpha * llt) + x * x / denom


def f_k_prime(x: float, log_t: float, alpha: float, d: float) -> float:
    """Analytic derivative of f_k in x."""
    llt = _loglog(log_t)
    log_k = d * math.sqrt(log_t * llt)
    denom = _fk_denominator(x, alpha, llt)
    if denom <= 0:
        raise DomainError(f"x={x} beyond the zero-tail pole")
    out = 2.0 * (x - log_k) / (alpha * llt) + 2.0 * x / denom
    if x > math.e:
        out += x * x / (x * denom * denom)
    return out


def saddle_point_x0(log_t: float, alpha: float, d: float) -> dict:
    """Solve f_K'(x0) = 0 by Newton iteration with a bisection bracket."""
    if not 0.0 < alpha < 0.5:
        raise DomainError("alpha must lie in (0, 1/2)")
    if d <= 0:
        raise DomainError("d must be positive")
    llt = _loglog(log_t)
    x = d * (1.0 - 2.0 * alpha) * math.sqrt(log_t * llt)
    lo, hi = math.e, math.exp((1.0 - alpha) * llt) * (1.0 - 1e-9)
    f_lo = f_k_prime(lo, log_t, alpha, d)
    f_hi = f_k_prime(hi, log_t, alpha, d)
    if f_lo > 0 or f_hi < 0:
        raise NumericalError("saddle bracket does not straddle a root")
    x = min(max(x, lo), hi)
    for _ in range(100):
        fp = f_k_prime(x, log_t, alpha, d)
        if abs(fp) < 1e-12 * (1.0 + abs(x)):
            return {"x0": x, "f_value": f_k(x, log_t, alpha, d)}
        if fp > 0:
            hi = x
        else:
            lo = x
        h = 1e-6 * max(1.0, abs(x))
        fpp = (
            f_k_prime(x + h, log_t, alpha, d) - f_k_prime(x - h, log_t, alpha, d)
        ) / (2.0 * h)
        step = fp / fpp if fpp != 0 else 0.0
        x_new = x - step
        if not lo < x_new < hi:
            x_new = 0.5 * (lo + hi)
        x = x_new
    raise NumericalError(
        f"saddle solve did not converge; residual {f_k_prime(x, log_t, alpha, d):.3e}"
    )


def density_large_values(log_t: float, d: float) -> float:
    """log of the conjectured measure fraction: -2 d^2 log T."""
    if d < 0:
        raise DomainError("d must be >= 0")
    return -2.0 * d * d * log_t


def critical_density_d(log_t: float) -> float:
    """The d at which T log T exp(-2 d^2 log T) crosses 1; tends to sqrt(1/2)."""
    llt = _loglog(log_t)
    return math.sqrt((log_t + llt) / (2.0 * log_t))
