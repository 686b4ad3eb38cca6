"""Quadratic Dirichlet L-functions at the central point.

Character arithmetic over fundamental discriminants, central values via
the smoothed approximate functional equation, and the family maximum
scan with its symplectic normalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc

from . import kernels
from .errors import DomainError, ResourceError

D_CAP = 1_000_000
L_CAP = 100_000_000


def kronecker_symbol(d: int, n: int) -> int:
    """Kronecker symbol (d|n) for positive n."""
    if n < 1:
        raise DomainError(f"kronecker_symbol requires n >= 1, got {n}")
    return int(kernels.kronecker_many(int(d), np.array([n], dtype=np.int64))[0])


def chi_values(d: int, n_max: int) -> np.ndarray:
    """chi_d(n) for n = 1..n_max as an int8 array (index 0 unused)."""
    out = np.empty(n_max + 1, dtype=np.int8)
    out[0] = 0
    out[1:] = kernels.kronecker_many(int(d), np.arange(1, n_max + 1, dtype=np.int64))
    return out


def _squarefree(m: int) -> bool:
    m = abs(m)
    if m % 4 == 0:
        return False
    f = 3
    while f * f <= m:
        if m % (f * f) == 0:
            return False
        f += 2
    return True


def is_fundamental_discriminant(d: int) -> bool:
    """True iff d indexes a primitive real character chi_d."""
    if d == 0:
        raise DomainError("0 is not a discriminant")
    if d == 1:
        return False
    if d % 4 == 1:
        return _squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def fundamental_discriminants(d_max: int) -> np.ndarray:
    """All fundamental discriminants with |d| <= d_max, ascending in |d|.

    Sieve-based: squarefree flags up to d_max, then the two congruence
    branches of the definition.
    """
    if d_max < 3:
        return np.empty(0, dtype=np.int64)
    sf = np.ones(d_max + 1, dtype=bool)
    for p in range(2, int(math.isqrt(d_max)) + 1):
        sf[p * p :: p * p] = False
    out = []
    for a in range(3, d_max + 1):
        for d in (a, -a):
            if d % 4 == 1 and sf[a]:
                out.append(d)
            elif d % 4 == 0:
                m = d // 4
                if m % 4 in (2, 3) and abs(m) <= d_max and sf[abs(m)]:
                    out.append(d)
    return np.array(out, dtype=np.int64)


def l_central_quadratic(d: int, tol: float = 1e-8) -> float:
    """L(1/2, chi_d) by the smoothed approximate functional equation.

    For the even characters (d > 0) the completed L has gamma factor
    Gamma(s/2); splitting the theta integral at 1 and using root number
    +1 gives L(1/2) = 2 sum_n chi_d(n) n^{-1/2} Q(a, pi n^2/|d|) with
    a = 1/4 and Q the regularized upper incomplete gamma.  Odd
    characters (d < 0) carry Gamma((s+1)/2) and a = 3/4.
    """
    if abs(d) > L_CAP:
        raise DomainError(f"|d| caps at {L_CAP:g}")
    if tol < 1e-10:
        raise DomainError("tol must be >= 1e-10")
    if not is_fundamental_discriminant(d):
        raise DomainError(f"{d} is not a fundamental discriminant")
    q = abs(d)
    a = 0.25 if d > 0 else 0.75
    # Q(a, x) ~ x^{a-1} e^{-x}/Gamma(a); cut where the tail is below tol
    n_max = int(math.ceil(math.sqrt(q * (-math.log(tol) + 6.0) / math.pi))) + 1
    ns = np.arange(1, n_max + 1, dtype=np.float64)
    chi = kernels.kronecker_many(int(d), np.arange(1, n_max + 1, dtype=np.int64))
    weights = gammaincc(a, math.pi * ns * ns / q)
    return float(2.0 * np.sum(chi * weights / np.sqrt(ns)))


@dataclass(frozen=True)
class FamilyScanRecord:
    d_max: int
    count: int
    argmax_d: int
    max_log_l: float
    normalization: float
    ratio: float


def family_scan(d_max: int, tol: float = 1e-8) -> FamilyScanRecord:
    """Max of log L(1/2, chi_d) over fundamental |d| <= d_max.

    Ties break toward the smaller |d| so parallel evaluation order can
    never change the record.
    """
    if d_max > D_CAP:
        raise ResourceError(f"family_scan caps at D_max={D_CAP}")
    if d_max < 3:
        raise DomainError("d_max must be >= 3")
    best_d = 0
    best_log = -math.inf
    discs = fundamental_discriminants(d_max)
    for d in discs:
        value = l_central_quadratic(int(d), tol)
        if value <= 0:
            continue  # central values are conjecturally nonnegative; skip zeros
        log_l = math.log(value)
        if log_l > best_log or (log_l == best_log and abs(d) < abs(best_d)):
            best_d, best_log = int(d), log_l
    log_d = math.log(d_max)
    norm = math.sqrt(log_d * math.log(log_d)) if log_d > 1 else float("nan")
    return FamilyScanRecord(
        d_max=d_max,
        count=int(discs.size),
        argmax_d=best_d,
        max_log_l=best_log,
        normalization=norm,
        ratio=best_log / norm,
    )
