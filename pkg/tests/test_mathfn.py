import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lfmax.errors import DomainError
from lfmax.mathfn import (
    EULER_GAMMA,
    arithmetic_factor_a,
    exp_integral_e1,
    log_barnes_g,
    log_barnes_ratio_asymptotic,
    log_gamma,
    prime_sieve,
    riemann_siegel_theta,
    sieve_von_mangoldt,
    theta_asymptotic,
)


class TestLogGamma:
    def test_gamma_one(self):
        assert log_gamma(1.0) == pytest.approx(0.0, abs=1e-14)

    def test_gamma_half(self):
        assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), abs=1e-12)

    def test_gamma_ten(self):
        # factorial oracle: Gamma(10) = 9!
        assert log_gamma(10.0) == pytest.approx(math.log(362880), rel=1e-12)

    @given(st.floats(min_value=0.5, max_value=60.0))
    @settings(max_examples=50, deadline=None)
    def test_recurrence(self, x):
        # Gamma(x+1) = x Gamma(x)
        assert log_gamma(x + 1.0) == pytest.approx(
            log_gamma(x) + math.log(x), rel=1e-10, abs=1e-10
        )


class TestBarnesG:
    def test_g_one(self):
        assert log_barnes_g(1.0) == pytest.approx(0.0, abs=1e-14)

    def test_g_four(self):
        # recursion oracle: G(4) = Gamma(3) G(3) = 2 * (Gamma(2) G(2)) = 2
        assert log_barnes_g(4.0) == pytest.approx(math.log(2.0), rel=1e-12)

    @given(st.floats(min_value=1.0, max_value=40.0))
    @settings(max_examples=50, deadline=None)
    def test_recurrence(self, x):
        # G(x+1) = Gamma(x) G(x)
        assert log_barnes_g(x + 1.0) == pytest.approx(
            log_gamma(x) + log_barnes_g(x), rel=1e-9, abs=1e-9
        )

    def test_integer_vs_product(self):
        # G(n) = prod_{j=1}^{n-2} j!  for integer n
        acc = 0.0
        fact = 0.0
        for j in range(1, 12):
            fact += math.log(j)
            acc += fact
            assert log_barnes_g(j + 2.0) == pytest.approx(acc, rel=1e-10)

    def test_ratio_asymptotic_matches(self):
        # log(G^2(k+1)/G(2k+1)) vs its asymptotic expansion
        for k in (20.0, 50.0, 100.0):
            exact = 2.0 * log_barnes_g(k + 1.0) - log_barnes_g(2.0 * k + 1.0)
            assert abs(exact - log_barnes_ratio_asymptotic(k)) < 1.0 / k


def _e1_series(x: float, terms: int = 60) -> float:
    # independent convergent-series oracle: E1(x) = -gamma - log x + sum (-1)^{n+1} x^n/(n n!)
    acc = -EULER_GAMMA - math.log(x)
    fact = 1.0
    for n in range(1, terms + 1):
        fact *= n
        acc += (-1.0) ** (n + 1) * x**n / (n * fact)
    return acc


class TestExpIntegralE1:
    def test_at_one(self):
        assert exp_integral_e1(1.0).real == pytest.approx(_e1_series(1.0), abs=1e-12)
        assert exp_integral_e1(1.0).real == pytest.approx(0.2193839344, abs=1e-9)

    def test_at_tenth(self):
        assert exp_integral_e1(0.1).real == pytest.approx(_e1_series(0.1), abs=1e-12)
        assert exp_integral_e1(0.1).real == pytest.approx(1.8229239585, abs=1e-9)

    def test_asymptotic_at_fifty(self):
        v = exp_integral_e1(50.0).real * 50.0 * math.exp(50.0)
        assert 0.97 <= v <= 1.0

    def test_rejects_zero(self):
        with pytest.raises(DomainError):
            exp_integral_e1(0.0)

    def test_rejects_left_half_plane(self):
        with pytest.raises(DomainError):
            exp_integral_e1(-1.0 + 0.5j)

    @given(st.floats(min_value=0.05, max_value=3.5))
    @settings(max_examples=40, deadline=None)
    def test_series_agreement(self, x):
        assert exp_integral_e1(x).real == pytest.approx(_e1_series(x), rel=1e-10, abs=1e-12)

    @given(
        st.floats(min_value=0.1, max_value=20.0),
        st.floats(min_value=-20.0, max_value=20.0),
    )
    @settings(max_examples=40, deadline=None)
    def test_conjugate_symmetry(self, x, y):
        z = complex(x, y)
        assert exp_integral_e1(z.conjugate()) == pytest.approx(
            exp_integral_e1(z).conjugate(), rel=1e-12, abs=1e-300
        )

    def test_derivative_identity(self):
        # E1'(z) = -e^{-z}/z, checked by central differences
        for z in (0.7, 2.0 + 1.0j, 0.5 + 3.0j):
            h = 1e-6
            num = (exp_integral_e1(z + h) - exp_integral_e1(z - h)) / (2 * h)
            assert num == pytest.approx(-np.exp(-z) / z, rel=1e-7)


class TestArithmeticFactor:
    def test_a_one_exact(self):
        assert arithmetic_factor_a(1.0) == 0.0

    def test_a_zero(self):
        assert arithmetic_factor_a(0.0) == 0.0

    def test_a_two_independent_truncations(self):
        # two cut policies must agree; values are log a(2)
        loose = arithmetic_factor_a(2.0, rel_tol=1e-6)
        tight = arithmetic_factor_a(2.0, rel_tol=1e-14)
        assert loose == pytest.approx(tight, abs=1e-10)

    def test_a_two_closed_form(self):
        # a(2) = 6/pi^2 (paper's second-moment constant)
        assert math.exp(arithmetic_factor_a(2.0)) == pytest.approx(
            6.0 / math.pi**2, rel=1e-9
        )

    def test_a_fifty_asymptotic(self):
        k = 50.0
        asym = -(k**2) * math.log(2.0 * math.exp(EULER_GAMMA) * math.log(k))
        val = arithmetic_factor_a(k)
        assert abs(val - asym) <= 0.2 * abs(asym)


class TestVonMangoldt:
    def test_prime_power(self):
        t = sieve_von_mangoldt(10)
        assert t.values[8] == pytest.approx(math.log(2.0), rel=1e-14)

    def test_composite(self):
        t = sieve_von_mangoldt(10)
        assert t.values[6] == 0.0

    def test_chebyshev_sum(self):
        # direct oracle: sum log p over prime powers <= 100
        oracle = 0.0
        for p in prime_sieve(100):
            q = p
            while q <= 100:
                oracle += math.log(p)
                q *= p
        t = sieve_von_mangoldt(100)
        assert float(np.sum(t.values[1:101])) == pytest.approx(oracle, rel=1e-12)
        assert oracle == pytest.approx(94.045, abs=0.01)

    def test_prime_sieve_small(self):
        assert prime_sieve(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


class TestTheta:
    def test_zero_and_odd(self):
        assert riemann_siegel_theta(0.0) == 0.0
        for t in (5.0, 17.0, 120.0):
            assert riemann_siegel_theta(-t) == pytest.approx(
                -riemann_siegel_theta(t), rel=1e-12
            )

    def test_zero_crossing_location(self):
        # bisection oracle on the exact branch
        lo, hi = 10.0, 20.0
        assert riemann_siegel_theta(lo) < 0 < riemann_siegel_theta(hi)
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if riemann_siegel_theta(mid) < 0:
                lo = mid
            else:
                hi = mid
        assert 0.5 * (lo + hi) == pytest.approx(17.8456, abs=1e-3)

    def test_two_branch_agreement(self):
        assert theta_asymptotic(100.0) == pytest.approx(
            riemann_siegel_theta(100.0), abs=1e-9
        )

    @given(st.floats(min_value=50.0, max_value=5000.0))
    @settings(max_examples=30, deadline=None)
    def test_branches_agree_generally(self, t):
        assert theta_asymptotic(t) == pytest.approx(riemann_siegel_theta(t), abs=1e-8)
