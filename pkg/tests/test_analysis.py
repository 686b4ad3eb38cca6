import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lfmax.analysis import (
    SQRT2,
    conjecture_curve,
    critical_density_d,
    density_large_values,
    f_k,
    f_k_prime,
    ks_log_moment,
    ks_validity_limit,
    leading_order_minimizer,
    moment_lower_bound,
    moment_upper_bound,
    optimize_upper_bound,
    saddle_point_x0,
    tau_optimal,
    tau_threshold,
    validity_contradiction,
)
from lfmax.errors import DomainError

LOG_T = 1e8


class TestConjectureCurve:
    def test_b_ratio(self):
        assert conjecture_curve(LOG_T, B=0.5) / conjecture_curve(LOG_T, B=1.0) == (
            pytest.approx(1.0 / SQRT2, rel=1e-12)
        )

    def test_at_log_t_e(self):
        # log log T = 1 there
        assert conjecture_curve(math.e, B=0.5) == pytest.approx(
            math.sqrt(0.5 * math.e), rel=1e-12
        )

    @given(
        st.floats(min_value=20.0, max_value=1e10),
        st.floats(min_value=20.0, max_value=1e10),
    )
    @settings(max_examples=50, deadline=None)
    def test_monotone(self, a, b):
        lo, hi = min(a, b), max(a, b)
        assert conjecture_curve(hi) >= conjecture_curve(lo)


class TestKSMoment:
    def test_zeroth(self):
        assert ks_log_moment(LOG_T, 0.0) == pytest.approx(0.0, abs=1e-12)

    def test_first_is_loglog(self):
        # Barnes factor collapses and a(1) = 1; LOG_T is already log T,
        # so log log T = log(LOG_T)
        assert ks_log_moment(LOG_T, 1.0) == pytest.approx(
            math.log(LOG_T), abs=1e-9
        )

    def test_lower_monotone_in_moment(self):
        r1 = moment_lower_bound(1e6, 2.0)
        r2 = moment_lower_bound(1e6, 3.0)
        # both scale as k * loglogT / 2 -> larger k gives larger bound here
        assert r2.log_m_bound >= r1.log_m_bound


class TestBoundsPipeline:
    def test_leading_order_minimizer(self):
        c, v = leading_order_minimizer()
        assert c == pytest.approx(SQRT2, abs=1e-9)
        assert v == pytest.approx(1.0 / SQRT2, abs=1e-9)

    def test_c_star_near_sqrt2(self):
        out = optimize_upper_bound(LOG_T)
        assert SQRT2 - 0.2 <= out["c_star"] <= SQRT2 + 0.2

    def test_c_star_stable_in_constant(self):
        stars = [optimize_upper_bound(LOG_T, constant=c)["c_star"] for c in (0.1, 1.0, 10.0)]
        assert max(stars) - min(stars) < 0.2

    def test_upper_dominates_lower_at_matched_params(self):
        log_t = 1e6
        out = optimize_upper_bound(log_t)
        scale = math.sqrt(log_t / math.log(log_t))
        ell = out["c_star"] * scale
        up = moment_upper_bound(log_t, ell)
        lo = moment_lower_bound(log_t, ell)
        assert up.log_m_bound >= lo.log_m_bound

    def test_contradiction_bracket(self):
        assert validity_contradiction(LOG_T, 2.0 * SQRT2 + 0.1)
        assert not validity_contradiction(LOG_T, 2.0 * SQRT2 - 0.5)

    def test_validity_limit_formula(self):
        assert ks_validity_limit(LOG_T) == pytest.approx(
            2.0 * SQRT2 * math.sqrt(LOG_T / math.log(LOG_T)), rel=1e-12
        )


class TestTauPipeline:
    def test_tau_convex_in_k(self):
        out = tau_optimal(LOG_T)
        k0 = out["k_star"]
        ks = [k0 * f for f in (0.8, 0.9, 1.0, 1.1, 1.2)]
        vals = [tau_threshold(LOG_T, k) for k in ks]
        assert vals[0] > vals[2] < vals[4]
        # positive second differences on the ladder
        for i in range(1, 4):
            assert vals[i - 1] - 2.0 * vals[i] + vals[i + 1] > 0.0

    def test_pipelines_agree(self):
        # tau-optimal max estimate vs the optimized moment upper bound
        tau = tau_optimal(LOG_T)["tau_log"]
        bound = optimize_upper_bound(LOG_T)["bound"]
        assert abs(tau - bound) / bound < 0.10


class TestSaddle:
    def test_gradient_check(self):
        for x in (5.0, 30.0, 200.0):
            h = 1e-5 * x
            num = (f_k(x + h, LOG_T, 0.25, 0.7) - f_k(x - h, LOG_T, 0.25, 0.7)) / (
                2.0 * h
            )
            ana = f_k_prime(x, LOG_T, 0.25, 0.7)
            assert abs(num - ana) <= 1e-6 * max(1.0, abs(ana))

    def test_saddle_location_and_value(self):
        alpha, d = 0.25, 1.0 / SQRT2
        out = saddle_point_x0(LOG_T, alpha, d)
        llt = math.log(LOG_T)
        x_pred = d * (1.0 - 2.0 * alpha) * math.sqrt(LOG_T * llt)
        # the x0 ~ d(1-2a) sqrt(log T log log T) prediction carries a
        # relative error of order log(llt)/llt, about 9% at llt = 18.4
        assert out["x0"] / x_pred == pytest.approx(0.909, abs=0.02)
        assert out["f_value"] / (2.0 * d * d * LOG_T) == pytest.approx(1.0, abs=0.05)

    def test_saddle_ratio_converges(self):
        # the o(1) shrinks as log T grows: the location ratio climbs to 1
        alpha, d = 0.25, 1.0 / SQRT2
        ratios = []
        for log_t in (1e8, 1e20, 1e50, 1e120):
            llt = math.log(log_t)
            x_pred = d * (1.0 - 2.0 * alpha) * math.sqrt(log_t * llt)
            ratios.append(saddle_point_x0(log_t, alpha, d)["x0"] / x_pred)
        assert all(b > a for a, b in zip(ratios, ratios[1:]))
        assert ratios[-1] == pytest.approx(1.0, abs=0.02)

    def test_alpha_continuity_ladder(self):
        d = 0.6
        xs = [saddle_point_x0(LOG_T, a, d)["x0"] for a in (0.03, 0.02, 0.01)]
        llt = math.log(LOG_T)
        preds = [d * (1.0 - 2.0 * a) * math.sqrt(LOG_T * llt) for a in (0.03, 0.02, 0.01)]
        ratios = [x / p for x, p in zip(xs, preds)]
        # ratios approach 1 smoothly as alpha -> 0
        assert abs(ratios[2] - 1.0) <= abs(ratios[0] - 1.0) + 1e-6
        assert xs[0] < xs[1] < xs[2]

    def test_stationarity(self):
        out = saddle_point_x0(LOG_T, 0.25, 0.5)
        assert abs(f_k_prime(out["x0"], LOG_T, 0.25, 0.5)) < 1e-6 * (
            1.0 + abs(out["f_value"]) / out["x0"]
        )


class TestDensity:
    def test_d_zero(self):
        assert density_large_values(LOG_T, 0.0) == 0.0

    def test_monotone_decreasing_in_d(self):
        vals = [density_large_values(LOG_T, d) for d in (0.1, 0.5, 1.0)]
        assert vals[0] > vals[1] > vals[2]

    def test_critical_d_formula(self):
        llt = math.log(LOG_T)
        expect = math.sqrt((LOG_T + llt) / (2.0 * LOG_T))
        assert critical_density_d(LOG_T) == pytest.approx(expect, rel=1e-12)

    def test_rejects_negative_d(self):
        with pytest.raises(DomainError):
            density_large_values(LOG_T, -0.5)
