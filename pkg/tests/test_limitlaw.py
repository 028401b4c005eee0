import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from erwlab import limitlaw, moments, walk
from erwlab.errors import CancellationError, SeriesOverflowError


class TestGenFun:
    def test_near_zero(self):
        # B(x)/x -> 1 and M(x) -> 1
        a = 0.7
        x = 1e-6 / moments.rho(a)
        g = limitlaw.genfun(a, x)
        assert abs(g.b / x - 1.0) < 1e-3
        assert abs(g.m - 1.0) < 1e-3

    def test_divergence_at_radius(self):
        a = 2.0 / 3.0
        r = moments.rho(a)
        assert limitlaw.genfun(a, 0.9999 / r).b > 100.0 * limitlaw.genfun(a, 0.9 / r).b

    @pytest.mark.parametrize("a", [0.55, 2.0 / 3.0, 0.75, 0.9])
    def test_matches_series(self, a):
        table = moments.moment_sequence(a, 60)
        powers = np.arange(61)
        x = 0.3 / table.rho
        series = float(np.dot(table.scaled * table.rho**powers, x**powers))
        assert abs(limitlaw.genfun(a, x).m - series) < 1e-10

    def test_m_is_sum_and_increasing(self):
        a = 0.8
        r = moments.rho(a)
        prev = 0.99  # M(0+) = 1
        for frac in np.linspace(0.05, 0.9, 12):
            g = limitlaw.genfun(a, float(frac) / r)
            assert g.m == g.a_even + g.b
            assert g.m >= 1.0
            assert g.m > prev
            prev = g.m

    def test_parity_split_reconstruction(self):
        # M(x) + M(-x) = 2 A(x) up to final rounding of the compositions
        a = 0.75
        r = moments.rho(a)
        for frac in (0.2, 0.5, 0.8):
            g = limitlaw.genfun(a, frac / r)
            m_neg = g.a_even - g.b
            assert abs((g.m + m_neg) - 2.0 * g.a_even) <= 4e-16 * abs(g.a_even)

    def test_pole_constant(self):
        # (1 - rho x) M(x) -> 2a/(a+1)
        for a in (2.0 / 3.0, 0.8):
            r = moments.rho(a)
            target = 2.0 * a / (a + 1.0)
            gaps = []
            for k in (2, 4, 6):
                x = (1.0 - 10.0**-k) / r
                gaps.append(abs(10.0**-k * limitlaw.genfun(a, x).m - target))
            assert gaps[0] > gaps[-1]
            assert gaps[-1] < 1e-4 * target

    def test_domain(self):
        with pytest.raises(ValueError):
            limitlaw.genfun(0.7, 0.0)
        with pytest.raises(ValueError):
            limitlaw.genfun(0.7, 1.0 / moments.rho(0.7))


class TestResiduals:
    def test_implicit_residual_tiny(self):
        a = 0.7
        res = limitlaw.residuals(a, 0.5 / moments.rho(a))
        assert abs(res.r_imp) < 1e-9

    def test_delay_ode_residual(self):
        a = 0.75
        x = 0.4 / moments.rho(a)
        res = limitlaw.residuals(a, x)
        m = limitlaw.genfun(a, x).m
        assert abs(res.r_m) < 1e-6 * m * m

    def test_autonomous_ode_residual(self):
        res = limitlaw.residuals(0.6, 0.7 / moments.rho(0.6))
        assert res.r_b_rel < 1e-5

    @pytest.mark.parametrize("a", [0.55, 0.75, 0.95])
    def test_grid(self, a):
        r = moments.rho(a)
        for frac in np.linspace(0.05, 0.9, 10):
            res = limitlaw.residuals(a, float(frac) / r)
            assert abs(res.r_imp) < 1e-9
            assert res.r_m_rel < 1e-5
            assert res.r_sys_rel < 1e-5
            assert res.r_b_rel < 1e-5

    def test_h_squared_decay(self):
        a = 0.75
        x = 0.5 / moments.rho(a)
        big = limitlaw.residuals(a, x, h_scale=128.0)
        half = limitlaw.residuals(a, x, h_scale=64.0)
        assert 3.0 < abs(big.r_m) / abs(half.r_m) < 5.5

    def test_domain(self):
        with pytest.raises(ValueError):
            limitlaw.residuals(0.7, 0.96 / moments.rho(0.7))


class TestPsiMgf:
    def test_at_zero(self):
        a = 0.8
        v = limitlaw.psi_mgf(a, 0.0)
        assert v.psi == 1.0
        assert v.omega == 1.0
        # xi(0) = E[X] = -E[L1]/rho with X = -L1/rho
        assert_allclose(v.xi, -moments.limit_moment(a, 1) / moments.rho(a), rtol=1e-12)

    def test_growth_ratio(self):
        a = 0.75
        r = moments.rho(a)
        for rr, tol in ((20.0, 0.01), (50.0, 0.005)):
            v = limitlaw.psi_mgf(a, rr)
            ratio = v.psi * (a + 1.0) / (2.0 * math.exp((r * rr) ** (1.0 / a)))
            assert abs(ratio - 1.0) < tol

    def test_xi_and_eta_leading_forms(self):
        a = 0.75
        v = limitlaw.psi_mgf(a, 50.0)
        assert abs(v.xi * a / 50.0 ** (1.0 / a - 1.0) + 1.0) < 0.01
        assert abs(v.eta / limitlaw.eta_asymptote(a, 50.0) - 1.0) < 0.01

    def test_negative_axis(self):
        a = 0.75
        r = moments.rho(a)
        v = limitlaw.psi_mgf(a, -20.0 * r)
        assert v.omega > 1.0
        # |xi(-s)| tracks the same leading power; sign mirrors
        assert v.xi > 0.0
        s = 20.0 * r
        assert abs(abs(v.xi) * a / s ** (1.0 / a - 1.0) - 1.0) < 0.03
        assert abs(v.eta / limitlaw.eta_asymptote(a, s) - 1.0) < 0.05
        assert v.eta >= 0.0

    def test_negative_cap_and_hp_mode(self):
        a = 0.75
        r = moments.rho(a)
        with pytest.raises(CancellationError):
            limitlaw.psi_mgf(a, -31.0 * r)
        hp = limitlaw.psi_mgf(a, -31.0 * r, precision_digits=50)
        assert hp.omega > 0.0
        # hp and double agree where both are valid
        d = limitlaw.psi_mgf(a, -10.0)
        h = limitlaw.psi_mgf(a, -10.0, precision_digits=40)
        assert_allclose(d.omega, h.omega, rtol=1e-10)
        assert_allclose(d.xi, h.xi, rtol=1e-9)

    def test_positive_overflow_guard(self):
        with pytest.raises(SeriesOverflowError):
            limitlaw.psi_mgf(0.75, 1e4)


class TestEtaAsymptote:
    def test_frozen_value(self):
        # a = 3/4, r = 16: sqrt(1/4) 16^(2/3-1) / (3/4) = 2/(3 * 16^(1/3))
        assert_allclose(
            limitlaw.eta_asymptote(0.75, 16.0), 2.0 / (3.0 * 16.0 ** (1.0 / 3.0)), rtol=1e-14
        )
        assert abs(limitlaw.eta_asymptote(0.75, 16.0) - 0.26457) < 5e-5

    def test_power_law_scaling(self):
        a = 0.62
        ratio = limitlaw.eta_asymptote(a, 8.0) / limitlaw.eta_asymptote(a, 4.0)
        assert_allclose(ratio, 2.0 ** (1.0 / (2.0 * a) - 1.0), rtol=1e-14)

    def test_sides_and_domain(self):
        assert limitlaw.eta_asymptote(0.7, 3.0, sign="-") == limitlaw.eta_asymptote(0.7, 3.0)
        with pytest.raises(ValueError):
            limitlaw.eta_asymptote(0.7, 3.0, sign="x")
        with pytest.raises(ValueError):
            limitlaw.eta_asymptote(0.7, -1.0)


class TestTails:
    def test_ratio_identity(self):
        for a in (0.55, 0.75, 0.9):
            ctx = moments.context(a)
            pos = limitlaw.asymptote(ctx, "positive")
            neg = limitlaw.asymptote(ctx, "negative")
            for x in (0.5, 2.0, 8.0):
                # stretch terms are identical floats on both sides and
                # cancel algebraically; compare the prefactor/power route
                lhs = math.exp(
                    math.log(pos.prefactor)
                    - math.log(neg.prefactor)
                    + (pos.power - neg.power) * math.log(x)
                )
                assert_allclose(lhs, limitlaw.tail_ratio(ctx, x), rtol=1e-12)
            for x in (0.5, 2.0):
                # the full log route agrees wherever the stretch magnitudes
                # stay within double rounding of the 1e-12 target
                full = math.exp(
                    limitlaw.tail(ctx, x, "positive", log=True)
                    - limitlaw.tail(ctx, x, "negative", log=True)
                )
                assert_allclose(full, limitlaw.tail_ratio(ctx, x), rtol=1e-12)

    def test_exponent_asymmetry(self):
        for a in np.linspace(0.55, 0.95, 9):
            ctx = moments.context(float(a))
            pos = limitlaw.asymptote(ctx, "positive")
            neg = limitlaw.asymptote(ctx, "negative")
            assert pos.power > neg.power
            assert pos.stretch > 0.0
            assert pos.stretch_power > 2.0
            assert pos.stretch == neg.stretch

    def test_log_scale_limit(self):
        # log tail+ / [-(1-a)(a^a x / rho)^(1/(1-a))] -> 1
        a = 0.75
        ctx = moments.context(a)

        def ratio(x):
            stretch = (1.0 - a) * (a**a * x / ctx.rho) ** (1.0 / (1.0 - a))
            return limitlaw.tail(ctx, x, "positive", log=True) / (-stretch)

        assert abs(ratio(20.0) - 1.0) < 1e-3
        assert abs(ratio(40.0) - 1.0) < abs(ratio(20.0) - 1.0)

    def test_q_mixture(self):
        ctx = moments.context(0.8)
        q = 0.3
        base = limitlaw.tail(ctx, 2.0, "positive")
        assert_allclose(limitlaw.tail(ctx, 2.0, "positive", q=q), q * base, rtol=1e-14)
        assert_allclose(limitlaw.tail(ctx, 2.0, "negative", q=q), (1.0 - q) * base, rtol=1e-14)

    def test_underflow_contract(self):
        ctx = moments.context(0.75)
        assert limitlaw.tail(ctx, 100.0, "positive") == 0.0
        assert limitlaw.tail(ctx, 100.0, "positive", log=True) < -1e5

    def test_density_band_comparison(self):
        # finite-n step density vs the positive asymptote at log scale;
        # deepens as n grows (acceptance pins the full n = 3000 run)
        a = 0.75
        ctx = moments.context(a)

        def max_dev(n):
            row = walk.evolve_distribution(walk.ErwParams.from_a(a), n)[-1]
            x = row.scaled_support(a)
            f = float(n) ** a * row.probs / 2.0
            mask = (f >= 1e-8) & (f <= 1e-3) & (x > 0)
            lt = np.array([limitlaw.tail(ctx, float(v), "positive", log=True) for v in x[mask]])
            return float(np.abs(np.log(f[mask]) / lt - 1.0).max())

        assert max_dev(800) > max_dev(1600)

    def test_domain(self):
        ctx = moments.context(0.7)
        with pytest.raises(ValueError):
            limitlaw.tail(ctx, 0.0, "positive")
        with pytest.raises(ValueError):
            limitlaw.tail(ctx, 1.0, "sideways")
