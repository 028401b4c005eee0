import math

import mpmath as mp
import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import special as sp

from erwlab import specfun
from erwlab.errors import CancellationError


class TestGammaLn:
    def test_trivial_zeros(self):
        assert abs(specfun.gamma_ln(1.0)) < 5e-15
        assert abs(specfun.gamma_ln(2.0)) < 5e-15

    def test_quarter(self):
        # reflection + duplication oracle: Gamma(1/4) = 3.6256099082219083
        assert_allclose(specfun.gamma_ln(0.25), math.log(3.6256099082219083), rtol=1e-14)

    @pytest.mark.parametrize("x", np.geomspace(1e-3, 200.0, 60))
    def test_against_scipy(self, x):
        mine = specfun.gamma_ln(float(x))
        ref = sp.gammaln(x)
        assert abs(mine - ref) <= 1e-13 * max(1.0, abs(ref))

    def test_domain(self):
        with pytest.raises(ValueError):
            specfun.gamma_ln(0.0)
        with pytest.raises(ValueError):
            specfun.gamma_ln(-1.5)


class TestDigamma:
    def test_log2_identity(self):
        # psi(1) - psi(1/2) = 2 log 2
        got = specfun.digamma(1.0) - specfun.digamma(0.5)
        assert_allclose(got, 2.0 * math.log(2.0), rtol=1e-14)

    @pytest.mark.parametrize("x", np.geomspace(1e-2, 180.0, 40))
    def test_against_scipy(self, x):
        ref = sp.digamma(x)
        assert abs(specfun.digamma(float(x)) - ref) <= 1e-13 * max(1.0, abs(ref))

    def test_domain(self):
        with pytest.raises(ValueError):
            specfun.digamma(-0.5)


class TestPochhammer:
    def test_matches_product(self):
        x = 0.37
        prod = 1.0
        for i in range(6):
            prod *= x + i
        assert_allclose(math.exp(specfun.poch_ln(x, 6)), prod, rtol=1e-13)

    @pytest.mark.parametrize("x", [1.0 / 7.0, 2.0 / 7.0])
    def test_ratio_asymptotics(self, x):
        # (x)_n / n! = n^(x-1)/Gamma(x) (1 + x(x-1)/(2n) + O(n^-2))
        n = 1000
        got = math.exp(specfun.poch_ln(x, n) - specfun.gamma_ln(n + 1.0))
        lead = n ** (x - 1.0) / math.exp(specfun.gamma_ln(x))
        assert abs(got / lead - 1.0) < 2.0 * abs(x * (x - 1.0)) / (2.0 * n) + 1e-3


class TestHyp2F1:
    def test_at_zero(self):
        assert specfun.hyp2f1(0.3, 1.7, 2.2, 0.0).value == 1.0

    def test_log_identity(self):
        # 2F1(1,1;2;z) = -log(1-z)/z
        got = specfun.hyp2f1(1.0, 1.0, 2.0, 0.5)
        assert_allclose(got.value, 2.0 * math.log(2.0), rtol=1e-13)

    @pytest.mark.parametrize("z", [-0.3, -0.9, -4.0, -25.0, 0.4])
    def test_against_mpmath(self, z):
        a, b, c = 0.5, -0.75, 0.25
        ref = float(mp.hyp2f1(a, b, c, z))
        got = specfun.hyp2f1(a, b, c, z)
        assert_allclose(got.value, ref, rtol=5e-13)
        assert abs(got.value - ref) <= 10.0 * got.abs_error_estimate + 1e-15

    def test_polynomial_termination(self):
        # alpha = -2 terminates: 2F1(-2, b; c; z) is a quadratic
        b, c, z = 1.3, 2.1, 0.7
        expect = 1.0 - 2.0 * b / c * z + b * (b + 1.0) / (c * (c + 1.0)) * z * z
        assert_allclose(specfun.hyp2f1(-2.0, b, c, z).value, expect, rtol=1e-14)

    def test_domain(self):
        with pytest.raises(ValueError):
            specfun.hyp2f1(1.0, 1.0, -2.0, 0.5)
        with pytest.raises(ValueError):
            specfun.hyp2f1(1.0, 1.0, 2.0, 1.0)


class TestMittagLeffler:
    def test_exponential(self):
        assert_allclose(specfun.mittag_leffler(1.0, 1.0).value, math.e, rtol=1e-14)
        for z in (0.3, 2.5, -3.0):
            assert_allclose(specfun.mittag_leffler(1.0, z).value, math.exp(z), rtol=1e-12)

    def test_at_zero(self):
        assert specfun.mittag_leffler(0.7, 0.0).value == 1.0

    def test_half_erfc(self):
        # E_{1/2}(z) = exp(z^2) erfc(-z)
        ref = math.e * sp.erfc(-1.0)
        assert_allclose(specfun.mittag_leffler(0.5, 1.0).value, ref, rtol=1e-12)

    def test_asymptotic_switch_is_seamless(self):
        alpha = 0.8
        z_lo = (35.0**alpha) * 0.999
        z_hi = (35.0**alpha) * 1.001
        lo = specfun.mittag_leffler(alpha, z_lo)
        hi = specfun.mittag_leffler(alpha, z_hi)
        assert lo.method == "series"
        assert hi.method == "asymptotic"
        # both sides approximate exp(z^(1/alpha))/alpha to high accuracy here
        bridge = math.exp(z_hi ** (1.0 / alpha)) / alpha
        assert_allclose(hi.value, bridge, rtol=1e-12)
        assert_allclose(lo.value, math.exp(z_lo ** (1.0 / alpha)) / alpha, rtol=1e-10)

    def test_cancellation_guard(self):
        with pytest.raises(CancellationError):
            specfun.mittag_leffler(0.6, -25.0)
        with pytest.raises(CancellationError):
            specfun.mittag_leffler(0.75, -200.0)

    def test_high_precision_mode(self):
        got = specfun.mittag_leffler(0.75, -20.0, precision_digits=40)
        with mp.workdps(50):
            ref = float(mp.nsum(lambda n: mp.mpf(-20.0) ** n / mp.gamma(1 + mp.mpf(0.75) * n), [0, mp.inf]))
        assert_allclose(got.value, ref, rtol=1e-25 + 1e-12)
        assert got.method == "series-hp"

    def test_error_estimate_honest(self):
        for alpha, z in ((0.75, 3.0), (0.6, -4.0), (0.9, 12.0)):
            got = specfun.mittag_leffler(alpha, z)
            with mp.workdps(40):
                ref = float(mp.nsum(lambda n: mp.mpf(z) ** n / mp.gamma(1 + mp.mpf(alpha) * n), [0, mp.inf]))
            assert abs(got.value - ref) <= max(got.abs_error_estimate, 4e-16 * abs(ref))


class TestPrabhakar:
    def test_reduces_to_mittag_leffler(self):
        for z in (-2.0, 0.5, 2.0):
            ml = specfun.mittag_leffler(0.75, z).value
            pr = specfun.prabhakar(0.75, 1.0, 1.0, z).value
            assert_allclose(pr, ml, rtol=1e-12)

    def test_at_zero(self):
        beta = 1.7
        assert_allclose(
            specfun.prabhakar(0.5, beta, 2.3, 0.0).value,
            math.exp(-specfun.gamma_ln(beta)),
            rtol=1e-14,
        )

    def test_against_mpmath_series(self):
        alpha, beta, gamma_p, z = 0.6, 1.3, 0.5, -5.0
        with mp.workdps(40):
            ref = float(
                mp.nsum(
                    lambda n: mp.rf(gamma_p, n) * mp.mpf(z) ** n / (mp.factorial(n) * mp.gamma(beta + alpha * n)),
                    [0, mp.inf],
                )
            )
        got = specfun.prabhakar(alpha, beta, gamma_p, z)
        assert_allclose(got.value, ref, rtol=1e-9)
        assert abs(got.value - ref) <= max(got.abs_error_estimate, 4e-16 * abs(ref))

    def test_large_argument_ratio(self):
        # E^g_{a,1}(r) / [r^((g-1)/a) e^(r^(1/a)) / (a^g Gamma(g))] -> 1
        alpha, gamma_p = 0.75, 1.0 / 7.0
        for r, tol in ((136.0, 0.02), (1000.0, 0.006)):
            ln_asym = (
                ((gamma_p - 1.0) / alpha) * math.log(r)
                - gamma_p * math.log(alpha)
                - specfun.gamma_ln(gamma_p)
                + r ** (1.0 / alpha)
            )
            ln_series = specfun.prabhakar_ln(alpha, 1.0, gamma_p, r)
            assert abs(ln_series - ln_asym) < tol

    def test_negative_argument_decay(self):
        # E^g_{a,b}(-r) = O(r^-g): decreasing in r; double precision up to
        # the cancellation window, high-precision mode beyond it
        alpha, beta, gamma_p = 0.75, 1.0, 0.4
        vals = [specfun.prabhakar(alpha, beta, gamma_p, -r).value for r in (2.0, 4.0, 8.0)]
        assert vals[0] > vals[1] > vals[2] > 0.0
        far = [
            specfun.prabhakar(alpha, beta, gamma_p, -r, precision_digits=60).value
            for r in (16.0, 30.0)
        ]
        assert vals[2] > far[0] > far[1] > 0.0


class TestFKernel:
    @pytest.mark.parametrize("a", [0.55, 2.0 / 3.0, 0.75, 0.9])
    @pytest.mark.parametrize("z", [0.3, 0.9, 1.05, 1.15, 2.0, 6.0])
    def test_regimes_agree_with_quadrature(self, a, z):
        quad = specfun.f_eval(a, z, method="quadrature")
        auto = specfun.f_eval(a, z)
        assert abs(auto.value - quad.value) < 1e-9
        assert abs(auto.value - quad.value) <= 10.0 * (
            auto.abs_error_estimate + quad.abs_error_estimate
        ) + 1e-14

    def test_three_regimes_mutual(self):
        a = 2.0 / 3.0
        vals = [
            specfun.f_eval(a, 1.0, method=m).value
            for m in ("quadrature", "hypergeometric",)
        ]
        assert abs(vals[0] - vals[1]) < 1e-9
        vals = [
            specfun.f_eval(a, 1.12, method=m).value
            for m in ("quadrature", "series", "hypergeometric")
        ]
        assert max(vals) - min(vals) < 1e-9

    def test_small_z_limit(self):
        # F(z) - z^(-1/a) -> -rho^(1/a); the gap closes like z^(2-1/a)
        a = 0.7
        rr = specfun.rho_root(a)
        gaps = []
        for z in (1e-3, 1e-7):
            gaps.append(abs(specfun.f_eval(a, z).value - z ** (-1.0 / a) + rr))
        assert gaps[1] < gaps[0]
        assert gaps[1] < 5e-4

    def test_large_z_limit(self):
        # F(z) (a+1) z^(1+1/a) -> 1
        a = 0.8
        v = specfun.f_eval(a, 100.0).value * (a + 1.0) * 100.0 ** (1.0 + 1.0 / a)
        assert abs(v - 1.0) < 1e-4

    def test_strictly_decreasing(self):
        rng = np.random.default_rng(7)
        a = 0.62
        for _ in range(25):
            z1, z2 = np.sort(rng.uniform(0.05, 8.0, size=2))
            if z1 == z2:
                continue
            assert specfun.f_eval(a, float(z1)).value > specfun.f_eval(a, float(z2)).value > 0.0

    def test_domain(self):
        with pytest.raises(ValueError):
            specfun.f_eval(0.4, 1.0)
        with pytest.raises(ValueError):
            specfun.f_eval(0.7, -1.0)
        with pytest.raises(ValueError):
            specfun.f_eval(0.7, 1.0, method="nope")


class TestFInverse:
    @pytest.mark.parametrize("y", [0.01, 1.0, 100.0])
    def test_round_trip(self, y):
        a = 0.7
        x = specfun.f_inverse(a, y)
        assert abs(specfun.f_eval(a, x).value - y) < 1e-10 * max(1.0, y)

    def test_large_y_leading(self):
        a = 0.66
        rr = specfun.rho_root(a)
        for y in (1e4, 1e6):
            x = specfun.f_inverse(a, y)
            # large y means small x where F ~ x^(-1/a) - rho^(1/a)
            assert abs(x * (y + rr) ** a - 1.0) < 1e-3

    def test_small_y_second_order(self):
        # F_inv(y) = ((a+1)y)^(-a/(a+1)) (1 - c1 y^(2a/(a+1)) + o(...)),
        # c1 = a (a+1)^(2a/(a+1)) / (2 (3a+1))
        a = 0.7
        c1 = a * (a + 1.0) ** (2.0 * a / (a + 1.0)) / (2.0 * (3.0 * a + 1.0))
        for y, tol in ((1e-4, 2e-7), (1e-5, 1e-8)):
            x = specfun.f_inverse(a, y)
            approx = ((a + 1.0) * y) ** (-a / (a + 1.0)) * (1.0 - c1 * y ** (2.0 * a / (a + 1.0)))
            assert abs(x / approx - 1.0) < tol

    def test_domain(self):
        with pytest.raises(ValueError):
            specfun.f_inverse(0.7, -2.0)
        with pytest.raises(ValueError):
            specfun.f_inverse(1.2, 1.0)
