import dataclasses
import math

import numpy as np
import pytest

from cognet.antenna import ula_patterns, uniform_patterns
from cognet.coverage_primary import (
    coverage_primary_exact,
    coverage_primary_simplified,
    kappa_p,
    kernel_params,
    laplace_secondary_interference,
    n3_general,
    n3_ula,
)
from cognet.geometry import TWO_PI
from cognet.scenario import db_to_linear, default_scenario

KP = 121.0 / 360.0


class TestNoiseOnlyLimits:
    def test_no_interferers_closed_form(self, sc_default):
        sc = dataclasses.replace(sc_default, lambda_s=0.0)
        g0 = sc.patterns.pt.boresight() * sc.patterns.pr.boresight()
        for tau in (0.1, 1.0, 10.0):
            expected = math.exp(-tau * sc.sigma2 * sc.r_p ** sc.alpha / (sc.p_p * g0))
            assert coverage_primary_exact(tau, sc) == pytest.approx(expected, rel=1e-12)
            assert coverage_primary_simplified(tau, sc) == pytest.approx(expected, rel=1e-12)

    def test_no_noise_no_interferers(self, sc_default):
        sc = dataclasses.replace(sc_default, lambda_s=0.0, sigma2=0.0)
        assert coverage_primary_exact(1.0, sc) == pytest.approx(1.0, rel=1e-15)

    def test_zero_threshold_rejected(self, sc_default):
        with pytest.raises(ValueError):
            coverage_primary_exact(0.0, sc_default)


class TestSimplifiedVsExact:
    @pytest.mark.parametrize("m", [1, 4])
    def test_small_grid(self, m):
        sc0 = default_scenario().with_ula(m, m)
        for tau_db in (-6.0, 0.0, 6.0):
            for rho in (1e-11, 1e-9, 1e-7):
                sc = sc0.with_rho(rho)
                tau = db_to_linear(tau_db)
                exact = coverage_primary_exact(tau, sc)
                simplified = coverage_primary_simplified(tau, sc)
                assert simplified == pytest.approx(exact, rel=1e-3)

    def test_high_density(self, sc_default):
        sc = dataclasses.replace(sc_default, lambda_s=8e-4)
        assert coverage_primary_simplified(1.0, sc) == pytest.approx(
            coverage_primary_exact(1.0, sc), rel=1e-3
        )


class TestLaplaceTransform:
    def test_at_zero(self, sc_default):
        assert laplace_secondary_interference(0.0, sc_default) == 1.0

    def test_no_interferers(self, sc_default):
        sc = dataclasses.replace(sc_default, lambda_s=0.0)
        assert laplace_secondary_interference(1e3, sc) == 1.0

    def test_consistency_with_coverage(self, sc_default):
        tau = 2.0
        g0 = sc_default.patterns.pt.boresight() * sc_default.patterns.pr.boresight()
        s = kappa_p(sc_default) * tau / sc_default.rho
        noise = math.exp(-tau * sc_default.sigma2 * sc_default.r_p ** sc_default.alpha / (sc_default.p_p * g0))
        assert coverage_primary_exact(tau, sc_default) == pytest.approx(
            noise * laplace_secondary_interference(s, sc_default), rel=1e-9
        )

    def test_bounds_and_monotonicity(self, sc_default):
        svals = np.logspace(2, 7, 8)
        lt = [laplace_secondary_interference(float(s), sc_default) for s in svals]
        assert all(0.0 < v <= 1.0 for v in lt)
        assert all(b <= a + 1e-12 for a, b in zip(lt, lt[1:]))


class TestRadialKernelDecomposition:
    def test_deficit_integral_matches_kernel_closed_form(self, sc_default):
        """At fixed gains, the radial integral of the restricted-fading
        deficit equals (1/alpha)(c/rho)^(2/alpha) times the n1/n2
        bracket -- the content of the kernel simplification."""
        from cognet.coverage_primary import _restricted_fading_deficit
        from cognet.numerics import integrate_radial, n1, n2

        sc = sc_default
        s_exp = 2.0 / sc.alpha
        for gains, s in ((16.0, 1e5), (0.7, 4e5)):
            c = sc.p_s * gains
            a = s * sc.rho
            scale = math.sqrt((c / sc.rho) ** (1 / sc.alpha) * (c * s) ** (1 / sc.alpha))
            val = integrate_radial(
                lambda x: _restricted_fading_deficit(x, c, sc.rho, s, sc.alpha), scale=scale
            )
            bracket = a ** s_exp * n1(sc.alpha) - math.gamma(s_exp) + n2(sc.alpha, a)
            closed = (1.0 / sc.alpha) * (c / sc.rho) ** s_exp * bracket
            # the x-space route is roundoff-limited near the deficit's
            # small-radius cancellation; 1e-5 is its achievable accuracy
            assert val == pytest.approx(closed, rel=1e-5)


class TestKernelParams:
    def test_kappa_p_sectorized(self, sc_default):
        expected = sc_default.rho * sc_default.r_p ** sc_default.alpha / (sc_default.p_p * 16.0)
        assert kappa_p(sc_default) == pytest.approx(expected, rel=1e-12)

    def test_params_bundle(self, sc_default):
        kp = kernel_params(sc_default)
        assert kp.kappa_p > 0 and kp.alpha == sc_default.alpha
        assert kp.n3 == pytest.approx(n3_general(sc_default.patterns, sc_default.alpha))


class TestN3:
    def test_omni(self):
        assert n3_general(ula_patterns(1, 1), 3.3) == pytest.approx(TWO_PI, rel=1e-14)

    def test_sectorized_matches_moment_product(self):
        pats = ula_patterns(4, 4)
        e = 2.0 / 3.3
        q = pats.pr.beamwidth / TWO_PI
        factor_pr = q * pats.pr.main_gain ** e + (1 - q) * pats.pr.side_gain ** e
        q_st = pats.st.beamwidth / TWO_PI
        factor_st = q_st * pats.st.main_gain ** e + (1 - q_st) * pats.st.side_gain ** e
        assert n3_general(pats, 3.3) == pytest.approx(TWO_PI * factor_pr * factor_st, rel=1e-14)

    def test_ideal(self):
        import cognet.antenna as ant

        p = ant.ideal(4.0, math.radians(30.25))
        pats = uniform_patterns(p)
        e = 2.0 / 3.3
        q = 30.25 / 360.0
        assert n3_general(pats, 3.3) == pytest.approx(TWO_PI * q * q * 16.0 ** e, rel=1e-13)

    def test_brute_force_double_quadrature(self):
        # direct 2-D average over (theta, omega) on offset grids
        pats = ula_patterns(4, 2)
        e = 2.0 / 3.3
        thetas = (np.arange(20001) + 0.5) / 20001 * TWO_PI - math.pi
        omegas = (np.arange(163) + 0.5) / 163 * TWO_PI - math.pi
        acc = 0.0
        g_pr = pats.pr.gain(thetas) ** e
        for w in omegas:
            acc += float(np.mean(g_pr * pats.st.gain(thetas - math.pi - w) ** e))
        brute = TWO_PI * acc / len(omegas)
        assert n3_general(pats, 3.3) == pytest.approx(brute, rel=2e-3)

    @pytest.mark.parametrize("m", [2, 4, 8, 64])
    def test_ula_closed_form(self, m):
        pats = ula_patterns(m, m)
        assert n3_ula(m, m, KP, 3.3) == pytest.approx(n3_general(pats, 3.3), rel=1e-12)

    def test_swap_symmetry(self):
        assert n3_ula(4, 8, KP, 3.3) == pytest.approx(n3_ula(8, 4, KP, 3.3), rel=1e-15)

    def test_monotone_in_elements(self):
        vals = [n3_ula(m, 4, KP, 3.3) for m in range(2, 257)]
        assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))

    def test_flat_sector_is_full_circle(self):
        import cognet.antenna as ant

        pats = uniform_patterns(ant.sectorized(1.0, 1.0, 1.0, check_normalization=False))
        assert n3_general(pats, 3.3) == pytest.approx(TWO_PI, rel=1e-14)


class TestScalingInvariance:
    def test_ten_db_shift(self, sc_default):
        sc = sc_default
        scaled = dataclasses.replace(
            sc, rho=sc.rho * 10.0, sigma2=sc.sigma2 * 10.0, p_s=sc.p_s * 10.0, p_p=sc.p_p * 100.0
        )
        for tau in (0.25, 1.0, 4.0):
            base = coverage_primary_simplified(tau, sc)
            shifted = coverage_primary_simplified(tau * 10.0, scaled)
            assert abs(shifted - base) < 1e-9


class TestMonotonicity:
    def test_in_tau(self, sc_default):
        taus = np.logspace(-2, 2, 15)
        vals = [coverage_primary_simplified(float(t), sc_default) for t in taus]
        assert all(0.0 <= v <= 1.0 for v in vals)
        assert all(b <= a for a, b in zip(vals, vals[1:]))

    def test_in_density(self, sc_default):
        vals = [
            coverage_primary_simplified(1.0, dataclasses.replace(sc_default, lambda_s=lam))
            for lam in (0.0, 4e-5, 8e-5, 8e-4)
        ]
        assert all(b <= a for a, b in zip(vals, vals[1:]))

    def test_in_threshold(self, sc_default):
        vals = [coverage_primary_simplified(1.0, sc_default.with_rho(float(r))) for r in np.logspace(-13, -5, 12)]
        assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))
