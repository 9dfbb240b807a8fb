import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cognet.antenna import (
    KAPPA_DEFAULT,
    UlaSpec,
    expected_gain_power,
    from_ula,
    gain_mixture,
    ideal,
    main_lobe_probability,
    omni,
    sectorized,
    tabulated,
    ula_patterns,
)

KP = 121.0 / 360.0  # kappa' for the default beamwidth constant


def ula_side_gain(M: int) -> float:
    return (1.0 - KP) / (1.0 - KP / M)


class TestGain:
    @given(st.floats(min_value=-10.0, max_value=10.0, allow_nan=False))
    def test_omni_is_unity(self, theta):
        assert omni().gain(theta) == 1.0

    def test_table_instance_mainlobe(self):
        p = from_ula(UlaSpec(M=4))
        assert p.beamwidth == pytest.approx(math.radians(30.25))
        assert p.gain(0.0) == 4.0

    def test_table_instance_sidelobe(self):
        p = from_ula(UlaSpec(M=4))
        assert p.gain(math.pi) == pytest.approx(ula_side_gain(4))
        assert p.gain(math.pi) == pytest.approx(0.7248, abs=5e-5)

    @given(st.floats(min_value=-8.0, max_value=8.0, allow_nan=False))
    def test_even_symmetry(self, theta):
        for p in (from_ula(UlaSpec(M=4)), ideal(3.0, 1.0)):
            assert p.gain(theta) == p.gain(-theta)

    def test_boundary_is_main_lobe(self):
        p = sectorized(2.0, 0.5, 1.0, check_normalization=False)
        assert p.gain(0.5) == 2.0
        assert p.gain(0.5 + 1e-12) == 0.5

    def test_tabulated_lookup(self):
        samples = np.linspace(0.5, 1.5, 64)
        p = tabulated(samples)
        assert p.gain(-math.pi) == pytest.approx(0.5)

    def test_hand_specified_unnormalized_warns(self):
        with pytest.warns(UserWarning, match="average gain"):
            sectorized(4.0, 1.0, 1.0)


class TestFromUla:
    def test_beamwidths_match_element_counts(self):
        assert from_ula(UlaSpec(M=2)).beamwidth == pytest.approx(math.radians(60.5))
        assert from_ula(UlaSpec(M=8)).beamwidth == pytest.approx(math.radians(15.125))

    def test_small_array_rejected(self):
        with pytest.raises(ValueError):
            UlaSpec(M=1)

    def test_normalization_identity(self):
        for M in [2, 3, 4, 8, 16, 64, 256, 1024]:
            p = from_ula(UlaSpec(M=M))
            q = p.beamwidth / (2 * math.pi)
            assert p.main_gain * q + p.side_gain * (1 - q) == pytest.approx(1.0, abs=1e-14)

    def test_m4_values(self):
        p = from_ula(UlaSpec(M=4))
        q = main_lobe_probability(p)
        assert p.main_gain == 4.0
        assert q == pytest.approx(0.08403, abs=5e-6)
        assert p.side_gain == pytest.approx(0.72479, abs=5e-6)


class TestMainLobeProbability:
    def test_full_circle(self):
        assert main_lobe_probability(ideal(1.0, 2 * math.pi)) == pytest.approx(1.0)

    def test_table_values(self):
        assert main_lobe_probability(from_ula(UlaSpec(M=4))) == pytest.approx(30.25 / 360.0)
        assert main_lobe_probability(from_ula(UlaSpec(M=2))) == pytest.approx(60.5 / 360.0)

    def test_undefined_for_omni_and_tabulated(self):
        with pytest.raises(ValueError, match="undefined"):
            main_lobe_probability(omni())
        with pytest.raises(ValueError, match="undefined"):
            main_lobe_probability(tabulated(np.ones(16)))


class TestExpectedGainPower:
    def test_omni(self):
        assert expected_gain_power(omni(), 0.37) == 1.0

    def test_normalized_pattern_first_moment(self):
        for M in (2, 4, 8):
            assert expected_gain_power(from_ula(UlaSpec(M=M)), 1.0) == pytest.approx(1.0, abs=1e-14)

    def test_ideal_moment_against_direct_arithmetic(self):
        e = 2.0 / 3.3
        p = ideal(4.0, math.radians(30.25))
        expected = (30.25 / 360.0) * 4.0 ** e
        assert expected_gain_power(p, e) == pytest.approx(expected, rel=1e-14)
        assert expected == pytest.approx(0.19467389643425818, rel=1e-12)

    def test_ideal_moment_against_angular_monte_carlo(self):
        e = 2.0 / 3.3
        p = ideal(4.0, math.radians(30.25))
        rng = np.random.default_rng(7)
        draws = p.gain(rng.uniform(-math.pi, math.pi, size=1_000_000)) ** e
        assert expected_gain_power(p, e) == pytest.approx(float(np.mean(draws)), abs=3 * float(np.std(draws)) / 1000.0)

    @pytest.mark.parametrize("pattern", [
        omni(),
        from_ula(UlaSpec(M=4)),
        ideal(5.0, 0.8),
        tabulated(np.abs(np.sin(np.linspace(0, 7, 256))) + 0.1),
    ])
    def test_matches_numerical_angular_average(self, pattern):
        e = 2.0 / 3.3
        thetas = (np.arange(2_000_000) + 0.5) / 2_000_000 * 2 * math.pi - math.pi
        ref = float(np.mean(pattern.gain(thetas) ** e))
        assert expected_gain_power(pattern, e) == pytest.approx(ref, abs=1e-6)


def test_gain_mixture_is_a_distribution():
    for p in (omni(), from_ula(UlaSpec(M=8)), ideal(2.0, 1.0)):
        total = sum(w for _, w in gain_mixture(p))
        assert total == pytest.approx(1.0, abs=1e-12)


def test_ula_patterns_m1_is_omni():
    pats = ula_patterns(1, 4)
    assert pats.pt.kind == "omni" and pats.pr.kind == "omni"
    assert pats.st.main_gain == 4.0


def test_kappa_default_is_121_degrees():
    assert KAPPA_DEFAULT == pytest.approx(math.radians(121.0))
