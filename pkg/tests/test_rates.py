import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from secoff.rates import (
    Mode,
    PowerConfig,
    UeLinkGains,
    rate_eavesdropper,
    rate_legitimate,
    secrecy_rate_ue,
    secrecy_sum_rate,
)

POWER = PowerConfig()  # p_u=0.1, p_r=0.012, p_j=0.08, sigma2=1e-13
GAINS = UeLinkGains(g_ul=1.25e-9, g_uh=1.25e-9, g_ue=4.098e-10,
                    g_hl=4e-8, g_he=1.25e-8)


def hand_legit(mode, g, p):
    # straight transcription of the two-mode rate table
    if mode is Mode.RELAY:
        return 0.5 * min(math.log2(1 + (p.p_r * g.g_hl + p.p_u * g.g_ul) / p.sigma2),
                         math.log2(1 + p.p_u * g.g_uh / p.sigma2))
    return math.log2(1 + p.p_u * g.g_ul / (p.p_j * g.g_hl + p.sigma2))


def hand_eve(mode, g, p):
    if mode is Mode.RELAY:
        return 0.5 * math.log2(1 + (p.p_r * g.g_he + p.p_u * g.g_ue) / p.sigma2)
    return math.log2(1 + p.p_u * g.g_ue / (p.p_j * g.g_he + p.sigma2))


class TestWorkedExamples:
    def test_relay_legitimate(self):
        r = rate_legitimate(Mode.RELAY, GAINS, POWER)
        assert math.isclose(r, hand_legit(Mode.RELAY, GAINS, POWER), rel_tol=1e-9)
        assert math.isclose(r, 5.14443303708291, rel_tol=1e-6)

    def test_jam_legitimate(self):
        r = rate_legitimate(Mode.JAM, GAINS, POWER)
        assert math.isclose(r, hand_legit(Mode.JAM, GAINS, POWER), rel_tol=1e-9)
        assert math.isclose(r, 0.055280740657668, rel_tol=1e-6)

    def test_relay_eavesdropper(self):
        r = rate_eavesdropper(Mode.RELAY, GAINS, POWER)
        assert math.isclose(r, hand_eve(Mode.RELAY, GAINS, POWER), rel_tol=1e-9)
        assert math.isclose(r, 5.449980533291952, rel_tol=1e-6)

    def test_jam_eavesdropper(self):
        r = rate_eavesdropper(Mode.JAM, GAINS, POWER)
        assert math.isclose(r, hand_eve(Mode.JAM, GAINS, POWER), rel_tol=1e-9)
        assert math.isclose(r, 0.0579366720222211, rel_tol=1e-6)

    def test_silent_user(self):
        g = UeLinkGains(g_ul=0.0, g_uh=0.0, g_ue=0.0, g_hl=4e-8, g_he=1.25e-8)
        assert rate_legitimate(Mode.RELAY, g, POWER) == 0.0
        assert rate_legitimate(Mode.JAM, g, POWER) == 0.0

    def test_deaf_eavesdropper(self):
        g = UeLinkGains(g_ul=1.25e-9, g_uh=1.25e-9, g_ue=0.0, g_hl=4e-8, g_he=0.0)
        assert rate_eavesdropper(Mode.JAM, g, POWER) == 0.0


class TestSecrecyRate:
    def test_equal_rates_clamp_to_zero(self):
        g = UeLinkGains(g_ul=1e-9, g_uh=1e-9, g_ue=1e-9, g_hl=2e-8, g_he=2e-8)
        assert secrecy_rate_ue(Mode.JAM, g, POWER) == 0.0

    def test_negative_margin_clamps(self):
        # relay example: eavesdropper rate exceeds the legitimate rate
        assert secrecy_rate_ue(Mode.RELAY, GAINS, POWER) == 0.0

    def test_positive_margin_kept(self):
        g = UeLinkGains(g_ul=1.25e-9, g_uh=1.25e-9, g_ue=0.0, g_hl=4e-8, g_he=0.0)
        expected = rate_legitimate(Mode.JAM, g, POWER)
        assert secrecy_rate_ue(Mode.JAM, g, POWER) == pytest.approx(expected, rel=1e-12)

    def test_always_nonnegative_random(self, rng):
        for _ in range(200):
            g = UeLinkGains(*(10.0 ** rng.uniform(-13, -6, 5)))
            for mode in Mode:
                assert secrecy_rate_ue(mode, g, POWER) >= 0.0


class TestSecrecySumRate:
    def _gains(self, rng, n):
        return [UeLinkGains(*(10.0 ** rng.uniform(-12, -7, 5))) for _ in range(n)]

    def test_all_zero_decisions(self, rng):
        assert secrecy_sum_rate(Mode.JAM, [0, 0, 0], self._gains(rng, 3), POWER) == 0.0

    def test_singleton(self, rng):
        gains = self._gains(rng, 1)
        total = secrecy_sum_rate(Mode.RELAY, [1], gains, POWER)
        assert total == pytest.approx(float(secrecy_rate_ue(Mode.RELAY, gains[0], POWER)), rel=1e-12)

    def test_all_patterns_match_direct_sum(self, rng):
        gains = self._gains(rng, 3)
        per_ue = [float(secrecy_rate_ue(Mode.JAM, g, POWER)) for g in gains]
        for pattern in range(8):
            z = [(pattern >> u) & 1 for u in range(3)]
            expected = sum(r for z_u, r in zip(z, per_ue) if z_u)
            assert secrecy_sum_rate(Mode.JAM, z, gains, POWER) == pytest.approx(expected, rel=1e-12, abs=1e-15)

    def test_length_mismatch_raises(self, rng):
        with pytest.raises(ValueError):
            secrecy_sum_rate(Mode.JAM, [1, 0], self._gains(rng, 3), POWER)

    def test_monotone_in_z(self, rng):
        gains = self._gains(rng, 4)
        z = [0, 1, 0, 1]
        base = secrecy_sum_rate(Mode.RELAY, z, gains, POWER)
        z2 = [1, 1, 0, 1]
        assert secrecy_sum_rate(Mode.RELAY, z2, gains, POWER) >= base


class TestProperties:
    def test_relay_bottleneck_bound(self, rng):
        for _ in range(200):
            g = UeLinkGains(*(10.0 ** rng.uniform(-13, -6, 5)))
            bound = 0.5 * math.log2(1 + POWER.p_u * g.g_uh / POWER.sigma2)
            assert rate_legitimate(Mode.RELAY, g, POWER) <= bound + 1e-12

    @given(st.floats(0.01, 0.5), st.floats(0.01, 2.0))
    @settings(max_examples=50)
    def test_jam_rates_decrease_in_jam_power(self, p_j, factor):
        p1 = PowerConfig(p_u=0.1, p_r=0.012, p_j=p_j, sigma2=1e-13)
        p2 = PowerConfig(p_u=0.1, p_r=0.012, p_j=p_j * (1.0 + factor), sigma2=1e-13)
        assert rate_legitimate(Mode.JAM, GAINS, p2) < rate_legitimate(Mode.JAM, GAINS, p1)
        assert rate_eavesdropper(Mode.JAM, GAINS, p2) < rate_eavesdropper(Mode.JAM, GAINS, p1)

    def test_pure_functions(self):
        a = rate_legitimate(Mode.RELAY, GAINS, POWER)
        b = rate_legitimate(Mode.RELAY, GAINS, POWER)
        assert a == b

    def test_extended_precision_transcription(self, rng):
        # independent high-precision re-implementation over random tuples
        import mpmath as mp

        mp.mp.dps = 50

        def mp_rates(mode, g, p):
            s2 = mp.mpf(p.sigma2)
            if mode is Mode.RELAY:
                rd = mp.mpf("0.5") * min(
                    mp.log(1 + (p.p_r * mp.mpf(g.g_hl) + p.p_u * mp.mpf(g.g_ul)) / s2) / mp.log(2),
                    mp.log(1 + p.p_u * mp.mpf(g.g_uh) / s2) / mp.log(2))
                re_ = mp.mpf("0.5") * mp.log(
                    1 + (p.p_r * mp.mpf(g.g_he) + p.p_u * mp.mpf(g.g_ue)) / s2) / mp.log(2)
            else:
                rd = mp.log(1 + p.p_u * mp.mpf(g.g_ul) / (p.p_j * mp.mpf(g.g_hl) + s2)) / mp.log(2)
                re_ = mp.log(1 + p.p_u * mp.mpf(g.g_ue) / (p.p_j * mp.mpf(g.g_he) + s2)) / mp.log(2)
            return float(rd), float(re_)

        for _ in range(250):
            g = UeLinkGains(*(10.0 ** rng.uniform(-13, -6, 5)))
            p = PowerConfig(p_u=10.0 ** rng.uniform(-2, 0), p_r=10.0 ** rng.uniform(-3, -1),
                            p_j=10.0 ** rng.uniform(-2, 0), sigma2=1e-13)
            for mode in Mode:
                rd_ref, re_ref = mp_rates(mode, g, p)
                assert math.isclose(float(rate_legitimate(mode, g, p)), rd_ref, rel_tol=1e-12)
                assert math.isclose(float(rate_eavesdropper(mode, g, p)), re_ref, rel_tol=1e-12)
