import cmath
import math

import numpy as np
import pytest

from plcsim.channel import (
    ChannelEvaluationError,
    ChannelParams,
    FrequencyResponse,
    PathParams,
    ctf_at,
    power_db,
    sample_response,
    subcarrier_gains,
    table1_channel,
)
from plcsim.ofdm import default_ofdm


def single_path(g=1.0, c=0.0, ell=10.0, a0=0.0, a1=0.0, a_scale=1.0):
    return ChannelParams(
        a_scale=a_scale, a0=a0, a1=a1, k_exp=2.21, k2_exp=0.34,
        phase_velocity=2e8, paths=(PathParams(g=g, c=c, ell=ell),),
    )


class TestCtfAt:
    def test_attenuation_free_single_path(self):
        params = single_path(ell=25.0)
        f = 3.7e6
        gain = ctf_at(params, f)
        assert abs(abs(gain) - 1.0) < 1e-12
        expected_phase = -2 * math.pi * f * 25.0 / 2e8
        assert cmath.isclose(gain, cmath.exp(1j * expected_phase), rel_tol=1e-12)

    def test_dc_value_is_scaled_gain_sum(self):
        # at f=0 with a0=0 every exponential is 1 and the c*f^k2 term vanishes
        params = table1_channel(a0=0.0)
        g_sum = -0.14 + 0.61 - 6.61 - 0.38 - 1.65
        assert g_sum == pytest.approx(-8.17)
        assert ctf_at(params, 0.0) == pytest.approx(params.a_scale * g_sum)

    def test_5mhz_against_straight_line_oracle(self):
        # frozen from an independent term-by-term evaluation at f = 5 MHz
        expected = 6.004457503673319e-06 - 2.9419527606954607e-05j
        got = ctf_at(table1_channel(), 5e6)
        assert cmath.isclose(got, expected, rel_tol=1e-12)

    def test_negative_frequency_rejected(self):
        with pytest.raises(ValueError):
            ctf_at(table1_channel(), -1.0)

    def test_overflow_reported_not_saturated(self):
        with pytest.raises(ChannelEvaluationError):
            ctf_at(table1_channel(), 1e300)

    def test_linearity_in_amplitude_scale(self):
        f = np.linspace(2e6, 100e6, 64)
        base = ctf_at(table1_channel(), f)
        doubled = ctf_at(table1_channel(a_scale=2 * 2.4 * 10**-5.3), f)
        assert np.array_equal(doubled, 2.0 * base)  # power-of-two scale is exact

    def test_path_additivity(self):
        params = table1_channel()
        f = np.linspace(1.8e6, 100e6, 200)
        total = ctf_at(params, f)
        parts = sum(
            ctf_at(
                ChannelParams(
                    a_scale=params.a_scale, a0=params.a0, a1=params.a1,
                    k_exp=params.k_exp, k2_exp=params.k2_exp,
                    phase_velocity=params.phase_velocity, paths=(p,),
                ),
                f,
            )
            for p in params.paths
        )
        assert np.max(np.abs(total - parts) / np.abs(total)) < 1e-12

    def test_zero_attenuation_magnitude_flat(self):
        params = single_path(ell=42.0)
        mags = np.abs(ctf_at(params, np.linspace(1e6, 90e6, 50)))
        assert np.max(np.abs(mags - mags[0])) < 1e-12


class TestSampleResponse:
    def test_degenerate_band_rejected(self):
        with pytest.raises(ValueError):
            sample_response(table1_channel(), 5e6, 5e6, 10)

    def test_two_points_are_endpoints(self):
        resp = sample_response(table1_channel(), 2e6, 100e6, 2)
        assert list(resp.freqs) == [2e6, 100e6]

    def test_pointwise_matches_ctf(self):
        params = table1_channel()
        resp = sample_response(params, 1.8e6, 100e6, 4096)
        assert np.array_equal(resp.gains, ctf_at(params, resp.freqs))

    def test_deterministic_bit_identical(self):
        a = sample_response(table1_channel(), 1.8e6, 100e6, 512)
        b = sample_response(table1_channel(), 1.8e6, 100e6, 512)
        assert np.array_equal(a.gains, b.gains)
        assert np.array_equal(power_db(a), power_db(b))


class TestPowerDb:
    def test_unit_gain_is_zero_db(self):
        resp = FrequencyResponse(freqs=np.array([1.0]), gains=np.array([1.0 + 0j]))
        assert power_db(resp)[0] == 0.0

    def test_tenth_gain_is_minus_twenty(self):
        resp = FrequencyResponse(freqs=np.array([1.0]), gains=np.array([0.1 + 0j]))
        assert power_db(resp)[0] == pytest.approx(-20.0)

    def test_zero_gain_maps_to_minus_inf(self):
        resp = FrequencyResponse(freqs=np.array([1.0]), gains=np.array([0.0 + 0j]))
        assert power_db(resp)[0] == -math.inf

    def test_table1_curve_finite(self):
        resp = sample_response(table1_channel(), 1.8e6, 100e6, 1024)
        pdb = power_db(resp)
        assert np.all(np.isfinite(pdb))
        assert pdb.max() == pytest.approx(
            20 * math.log10(np.abs(resp.gains).max())
        )


class TestSubcarrierGains:
    def test_flat_test_channel_all_ones(self):
        # single path with no attenuation, no frequency gain term, zero delay
        params = ChannelParams(
            a_scale=1.0, a0=0.0, a1=0.0, k_exp=2.21, k2_exp=0.34,
            phase_velocity=2e8, paths=(PathParams(g=1.0, c=0.0, ell=1e-12),),
        )
        gains = subcarrier_gains(params, default_ofdm())
        assert np.max(np.abs(gains - 1.0)) < 1e-9

    def test_active_set_geometry(self):
        gains = subcarrier_gains(table1_channel(), default_ofdm())
        assert len(gains) == 336
        assert gains[0] == ctf_at(table1_channel(), 74 * 24414.0)
        assert 74 * 24414.0 == pytest.approx(1.8066e6, rel=1e-4)

    def test_matches_pointwise_evaluation(self):
        cfg = default_ofdm()
        params = table1_channel()
        freqs = np.array(cfg.active_set) * cfg.subcarrier_spacing
        assert np.array_equal(subcarrier_gains(params, cfg), ctf_at(params, freqs))


class TestValidation:
    def test_path_length_positive(self):
        with pytest.raises(ValueError):
            PathParams(g=1.0, c=0.0, ell=0.0)

    def test_paths_nonempty(self):
        with pytest.raises(ValueError):
            ChannelParams(a_scale=1, a0=0, a1=0, k_exp=1, k2_exp=1,
                          phase_velocity=2e8, paths=())

    def test_freqs_strictly_increasing(self):
        with pytest.raises(ValueError):
            FrequencyResponse(freqs=np.array([1.0, 1.0]),
                              gains=np.array([1 + 0j, 1 + 0j]))
