import math

import numpy as np
import pytest

from fcssk import (ConfigError, bit_energy, crb_variance, pe_crb, q_function,
                   snr_at_pe, theory_curve)


class TestCrbVariance:
    def test_spot_value_against_arithmetic_oracle(self):
        # 12*fs^2 / ((2*pi)^2 * 1 * 256 * (256^2-1)), evaluated independently
        oracle = (12 * 65536 ** 2) / (4 * math.pi ** 2 * 256 * 65535)
        assert oracle == pytest.approx(77.8158564, abs=1e-6)
        assert crb_variance(1.0, 256, 65536) == pytest.approx(oracle, abs=0.01)

    def test_snr_homogeneity(self):
        assert crb_variance(2.0, 256, 65536) == crb_variance(1.0, 256, 65536) / 2

    def test_fs_squared_scaling(self):
        ratio = crb_variance(1.0, 256, 2 * 65536) / crb_variance(1.0, 256, 65536)
        assert ratio == 4.0

    def test_observation_windows(self, chirp):
        from fcssk.theory import observation_window
        m = chirp.fs // 128
        assert observation_window("manchester", m) == m // 2
        assert observation_window("6b8b", m) == 3 * m // 4

    def test_rejects_degenerate(self):
        with pytest.raises(ConfigError):
            crb_variance(0.0, 256, 65536)
        with pytest.raises(ConfigError):
            crb_variance(1.0, 1, 65536)


class TestBitEnergy:
    def test_manchester_at_128(self, chirp):
        assert bit_energy("manchester", chirp, 512) == 8192.0

    def test_6b8b_is_nine_quarters(self, chirp):
        assert bit_energy("6b8b", chirp, 512) == 18432.0
        for m in (512, 256, 128):
            ratio = bit_energy("6b8b", chirp, m) / bit_energy("manchester", chirp, m)
            assert ratio == 2.25

    def test_quadratic_in_m(self, chirp):
        assert bit_energy("manchester", chirp, 1024) == 4 * bit_energy("manchester", chirp, 512)


class TestPeCrb:
    def test_zero_energy_is_half(self):
        assert pe_crb(0.0, 1.0) == 0.5

    def test_monotone_in_variance(self):
        pes = [pe_crb(100.0, v) for v in (50.0, 10.0, 2.0, 1.0)]
        assert all(a > b > 0 for a, b in zip(pes, pes[1:]))
        assert pe_crb(100.0, 1e-6) == 0.0  # underflows cleanly

    def test_range(self):
        for e_b, var in ((0.0, 1.0), (1.0, 1.0), (100.0, 3.0), (1e4, 0.5)):
            pe = pe_crb(e_b, var)
            assert 0.0 <= pe <= 0.5

    def test_q_function_symmetry(self):
        for x in (0.0, 0.5, 1.0, 2.0, 5.0):
            assert abs(q_function(x) + q_function(-x) - 1.0) <= 1e-12


class TestTheoryCurve:
    def test_single_point_matches_pe_crb(self, chirp):
        point = theory_curve("manchester", 128, chirp, [0.0])[0]
        assert point.pe == pe_crb(point.e_b, point.var_f)
        assert point.n_obs == 256

    def test_bitrate_shift_at_1e_minus_3(self, chirp):
        # forced by the CRB and energy formulas: 10*log10(4 * (N1(N1^2-1))/(N2(N2^2-1)))
        shift = snr_at_pe("manchester", 256, chirp, 1e-3) \
            - snr_at_pe("manchester", 128, chirp, 1e-3)
        assert shift == pytest.approx(15.05, abs=0.1)

    def test_6b8b_left_of_manchester(self, chirp):
        for pe in np.geomspace(1e-4, 0.4, 9):
            assert snr_at_pe("6b8b", 128, chirp, float(pe)) \
                < snr_at_pe("manchester", 128, chirp, float(pe))

    def test_monotone_in_snr(self, chirp):
        grid = list(range(-30, 32, 2))
        pes = [p.pe for p in theory_curve("6b8b", 256, chirp, grid)]
        assert all(a >= b for a, b in zip(pes, pes[1:]))

    def test_empty_grid_rejected(self, chirp):
        with pytest.raises(ConfigError):
            theory_curve("manchester", 128, chirp, [])
