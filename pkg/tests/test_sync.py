import numpy as np
import pytest

from fcssk import (ConfigError, IqBuffer, SyncError, align, apply_awgn,
                   apply_delay, estimate_timing, modulate, reference_chirp)
from fcssk.codec import encode
from fcssk.txmod import make_mod_params


def delayed_reference(chirp, tau, periods=3):
    ref = reference_chirp(chirp, periods)
    return apply_delay(ref, tau, chirp) if tau else ref


class TestEstimateTiming:
    def test_zero_offset(self, chirp):
        est = estimate_timing(reference_chirp(chirp, 2), chirp)
        assert est.tau_hat == 0

    def test_tau_1024_noiseless(self, chirp):
        est = estimate_timing(delayed_reference(chirp, 1024), chirp)
        assert abs(est.tau_hat - 1024) <= 2
        assert est.delta_f1 == pytest.approx(64.0, abs=chirp.rep_rate)
        assert est.delta_f1 + est.delta_f2 == pytest.approx(chirp.b0, abs=chirp.rep_rate)

    def test_ambiguous_branch_beyond_half_period(self, chirp):
        # tau > T0/2: the folded beat alone cannot separate tau from N-tau
        est = estimate_timing(delayed_reference(chirp, 12288), chirp)
        assert abs(est.tau_hat - 12288) <= 2

    def test_noiseless_grid_subset(self, chirp):
        for tau in (0, 512, 3072, 8192, 13824, 15872):
            est = estimate_timing(delayed_reference(chirp, tau), chirp)
            assert abs(est.tau_hat - tau) <= 2, f"tau={tau} -> {est.tau_hat}"

    def test_modulated_20db(self, chirp, rng):
        mp = make_mod_params(chirp, "manchester", 128)
        bits = rng.integers(0, 2, 384)  # 12 chirp periods
        sig = modulate(encode(bits, "manchester", mp.coded_bit_len), mp)
        tau = 9000
        rx = apply_awgn(apply_delay(sig, tau, chirp), 20.0, rng)
        est = estimate_timing(rx, chirp)
        assert abs(est.tau_hat - tau) <= 2

    def test_flat_spectrum_raises(self, chirp, rng):
        noise = rng.standard_normal(2 * chirp.n) + 1j * rng.standard_normal(2 * chirp.n)
        with pytest.raises(SyncError):
            estimate_timing(IqBuffer(noise, chirp.fs), chirp)

    def test_too_short(self, chirp):
        buf = IqBuffer(reference_chirp(chirp, 1).samples[:100], chirp.fs)
        with pytest.raises(ConfigError):
            estimate_timing(buf, chirp)

    def test_range_invariant(self, chirp, rng):
        for tau in rng.integers(0, chirp.n, 4):
            est = estimate_timing(delayed_reference(chirp, int(tau)), chirp)
            assert 0 <= est.tau_hat < chirp.n


class TestAlign:
    def test_identity(self, chirp):
        ref = reference_chirp(chirp, 1)
        est = estimate_timing(reference_chirp(chirp, 2), chirp)
        assert np.array_equal(align(ref, est).samples, ref.samples)

    def test_drops_offset(self, chirp):
        ref = reference_chirp(chirp, 2)
        rx = apply_delay(ref, 1024, chirp)
        est = estimate_timing(rx, chirp)
        aligned = align(rx, est)
        residual = len(rx) - est.tau_hat
        assert len(aligned) == residual
        # residual offset against ground truth is within 2 samples
        assert abs(est.tau_hat - 1024) <= 2

    def test_full_drop_gives_empty(self, chirp):
        ref = reference_chirp(chirp, 1)
        assert len(align(ref, len(ref))) == 0

    def test_out_of_range(self, chirp):
        ref = reference_chirp(chirp, 1)
        with pytest.raises(ConfigError):
            align(ref, len(ref) + 1)
