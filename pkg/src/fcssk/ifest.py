"""Receiver front half: downconversion and instantaneous-frequency estimation.

Two estimators are provided:

* a second-order digital PLL whose closed loop realizes
  H(z) = (C1*(z-1) + C2*(z-1)^2) / ((z-1)^2 + C2*(z-1) + C1)
  from input phase to estimated frequency, with C2 = 2*zeta*w0/fs and
  C1 = C2^2/(4*zeta^2); a type-2 loop with zero steady-state error on
  frequency steps and ramps tracked with constant phase lag;
* a sliding-window linear-least-squares fit of a degree-lambda polynomial
  to the unwrapped phase, differentiated to yield the IF.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .sigcore import ChirpParams, IfTrack, IqBuffer, periodic_reference
from .txmod import ModParams, peak_deviation

LOWPASS_TAPS = 129
MIN_CUTOFF_HZ = 64.0


@dataclass(frozen=True)
class DpllParams:
    zeta: float    # damping factor
    f_nat: float   # loop natural frequency, Hz
    fs: int
    c1: float      # integral-path gain
    c2: float      # proportional-path gain


@dataclass(frozen=True)
class LlsParams:
    degree: int = 5       # phase polynomial degree (lambda)
    window_len: int = 0   # samples (L); normally the coded-bit length
    stride: int = 0       # window advance; 0 = window_len // 4


def make_dpll_params(fs: int, f_nat: float, zeta: float = 1.0 / math.sqrt(2.0)) -> DpllParams:
    """Loop gains for a target natural frequency and damping.

    Requires fs >> w0/(2*pi); enforced as fs >= 50*f_nat.
    """
    if f_nat <= 0 or zeta <= 0:
        raise ConfigError("f_nat and zeta must be positive")
    if fs < 50.0 * f_nat:
        raise ConfigError(f"fs={fs} too low for f_nat={f_nat} (need fs >= 50*f_nat)")
    w0 = 2.0 * math.pi * f_nat
    c2 = 2.0 * zeta * w0 / fs
    c1 = c2 * c2 / (4.0 * zeta * zeta)
    return DpllParams(zeta=float(zeta), f_nat=float(f_nat), fs=int(fs), c1=c1, c2=c2)


def default_f_nat(mp: ModParams) -> float:
    """Half the coded-bit rate: passes the per-coded-bit IF dynamics and
    rejects noise beyond the effectively used Nyquist band."""
    return mp.chirp.fs / (2.0 * mp.coded_bit_len)


def default_cutoff(mp: ModParams) -> float:
    """Lowpass cutoff: 4x the peak ideal deviation, floored at 64 Hz."""
    return max(4.0 * peak_deviation(mp), MIN_CUTOFF_HZ)


def design_lowpass(cutoff_hz: float, fs: int, num_taps: int = LOWPASS_TAPS) -> np.ndarray:
    """Linear-phase windowed-sinc lowpass (raised-cosine window), unity DC gain."""
    if not 0 < cutoff_hz < fs / 2:
        raise ConfigError(f"cutoff {cutoff_hz} Hz outside (0, fs/2)")
    if num_taps % 2 == 0:
        raise ConfigError("num_taps must be odd for integer group delay")
    m = np.arange(num_taps) - (num_taps - 1) / 2
    h = 2.0 * cutoff_hz / fs * np.sinc(2.0 * cutoff_hz / fs * m)
    window = 0.5 + 0.5 * np.cos(np.pi * m / ((num_taps - 1) / 2))
    h *= window
    return h / h.sum()


def downconvert(rx: IqBuffer, params: ChirpParams, cutoff_hz: float = MIN_CUTOFF_HZ) -> IqBuffer:
    """Mix against the local reference and lowpass the product.

    The FIR group delay of (taps-1)/2 samples is compensated by shifting
    the output, so the baseband stays sample-aligned with the input.
    """
    x = rx.samples
    ref = periodic_reference(params, len(x))
    bb = x * np.conj(ref)
    h = design_lowpass(cutoff_hz, rx.fs)
    delay = (len(h) - 1) // 2
    filtered = np.convolve(bb, h)[delay:delay + len(bb)]
    return IqBuffer(samples=filtered, fs=rx.fs)


def dpll_track(bb: IqBuffer, p: DpllParams) -> IfTrack:
    """Track the IF of ``bb`` with the second-order loop.

    Per sample: phase error e = angle(bb[n] * exp(-j*phi_out)); the loop
    filter integrates C1*e and adds C2*e; the phase integrator advances by
    that sum, which times fs/(2*pi) is the frequency estimate.
    """
    phase_in = np.angle(bb.samples).tolist()  # plain floats iterate ~2x faster
    out = [0.0] * len(phase_in)
    c1, c2 = p.c1, p.c2
    acc = 0.0       # loop-filter integrator (enters delayed)
    phi_out = 0.0   # phase-integrator state (enters delayed)
    two_pi = 2.0 * math.pi
    gain = bb.fs / two_pi
    for i, pin in enumerate(phase_in):
        e = (pin - phi_out + math.pi) % two_pi - math.pi
        v = acc + c2 * e
        acc += c1 * e
        phi_out += v
        out[i] = v * gain
    return IfTrack(values=np.asarray(out), fs=bb.fs, offset=0)


def dpll_response(p: DpllParams, freq_hz: float) -> complex:
    """Closed-loop transfer H(z) at z = exp(j*2*pi*f/fs), phase in -> frequency out."""
    z = np.exp(2j * np.pi * freq_hz / p.fs)
    zm1 = z - 1.0
    return (p.c1 * zm1 + p.c2 * zm1 ** 2) / (zm1 ** 2 + p.c2 * zm1 + p.c1)


def _lls_design(degree: int, window_len: int) -> tuple[np.ndarray, float]:
    """Per-window solve+differentiate operator on a normalized time grid.

    Returns (D, scale): D @ phase_window evaluates the fitted phase
    polynomial's derivative d(phase)/du at every window sample (u spanning
    [-1, 1]); multiplying by scale * fs converts that to Hz.
    """
    u = np.linspace(-1.0, 1.0, window_len)
    vand = np.vander(u, degree + 1, increasing=True)
    proj = np.linalg.pinv(vand)
    powers = np.arange(degree + 1)
    dvand = np.zeros_like(vand)
    dvand[:, 1:] = vand[:, :-1] * powers[1:]
    half_span = (window_len - 1) / 2.0
    return dvand @ proj, 1.0 / (2.0 * np.pi * half_span)


def lls_track(bb: IqBuffer, p: LlsParams) -> IfTrack:
    """Sliding-window polynomial-phase IF estimate.

    The phase of ``bb`` is unwrapped once; each window of ``window_len``
    samples is fitted with a degree-``degree`` polynomial via the
    precomputed least-squares projector (the time matrix is
    window-relative, hence identical for all windows), and the fit's
    derivative is emitted over the central ``stride`` samples.  The first
    and last windows also cover their outer edges so the track spans the
    whole input.  All middle windows are solved in one batched matrix
    product over a strided view of the phase.
    """
    if p.degree < 2:
        raise ConfigError("polynomial degree must be >= 2")
    window = p.window_len
    if window <= p.degree + 1:
        raise ConfigError(f"window_len {window} must exceed degree+1")
    total = len(bb.samples)
    if total < window:
        raise ConfigError(f"signal ({total}) shorter than window ({window})")
    stride = p.stride if p.stride > 0 else max(window // 4, 1)
    stride = min(stride, window)
    lead = (window - stride) // 2

    d_op, scale = _lls_design(p.degree, window)
    gain = scale * bb.fs
    phi = np.unwrap(np.angle(bb.samples))
    out = np.empty(total)

    windows = np.lib.stride_tricks.sliding_window_view(phi, window)[::stride]
    out[lead:lead + windows.shape[0] * stride] = \
        (windows @ d_op[lead:lead + stride].T).ravel() * gain
    out[:lead] = (d_op[:lead] @ phi[:window]) * gain
    pos = lead + windows.shape[0] * stride
    if pos < total:
        start_f = total - window
        out[pos:] = (d_op[pos - start_f:] @ phi[start_f:]) * gain
    return IfTrack(values=out, fs=bb.fs, offset=0)
