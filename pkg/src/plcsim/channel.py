"""Parametric multipath power-line channel transfer function.

The channel is a deterministic sum of propagation paths, each with a
frequency-dependent gain term and a cable-attenuation exponential, plus a
delay phase set by the path length and the phase velocity in the cable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0  # m/s

# Scale from Hz to the unit used inside the attenuation/gain exponents.
_FREQ_UNIT_HZ = {
    "Hz": 1.0,
    "kHz": 1e3,
    "MHz": 1e6,
    "GHz": 1e9,
}


class ChannelEvaluationError(ValueError):
    """Raised when the transfer function evaluates to a non-finite value."""


@dataclass(frozen=True)
class PathParams:
    """One propagation path: gain coefficients and path length in meters."""

    g: float
    c: float
    ell: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.g) and math.isfinite(self.c)):
            raise ValueError("path gain coefficients g, c must be finite")
        if not (math.isfinite(self.ell) and self.ell > 0):
            raise ValueError(f"path length ell must be > 0, got {self.ell}")


@dataclass(frozen=True)
class ChannelParams:
    """Full parameter set of the multipath transfer function.

    ``freq_unit`` declares the unit in which frequency enters the
    ``f^k_exp`` and ``f^k2_exp`` terms; the delay phase always uses f in Hz
    with ``phase_velocity`` in m/s.
    """

    a_scale: float
    a0: float
    a1: float
    k_exp: float
    k2_exp: float
    phase_velocity: float
    paths: tuple[PathParams, ...]
    freq_unit: str = "MHz"

    def __post_init__(self) -> None:
        if self.phase_velocity <= 0:
            raise ValueError("phase_velocity must be > 0")
        if self.a0 < 0 or self.a1 < 0:
            raise ValueError("attenuation constants a0, a1 must be >= 0")
        if len(self.paths) == 0:
            raise ValueError("paths must be nonempty")
        if self.freq_unit not in _FREQ_UNIT_HZ:
            raise ValueError(
                f"freq_unit must be one of {sorted(_FREQ_UNIT_HZ)}, got {self.freq_unit!r}"
            )
        object.__setattr__(self, "paths", tuple(self.paths))

    @property
    def freq_scale_hz(self) -> float:
        """Hz per one unit of ``freq_unit``."""
        return _FREQ_UNIT_HZ[self.freq_unit]


@dataclass(frozen=True)
class FrequencyResponse:
    """Sampled complex frequency response on a strictly increasing grid."""

    freqs: np.ndarray
    gains: np.ndarray

    def __post_init__(self) -> None:
        freqs = np.asarray(self.freqs, dtype=float)
        gains = np.asarray(self.gains, dtype=complex)
        if freqs.shape != gains.shape or freqs.ndim != 1:
            raise ValueError("freqs and gains must be 1-D and the same length")
        if freqs.size >= 2 and not np.all(np.diff(freqs) > 0):
            raise ValueError("freqs must be strictly increasing")
        object.__setattr__(self, "freqs", freqs)
        object.__setattr__(self, "gains", gains)


# Five-path reference channel: per-path (g, c, ell) triples plus the global
# constants N_p=5, K=2.21, K2=0.34, nu=2c/3, A=2.4*10^-5.3.  a0/a1 defaults
# are placeholders with a plausible dynamic range; both are configurable.
TABLE1_PATHS = (
    PathParams(g=-0.14, c=0.997, ell=5.0),
    PathParams(g=0.61, c=-0.998, ell=12.0),
    PathParams(g=-6.61, c=0.998, ell=30.0),
    PathParams(g=-0.38, c=-0.991, ell=35.0),
    PathParams(g=-1.65, c=-1.001, ell=50.0),
)

DEFAULT_A0 = 0.0
DEFAULT_A1 = 5e-4


def table1_channel(
    a0: float = DEFAULT_A0,
    a1: float = DEFAULT_A1,
    a_scale: float = 2.4 * 10.0 ** (-5.3),
) -> ChannelParams:
    """Reference five-path channel with the published global constants."""
    return ChannelParams(
        a_scale=a_scale,
        a0=a0,
        a1=a1,
        k_exp=2.21,
        k2_exp=0.34,
        phase_velocity=2.0 * SPEED_OF_LIGHT / 3.0,
        paths=TABLE1_PATHS,
        freq_unit="MHz",
    )


def ctf_at(params: ChannelParams, f):
    """Complex channel gain at frequency ``f`` (Hz, scalar or array).

    Raises ChannelEvaluationError if any evaluation overflows to a
    non-finite value; results are never silently saturated.
    """
    f = np.asarray(f, dtype=float)
    if np.any(f < 0):
        raise ValueError("frequency must be >= 0")
    fu = f / params.freq_scale_hz  # frequency in the declared exponent unit
    g = np.array([p.g for p in params.paths])
    c = np.array([p.c for p in params.paths])
    ell = np.array([p.ell for p in params.paths])

    fu_b = fu[..., None]
    f_b = f[..., None]
    with np.errstate(over="raise", invalid="raise"):
        try:
            gain_term = g + c * fu_b**params.k2_exp
            atten = np.exp(-(params.a0 + params.a1 * fu_b**params.k_exp) * ell)
            phase = np.exp(-2j * np.pi * f_b * ell / params.phase_velocity)
            out = params.a_scale * np.sum(gain_term * atten * phase, axis=-1)
        except FloatingPointError as exc:
            raise ChannelEvaluationError(
                f"transfer function overflow evaluating f={f}"
            ) from exc
    if not np.all(np.isfinite(out)):
        bad = np.asarray(f)[~np.isfinite(out)] if out.ndim else f
        raise ChannelEvaluationError(f"non-finite channel gain at f={bad}")
    return complex(out) if out.ndim == 0 else out


def sample_response(
    params: ChannelParams, f_start: float, f_stop: float, n_points: int
) -> FrequencyResponse:
    """Evaluate the transfer function on a uniform inclusive grid."""
    if not (0 <= f_start < f_stop):
        raise ValueError(
            f"need 0 <= f_start < f_stop, got f_start={f_start}, f_stop={f_stop}"
        )
    if n_points < 2:
        raise ValueError(f"n_points must be >= 2, got {n_points}")
    freqs = np.linspace(f_start, f_stop, n_points)
    try:
        gains = ctf_at(params, freqs)
    except ChannelEvaluationError as exc:
        raise ChannelEvaluationError(
            f"failed sampling grid [{f_start}, {f_stop}]: {exc}"
        ) from exc
    return FrequencyResponse(freqs=freqs, gains=gains)


def power_db(resp: FrequencyResponse) -> np.ndarray:
    """Element-wise power in dB; zero gain maps to -inf."""
    mag = np.abs(resp.gains)
    with np.errstate(divide="ignore"):
        return 20.0 * np.log10(mag)


def subcarrier_gains(params: ChannelParams, cfg) -> np.ndarray:
    """Channel gain at each active subcarrier center frequency, ascending k."""
    freqs = np.asarray(cfg.active_set, dtype=float) * cfg.subcarrier_spacing
    return ctf_at(params, freqs)
