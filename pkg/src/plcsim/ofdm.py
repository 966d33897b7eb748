"""Real-baseband OFDM/BPSK modem with Hermitian-symmetric loading.

The transmit signal is real: active subcarriers occupy bins 1..n_fft/2-1
and their conjugates are implied by the real-valued synthesis (irfft).
The inverse transform carries the 1/N factor, the forward transform none,
so the noiseless round trip is the identity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class EqualizationError(ValueError):
    """Raised when a channel gain is zero at some subcarrier."""


@dataclass(frozen=True)
class OfdmConfig:
    """Transform size, cyclic prefix, sampling rate and active subcarriers."""

    n_fft: int
    cp_len: int
    fs: float
    active_set: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n_fft < 2 or self.n_fft & (self.n_fft - 1):
            raise ValueError(f"n_fft must be a power of two, got {self.n_fft}")
        if not 0 <= self.cp_len < self.n_fft:
            raise ValueError(f"cp_len must be in [0, n_fft), got {self.cp_len}")
        if self.fs <= 0:
            raise ValueError("fs must be > 0")
        active = tuple(int(k) for k in self.active_set)
        if len(active) == 0:
            raise ValueError("active_set must be nonempty")
        if any(not 1 <= k < self.n_fft // 2 for k in active):
            raise ValueError("active subcarriers must satisfy 1 <= k < n_fft/2")
        if any(b <= a for a, b in zip(active, active[1:])):
            raise ValueError("active_set must be strictly increasing")
        object.__setattr__(self, "active_set", active)

    @property
    def subcarrier_spacing(self) -> float:
        return self.fs / self.n_fft

    @property
    def n_active(self) -> int:
        return len(self.active_set)

    @property
    def n_ext(self) -> int:
        """Extended symbol length in samples (prefix included)."""
        return self.n_fft + self.cp_len

    @property
    def t_symbol(self) -> float:
        """Extended symbol duration in seconds."""
        return self.n_ext / self.fs


def default_ofdm() -> OfdmConfig:
    """1024-point transform, 150-sample prefix, 24.999936 MHz sampling,
    336 active carriers covering 1.8-10 MHz."""
    return OfdmConfig(
        n_fft=1024, cp_len=150, fs=24_999_936.0, active_set=tuple(range(74, 410))
    )


def bpsk_map(bits) -> np.ndarray:
    """Bit 0 -> +1, bit 1 -> -1 on the real axis."""
    bits = np.asarray(bits)
    return (1.0 - 2.0 * bits).astype(complex)


def bpsk_demap(symbols) -> np.ndarray:
    """Hard decision on the real part; an exact zero decides bit 0."""
    return (np.real(np.asarray(symbols)) < 0).astype(np.int64)


def modulate_frames(cfg: OfdmConfig, symbols: np.ndarray) -> np.ndarray:
    """Synthesize one or more extended symbols from active-set symbols.

    ``symbols`` has shape (..., n_active); returns real samples of shape
    (..., n_fft + cp_len) with the cyclic prefix prepended.
    """
    symbols = np.asarray(symbols, dtype=complex)
    if symbols.shape[-1] != cfg.n_active:
        raise ValueError(
            f"expected {cfg.n_active} symbols, got {symbols.shape[-1]}"
        )
    spec = np.zeros(symbols.shape[:-1] + (cfg.n_fft // 2 + 1,), dtype=complex)
    spec[..., list(cfg.active_set)] = symbols
    core = np.fft.irfft(spec, n=cfg.n_fft, axis=-1)
    if cfg.cp_len == 0:
        return core
    return np.concatenate([core[..., -cfg.cp_len :], core], axis=-1)


def demodulate_frames(cfg: OfdmConfig, rx: np.ndarray) -> np.ndarray:
    """Strip the prefix and return forward-transform bins of the active set."""
    rx = np.asarray(rx, dtype=float)
    if rx.shape[-1] != cfg.n_ext:
        raise ValueError(f"expected {cfg.n_ext} samples, got {rx.shape[-1]}")
    core = rx[..., cfg.cp_len :]
    spec = np.fft.rfft(core, axis=-1)
    return spec[..., list(cfg.active_set)]


def modulate(cfg: OfdmConfig, symbols) -> np.ndarray:
    """Single-frame synthesis; see modulate_frames."""
    return modulate_frames(cfg, np.asarray(symbols, dtype=complex))


def demodulate(cfg: OfdmConfig, rx) -> np.ndarray:
    """Single-frame analysis; see demodulate_frames."""
    return demodulate_frames(cfg, np.asarray(rx, dtype=float))


def apply_channel(cfg: OfdmConfig, symbols, gains) -> np.ndarray:
    """Per-subcarrier multiplication by the known channel gains."""
    symbols = np.asarray(symbols, dtype=complex)
    gains = np.asarray(gains, dtype=complex)
    if symbols.shape[-1] != gains.shape[-1]:
        raise ValueError(
            f"length mismatch: {symbols.shape[-1]} symbols vs {gains.shape[-1]} gains"
        )
    return symbols * gains


def equalize(symbols, gains) -> np.ndarray:
    """One-tap equalization: per-subcarrier division by the channel gain."""
    symbols = np.asarray(symbols, dtype=complex)
    gains = np.asarray(gains, dtype=complex)
    if symbols.shape[-1] != gains.shape[-1]:
        raise ValueError(
            f"length mismatch: {symbols.shape[-1]} symbols vs {gains.shape[-1]} gains"
        )
    zero = np.abs(gains) == 0
    if np.any(zero):
        idx = int(np.argmax(zero))
        raise EqualizationError(f"zero channel gain at subcarrier position {idx}")
    return symbols / gains
