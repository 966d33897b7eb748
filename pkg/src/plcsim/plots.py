"""Render report figures next to the delimited outputs."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def plot_channel_response(freqs_hz, power_db, out_path: str) -> None:
    """Transfer-function power in dB over frequency in MHz."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(np.asarray(freqs_hz) / 1e6, power_db, lw=1.0)
    ax.set_xlabel("frequency [MHz]")
    ax.set_ylabel("|h(f)|  [dB]")
    ax.set_title("Channel transfer function")
    ax.grid(True, alpha=0.3)
    fig.savefig(out_path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def plot_noise_trace(times_s, samples, out_path: str) -> None:
    """Noise amplitude over time in milliseconds."""
    fig, ax = plt.subplots(figsize=(7, 3.5))
    ax.plot(np.asarray(times_s) * 1e3, samples, lw=0.4)
    ax.set_xlabel("time [ms]")
    ax.set_ylabel("amplitude")
    ax.set_title("Noise realization")
    ax.grid(True, alpha=0.3)
    fig.savefig(out_path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def plot_ber_curves(curves, out_path: str) -> None:
    """Semilog BER vs SNR with 95% confidence bars, one line per curve."""
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for curve in curves:
        snr = [p.snr_db for p in curve.points]
        ber = [p.ber for p in curve.points]
        lo = [max(p.ber - p.ci_low, 0.0) for p in curve.points]
        hi = [max(p.ci_high - p.ber, 0.0) for p in curve.points]
        ax.errorbar(snr, ber, yerr=[lo, hi], marker="o", ms=3, lw=1.0,
                    capsize=2, label=curve.label)
    ax.set_yscale("log")
    ax.set_xlabel("SNR [dB]")
    ax.set_ylabel("BER")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.savefig(out_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
