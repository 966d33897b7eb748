"""Command-line entry point: channel, noise and ber subcommands.

Each command reads the shared config document, writes plot-ready CSV, and
optionally renders a matplotlib figure alongside.  All outputs are written
atomically (temp file + rename) so failures leave no partial files.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import bersim, noise as noisemod, ofdm as ofdmmod
from .channel import FrequencyResponse, power_db, sample_response
from .config import ConfigError, parse_config, render_manifest


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(x: float) -> str:
    return repr(float(x))


def _load(args):
    text = Path(args.config).read_text() if args.config else ""
    return parse_config(
        text,
        preset=getattr(args, "preset", None),
        master_seed=args.seed,
        n_symbols=getattr(args, "symbols", None),
        min_errors=getattr(args, "min_errors", None),
    )


def cmd_channel(args) -> int:
    resolved = _load(args)
    sim = resolved.base
    if sim.channel is None:
        freqs = np.linspace(args.f_start, args.f_stop, args.points)
        resp = FrequencyResponse(freqs=freqs, gains=np.ones(args.points, complex))
    else:
        resp = sample_response(sim.channel, args.f_start, args.f_stop, args.points)
    pdb = power_db(resp)
    lines = ["freq_hz,re,im,power_db"]
    for f, g, p in zip(resp.freqs, resp.gains, pdb):
        lines.append(f"{_fmt(f)},{_fmt(g.real)},{_fmt(g.imag)},{_fmt(p)}")
    _write_atomic(args.out, "\n".join(lines) + "\n")
    if args.plot:
        from . import plots

        plots.plot_channel_response(resp.freqs, pdb, _plot_path(args.out))
    return 0


def _noise_trace(sim, duration: float, dt: float):
    """Realize the configured noise model over [0, duration)."""
    n = int(round(duration / dt))
    params = sim.model_params
    seed = sim.master_seed
    if sim.noise_model == "awgn":
        samples = noisemod._rng((seed, 0xC)).standard_normal(n)
        trace = noisemod.NoiseTrace(samples=samples, dt=dt,
                                    impulse_mask=np.zeros(n, bool))
        return trace, noisemod.ImpulseSchedule([], [], [])
    if sim.noise_model == "bg":
        trace = noisemod.gen_bg(params, n, (seed, 0xC), dt=dt)
        return trace, noisemod.ImpulseSchedule([], [], [])
    if sim.noise_model == "bg-equivalent":
        params = noisemod.bg_equivalent_params(
            params, sim.ofdm.t_symbol, sim.ofdm.n_ext, dt
        )
    schedule = noisemod.gen_impulse_schedule(params, duration, seed)
    trace = noisemod.realize_bursty(params, schedule, 0.0, n, dt, seed)
    return trace, schedule


def cmd_noise(args) -> int:
    resolved = _load(args)
    sim = resolved.base
    dt = 1.0 / sim.ofdm.fs
    if args.duration is not None:
        duration = args.duration
    elif args.symbols is not None:
        duration = args.symbols * sim.ofdm.t_symbol
    else:
        raise ConfigError("noise: one of --duration or --symbols is required")
    if duration <= 0:
        raise ConfigError(f"noise: duration must be > 0, got {duration}")

    trace, schedule = _noise_trace(sim, duration, dt)
    lines = ["t_seconds,value,impulse_flag"]
    times = np.arange(len(trace.samples)) * dt
    for t, v, m in zip(times, trace.samples, trace.impulse_mask):
        lines.append(f"{_fmt(t)},{_fmt(v)},{int(m)}")
    _write_atomic(args.out, "\n".join(lines) + "\n")

    sched_path = args.schedule_out or _sibling(args.out, ".schedule.csv")
    slines = ["t_arrival,t_width,gamma2"]
    for a, w, g in zip(schedule.arrivals, schedule.widths, schedule.gamma2):
        slines.append(f"{_fmt(a)},{_fmt(w)},{_fmt(g)}")
    _write_atomic(sched_path, "\n".join(slines) + "\n")

    if args.plot:
        from . import plots

        plots.plot_noise_trace(times, trace.samples, _plot_path(args.out))
    return 0


def cmd_ber(args) -> int:
    resolved = _load(args)
    curves = [
        bersim.run_sweep(spec.sim, label=spec.label, jobs=args.jobs)
        for spec in resolved.curves
    ]
    lines = ["label,snr_db,bits,errors,ber,ci_low,ci_high"]
    for curve in curves:
        for p in curve.points:
            lines.append(
                f"{curve.label},{_fmt(p.snr_db)},{p.bits_sent},{p.bit_errors},"
                f"{_fmt(p.ber)},{_fmt(p.ci_low)},{_fmt(p.ci_high)}"
            )
    _write_atomic(args.out, "\n".join(lines) + "\n")

    outputs = [args.out]
    if args.plot:
        from . import plots

        plot_path = _plot_path(args.out)
        plots.plot_ber_curves(curves, plot_path)
        outputs.append(plot_path)

    created = datetime.now(timezone.utc).isoformat(timespec="seconds")
    _write_atomic(
        args.out + ".manifest", render_manifest(resolved, outputs, created)
    )
    return 0


def _sibling(out: str, suffix: str) -> str:
    p = Path(out)
    return str(p.with_suffix("")) + suffix


def _plot_path(out: str) -> str:
    return str(Path(out).with_suffix(".png"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plcsim",
        description="OFDM/BPSK BER simulation over a power-line channel "
        "with impulsive noise",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, preset=False):
        p.add_argument("--config", help="config document path (default: preset defaults)")
        p.add_argument("--seed", type=int, default=None, help="override master seed")
        p.add_argument("--out", required=True, help="output CSV path")
        p.add_argument("--plot", action="store_true",
                       help="render a PNG figure next to the CSV")
        if preset:
            p.add_argument("--preset", default=None, help="named preset (paper-sec3)")

    p_chan = sub.add_parser("channel", help="export the channel frequency response")
    common(p_chan, preset=True)
    p_chan.add_argument("--f-start", type=float, default=1.8e6)
    p_chan.add_argument("--f-stop", type=float, default=100e6)
    p_chan.add_argument("--points", type=int, default=4096)
    p_chan.set_defaults(func=cmd_channel)

    p_noise = sub.add_parser("noise", help="export a noise trace and pulse schedule")
    common(p_noise, preset=True)
    p_noise.add_argument("--duration", type=float, default=None, help="seconds")
    p_noise.add_argument("--symbols", type=int, default=None,
                         help="duration in extended OFDM symbols")
    p_noise.add_argument("--schedule-out", default=None)
    p_noise.set_defaults(func=cmd_noise)

    p_ber = sub.add_parser("ber", help="run BER-vs-SNR sweeps")
    common(p_ber, preset=True)
    p_ber.add_argument("--symbols", type=int, default=None,
                       help="override symbols per SNR point")
    p_ber.add_argument("--min-errors", type=int, default=None,
                       help="early-stop error budget (0 disables)")
    p_ber.add_argument("--jobs", type=int, default=1,
                       help="parallel workers across SNR points")
    p_ber.set_defaults(func=cmd_ber)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"plcsim: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
