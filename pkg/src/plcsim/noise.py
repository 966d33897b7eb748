"""Impulsive noise generators: Bernoulli-Gaussian and bursty pulse train.

Both models share the same real-valued Gaussian background.  The BG model
adds an independent high-power Gaussian per sample with probability psi;
the bursty model schedules rectangular pulses with exponentially
distributed power ratio, width and inter-arrival time, which
amplitude-modulate a second Gaussian process.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Absolute sample indices are partitioned into fixed blocks; the two
# Gaussian processes of the bursty model are drawn per block from a seed
# derived from (trace seed, block index).  Any window assembled from the
# same global clock therefore has no seams.
SAMPLE_BLOCK = 8192

# Number of (inter-arrival, width, gamma2) triples drawn per chunk while
# growing a schedule; fixed so that extending a schedule in time preserves
# the already-generated prefix.
_SCHEDULE_CHUNK = 4096


@dataclass(frozen=True)
class BgNoiseParams:
    """Bernoulli-Gaussian mixture parameters.

    psi: per-sample impulse probability; mu: impulsive-to-background power
    ratio; sigma_g2: background variance.
    """

    psi: float
    mu: float
    sigma_g2: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.psi <= 1.0:
            raise ValueError(f"psi must be in [0, 1], got {self.psi}")
        if self.mu < 0:
            raise ValueError(f"mu must be >= 0, got {self.mu}")
        if self.sigma_g2 <= 0:
            raise ValueError(f"sigma_g2 must be > 0, got {self.sigma_g2}")


@dataclass(frozen=True)
class BurstyNoiseParams:
    """Mean parameters of the three exponential laws plus background variance."""

    gamma_mean: float  # mean of the impulse power ratio gamma^2
    lambda_mean: float  # mean inter-arrival time, seconds
    width_mean: float  # mean impulse width, seconds
    sigma_g2: float

    def __post_init__(self) -> None:
        if self.gamma_mean <= 0:
            raise ValueError(f"gamma_mean must be > 0, got {self.gamma_mean}")
        if self.lambda_mean <= 0:
            raise ValueError(f"lambda_mean must be > 0, got {self.lambda_mean}")
        if self.width_mean <= 0:
            raise ValueError(f"width_mean must be > 0, got {self.width_mean}")
        if self.sigma_g2 <= 0:
            raise ValueError(f"sigma_g2 must be > 0, got {self.sigma_g2}")


@dataclass(frozen=True)
class ImpulseEvent:
    """One pulse: arrival time, width (seconds) and power ratio gamma^2."""

    t_arrival: float
    t_width: float
    gamma2: float

    def __post_init__(self) -> None:
        if self.t_arrival < 0:
            raise ValueError("t_arrival must be >= 0")
        if self.t_width <= 0:
            raise ValueError("t_width must be > 0")
        if self.gamma2 <= 0:
            raise ValueError("gamma2 must be > 0")


class ImpulseSchedule:
    """Ordered pulse schedule backed by flat arrays; iterates ImpulseEvent."""

    def __init__(self, arrivals, widths, gamma2) -> None:
        self.arrivals = np.asarray(arrivals, dtype=float)
        self.widths = np.asarray(widths, dtype=float)
        self.gamma2 = np.asarray(gamma2, dtype=float)
        n = self.arrivals.size
        if self.widths.size != n or self.gamma2.size != n:
            raise ValueError("schedule columns must have equal length")
        if n >= 2 and not np.all(np.diff(self.arrivals) > 0):
            raise ValueError("arrival times must strictly increase")

    def __len__(self) -> int:
        return self.arrivals.size

    def __getitem__(self, i: int) -> ImpulseEvent:
        return ImpulseEvent(
            t_arrival=float(self.arrivals[i]),
            t_width=float(self.widths[i]),
            gamma2=float(self.gamma2[i]),
        )

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]


@dataclass(frozen=True)
class NoiseTrace:
    """Real noise samples at period dt with a per-sample impulse flag."""

    samples: np.ndarray
    dt: float
    impulse_mask: np.ndarray

    def __post_init__(self) -> None:
        if self.dt <= 0:
            raise ValueError("dt must be > 0")
        if len(self.samples) != len(self.impulse_mask):
            raise ValueError("samples and impulse_mask must have equal length")


def _rng(seed, *tags) -> np.random.Generator:
    """Generator from an integer seed (or tuple of ints) plus derivation tags."""
    entropy = list(seed) if isinstance(seed, (tuple, list)) else [int(seed)]
    return np.random.default_rng(np.random.SeedSequence([*entropy, *tags]))


def gen_bg(
    params: BgNoiseParams, n_samples: int, rng_seed: int, dt: float = 1.0
) -> NoiseTrace:
    """Draw a Bernoulli-Gaussian trace; deterministic given the seed.

    Draw order is fixed (background, Bernoulli, impulsive) so results are
    reproducible across runs.
    """
    if n_samples < 0:
        raise ValueError("n_samples must be >= 0")
    rng = _rng(rng_seed)
    sigma_g = math.sqrt(params.sigma_g2)
    w = rng.standard_normal(n_samples) * sigma_g
    b = rng.random(n_samples) < params.psi
    g = rng.standard_normal(n_samples) * math.sqrt(params.mu * params.sigma_g2)
    return NoiseTrace(samples=w + b * g, dt=dt, impulse_mask=b)


def bg_pdf(params: BgNoiseParams, x):
    """Two-component Gaussian mixture density at ``x`` (scalar or array)."""
    x = np.asarray(x, dtype=float)
    v1 = params.sigma_g2
    v2 = (1.0 + params.mu) * params.sigma_g2
    g1 = np.exp(-(x**2) / (2.0 * v1)) / math.sqrt(2.0 * math.pi * v1)
    g2 = np.exp(-(x**2) / (2.0 * v2)) / math.sqrt(2.0 * math.pi * v2)
    out = (1.0 - params.psi) * g1 + params.psi * g2
    return float(out) if out.ndim == 0 else out


class ScheduleStream:
    """Incrementally growing pulse schedule for one seeded realization.

    Extending the covered time span preserves all previously generated
    events, so a long run can materialize only as much schedule as it
    consumes.
    """

    def __init__(self, params: BurstyNoiseParams, rng_seed: int) -> None:
        self.params = params
        self._rng = _rng(rng_seed, 0xA11)
        self._arrivals = np.empty(0)
        self._widths = np.empty(0)
        self._gamma2 = np.empty(0)
        self._t_last = 0.0  # arrival time of the last generated event

    def extend_to(self, t_end: float) -> None:
        chunks_a, chunks_w, chunks_g = [], [], []
        while self._t_last < t_end:
            ia = self._rng.exponential(self.params.lambda_mean, _SCHEDULE_CHUNK)
            w = self._rng.exponential(self.params.width_mean, _SCHEDULE_CHUNK)
            g2 = self._rng.exponential(self.params.gamma_mean, _SCHEDULE_CHUNK)
            arr = self._t_last + np.cumsum(ia)
            self._t_last = float(arr[-1])
            chunks_a.append(arr)
            chunks_w.append(w)
            chunks_g.append(g2)
        if chunks_a:
            self._arrivals = np.concatenate([self._arrivals, *chunks_a])
            self._widths = np.concatenate([self._widths, *chunks_w])
            self._gamma2 = np.concatenate([self._gamma2, *chunks_g])

    def upto(self, t_end: float) -> ImpulseSchedule:
        """All events with arrival time strictly before ``t_end``."""
        self.extend_to(t_end)
        n = int(np.searchsorted(self._arrivals, t_end, side="left"))
        return ImpulseSchedule(
            self._arrivals[:n], self._widths[:n], self._gamma2[:n]
        )


def gen_impulse_schedule(
    params: BurstyNoiseParams, duration: float, rng_seed: int
) -> ImpulseSchedule:
    """Renewal-process pulse schedule over [0, duration)."""
    if duration <= 0:
        raise ValueError(f"duration must be > 0, got {duration}")
    return ScheduleStream(params, rng_seed).upto(duration)


def _envelope(schedule: ImpulseSchedule, t0: float, n_samples: int, dt: float):
    """Summed rectangular pulse envelope at sample instants t0 + k*dt."""
    env = np.zeros(n_samples)
    if len(schedule) == 0 or n_samples == 0:
        return env
    t1 = t0 + n_samples * dt
    max_w = float(np.max(schedule.widths))
    lo = int(np.searchsorted(schedule.arrivals, t0 - max_w, side="left"))
    hi = int(np.searchsorted(schedule.arrivals, t1, side="left"))
    if lo == hi:
        return env
    arr = schedule.arrivals[lo:hi]
    wid = schedule.widths[lo:hi]
    amp = np.sqrt(schedule.gamma2[lo:hi])
    # Pulse k is active on [t_arrival, t_arrival + t_width); a sample at
    # exactly the right edge is excluded.
    start = np.ceil((arr - t0) / dt).astype(np.int64)
    stop = np.ceil((arr + wid - t0) / dt).astype(np.int64)
    start = np.clip(start, 0, n_samples)
    stop = np.clip(stop, 0, n_samples)
    keep = stop > start
    if not np.any(keep):
        return env
    diff = np.bincount(start[keep], weights=amp[keep], minlength=n_samples + 1)
    diff -= np.bincount(stop[keep], weights=amp[keep], minlength=n_samples + 1)
    np.cumsum(diff[:n_samples], out=env)
    # the float cumsum leaves ~eps-scale residue after a pulse ends; an exact
    # integer coverage count decides where the envelope is truly nonzero
    cnt = np.bincount(start[keep], minlength=n_samples + 1).astype(np.int64)
    cnt -= np.bincount(stop[keep], minlength=n_samples + 1)
    env[np.cumsum(cnt[:n_samples]) == 0] = 0.0
    return env


def _blocked_normals(rng_seed: int, k0: int, n_samples: int) -> np.ndarray:
    """Two standard-normal rows for absolute samples [k0, k0 + n_samples).

    Draws are a pure function of (seed, absolute block index), so adjacent
    windows concatenate seamlessly.
    """
    out = np.empty((2, n_samples))
    k1 = k0 + n_samples
    for block in range(k0 // SAMPLE_BLOCK, (k1 - 1) // SAMPLE_BLOCK + 1):
        draws = _rng(rng_seed, 0xB10C, block).standard_normal((2, SAMPLE_BLOCK))
        b0 = block * SAMPLE_BLOCK
        lo = max(k0, b0)
        hi = min(k1, b0 + SAMPLE_BLOCK)
        out[:, lo - k0 : hi - k0] = draws[:, lo - b0 : hi - b0]
    return out


def realize_bursty(
    params: BurstyNoiseParams,
    schedule: ImpulseSchedule,
    t_start: float,
    n_samples: int,
    dt: float,
    rng_seed: int,
) -> NoiseTrace:
    """Sample the bursty model on the global grid starting near ``t_start``.

    The window snaps to the global sample grid (instants k*dt with k
    integer), so windows realized separately with the same seed join
    without seams.  Each sample is sigma_G*(n1 + E(t)*n2) with independent
    standard normals n1, n2 and E the summed pulse envelope scaled by
    gamma_k = sqrt(gamma2_k).
    """
    if dt <= 0:
        raise ValueError("dt must be > 0")
    if n_samples < 0:
        raise ValueError("n_samples must be >= 0")
    k0 = int(round(t_start / dt))
    t0 = k0 * dt
    env = _envelope(schedule, t0, n_samples, dt)
    n1, n2 = _blocked_normals(rng_seed, k0, n_samples)
    sigma_g = math.sqrt(params.sigma_g2)
    samples = sigma_g * (n1 + env * n2)
    return NoiseTrace(samples=samples, dt=dt, impulse_mask=env > 0)


def bg_equivalent_params(
    bg: BgNoiseParams, t_symbol: float, n_ext: int, dt: float
) -> BurstyNoiseParams:
    """Bursty parameters that replicate a BG model's impulse rate.

    The pulse width collapses to one sample period and the arrival rate is
    chosen so the expected impulse count per extended symbol equals
    psi * n_ext.
    """
    if bg.psi <= 0:
        raise ValueError("BG equivalence undefined for psi = 0")
    if bg.mu <= 0:
        raise ValueError("BG equivalence undefined for mu = 0")
    if t_symbol <= 0 or n_ext <= 0 or dt <= 0:
        raise ValueError("t_symbol, n_ext and dt must be > 0")
    return BurstyNoiseParams(
        gamma_mean=bg.mu,
        lambda_mean=t_symbol / (bg.psi * n_ext),
        width_mean=dt,
        sigma_g2=bg.sigma_g2,
    )
