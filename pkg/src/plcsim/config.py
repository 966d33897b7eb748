"""Flat key-value experiment configuration: parse, resolve, dump.

Grammar: INI-style sections with ``key = value`` lines, ``#`` comments.
Sections: [run], [channel], [ofdm], [noise], plus any number of
[curve:<label>] sections that override the noise model per curve, and an
optional [manifest] section (written by the tool, ignored on parse).
Unknown sections or keys are rejected, not ignored.

All paper-derived defaults are available as the named preset
``paper-sec3``; an empty document with that preset resolves to the full
reference setup.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, replace

from . import __version__
from .bersim import SimConfig
from .channel import ChannelParams, PathParams, table1_channel
from .noise import BgNoiseParams, BurstyNoiseParams
from .ofdm import OfdmConfig, default_ofdm


class ConfigError(ValueError):
    """Configuration syntax or semantic error."""


PRESETS = ("paper-sec3",)

_RUN_KEYS = {"preset", "noise_model", "snr_db", "n_symbols", "min_errors",
             "master_seed", "label"}
_CHANNEL_KEYS = {"model", "a_scale", "a0", "a1", "k_exp", "k2_exp",
                 "phase_velocity", "freq_unit", "paths"}
_OFDM_KEYS = {"n_fft", "cp_len", "fs_hz", "active_set"}
_NOISE_KEYS = {"psi", "mu", "gamma_mean", "lambda_mean", "width_mean"}
_CURVE_KEYS = {"noise_model"} | _NOISE_KEYS
_MANIFEST_KEYS = {"tool_version", "created_utc", "master_seed", "outputs"}

# paper-sec3 baseline; explicit keys override any of these.
_DEFAULTS = {
    "run": {
        "noise_model": "bursty",
        "snr_db": "0,5,10,15,20",
        "n_symbols": "10000",
        "min_errors": "100",
        "master_seed": "1",
    },
    "channel": {"model": "table1"},
    "ofdm": {
        "n_fft": "1024",
        "cp_len": "150",
        "fs_hz": "24999936",
        "active_set": "74-409",
    },
    "noise": {
        "psi": "0.1",
        "mu": "10",
        "gamma_mean": "100",
        "lambda_mean": "0.015",
        "width_mean": "60e-6",
    },
}


@dataclass(frozen=True)
class CurveSpec:
    label: str
    sim: SimConfig


@dataclass(frozen=True)
class ResolvedConfig:
    """Fully resolved experiment: one or more curves sharing everything but
    the noise model."""

    curves: tuple[CurveSpec, ...]

    @property
    def base(self) -> SimConfig:
        return self.curves[0].sim


def _num(section: str, key: str, raw: str, conv, check=None, what: str = ""):
    try:
        val = conv(raw)
    except ValueError:
        raise ConfigError(f"{section}.{key}: cannot parse {raw!r}") from None
    if check is not None and not check(val):
        raise ConfigError(f"{section}.{key}: {what}, got {raw!r}")
    return val


def _parse_active_set(raw: str) -> tuple[int, ...]:
    out: list[int] = []
    for tok in raw.split(","):
        tok = tok.strip()
        if "-" in tok:
            a, b = tok.split("-", 1)
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(tok))
    return tuple(out)


def _format_active_set(active: tuple[int, ...]) -> str:
    runs = []
    start = prev = active[0]
    for k in active[1:]:
        if k == prev + 1:
            prev = k
            continue
        runs.append((start, prev))
        start = prev = k
    runs.append((start, prev))
    return ",".join(f"{a}-{b}" if b > a else f"{a}" for a, b in runs)


def _parse_paths(raw: str) -> tuple[PathParams, ...]:
    paths = []
    for i, trip in enumerate(raw.split(";")):
        parts = [p.strip() for p in trip.split(",")]
        if len(parts) != 3:
            raise ConfigError(
                f"channel.paths: entry {i} must be 'g,c,ell', got {trip.strip()!r}"
            )
        try:
            paths.append(PathParams(float(parts[0]), float(parts[1]), float(parts[2])))
        except ValueError as exc:
            raise ConfigError(f"channel.paths: entry {i}: {exc}") from None
    return tuple(paths)


def _build_channel(sec: dict) -> ChannelParams | None:
    model = sec.get("model", "table1")
    if model == "flat":
        extra = set(sec) - {"model"}
        if extra:
            raise ConfigError(
                f"channel: keys {sorted(extra)} not allowed with model=flat"
            )
        return None
    if model not in ("table1", "custom"):
        raise ConfigError(f"channel.model: must be table1, flat or custom, got {model!r}")
    base = table1_channel()
    kwargs = {}
    for key in ("a_scale", "a0", "a1", "k_exp", "k2_exp", "phase_velocity"):
        if key in sec:
            kwargs[key] = _num("channel", key, sec[key], float)
    if "freq_unit" in sec:
        kwargs["freq_unit"] = sec["freq_unit"]
    if "paths" in sec:
        kwargs["paths"] = _parse_paths(sec["paths"])
    elif model == "custom":
        raise ConfigError("channel: model=custom requires the paths key")
    try:
        return replace(base, **kwargs)
    except ValueError as exc:
        raise ConfigError(f"channel: ChannelParams: {exc}") from None


def _build_ofdm(sec: dict) -> OfdmConfig:
    try:
        return OfdmConfig(
            n_fft=_num("ofdm", "n_fft", sec["n_fft"], int),
            cp_len=_num("ofdm", "cp_len", sec["cp_len"], int),
            fs=_num("ofdm", "fs_hz", sec["fs_hz"], float),
            active_set=_parse_active_set(sec["active_set"]),
        )
    except ValueError as exc:
        raise ConfigError(f"ofdm: OfdmConfig: {exc}") from None


def _build_noise_params(model: str, sec: dict):
    try:
        if model == "awgn":
            return None
        if model in ("bg", "bg-equivalent"):
            return BgNoiseParams(
                psi=_num("noise", "psi", sec["psi"], float),
                mu=_num("noise", "mu", sec["mu"], float),
                sigma_g2=1.0,
            )
        return BurstyNoiseParams(
            gamma_mean=_num("noise", "gamma_mean", sec["gamma_mean"], float),
            lambda_mean=_num("noise", "lambda_mean", sec["lambda_mean"], float),
            width_mean=_num("noise", "width_mean", sec["width_mean"], float),
            sigma_g2=1.0,
        )
    except KeyError as exc:
        raise ConfigError(f"noise: model {model!r} requires key {exc.args[0]}") from None
    except ValueError as exc:
        cls = "BgNoiseParams" if model != "bursty" else "BurstyNoiseParams"
        raise ConfigError(f"noise: {cls}: {exc}") from None


def parse_config(
    text: str,
    preset: str | None = None,
    master_seed: int | None = None,
    n_symbols: int | None = None,
    min_errors: int | None = None,
) -> ResolvedConfig:
    """Parse and fully resolve a config document.

    Keyword arguments are command-line overrides applied after parsing.
    """
    cp = configparser.ConfigParser(
        interpolation=None, strict=True, delimiters=("=",), default_section="<none>"
    )
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"syntax error: {exc}") from None

    sections: dict[str, dict] = {}
    curves_raw: dict[str, dict] = {}
    for name in cp.sections():
        items = dict(cp.items(name))
        if name.startswith("curve:"):
            label = name[len("curve:") :].strip()
            if not label:
                raise ConfigError("curve section requires a label: [curve:<label>]")
            if label in curves_raw:
                raise ConfigError(f"duplicate curve label {label!r}")
            extra = set(items) - _CURVE_KEYS
            if extra:
                raise ConfigError(f"[curve:{label}]: unknown keys {sorted(extra)}")
            curves_raw[label] = items
            continue
        allowed = {
            "run": _RUN_KEYS,
            "channel": _CHANNEL_KEYS,
            "ofdm": _OFDM_KEYS,
            "noise": _NOISE_KEYS,
            "manifest": _MANIFEST_KEYS,
        }.get(name)
        if allowed is None:
            raise ConfigError(f"unknown section [{name}]")
        extra = set(items) - allowed
        if extra:
            raise ConfigError(f"[{name}]: unknown keys {sorted(extra)}")
        sections[name] = items

    run = dict(_DEFAULTS["run"], **sections.get("run", {}))
    chan_sec = dict(_DEFAULTS["channel"], **sections.get("channel", {}))
    ofdm_sec = dict(_DEFAULTS["ofdm"], **sections.get("ofdm", {}))
    noise_sec = dict(_DEFAULTS["noise"], **sections.get("noise", {}))

    doc_preset = run.pop("preset", None)
    for p in (doc_preset, preset):
        if p is not None and p not in PRESETS:
            raise ConfigError(f"unknown preset {p!r}; available: {PRESETS}")

    label = run.pop("label", None)
    channel = _build_channel(chan_sec)
    ofdm = _build_ofdm(ofdm_sec)
    snr_points = tuple(
        _num("run", "snr_db", tok.strip(), float) for tok in run["snr_db"].split(",")
    )

    def make_sim(model: str, nsec: dict) -> SimConfig:
        try:
            return SimConfig(
                snr_points=snr_points,
                n_symbols=(
                    n_symbols
                    if n_symbols is not None
                    else _num("run", "n_symbols", run["n_symbols"], int)
                ),
                noise_model=model,
                model_params=_build_noise_params(model, nsec),
                channel=channel,
                ofdm=ofdm,
                master_seed=(
                    master_seed
                    if master_seed is not None
                    else _num("run", "master_seed", run["master_seed"], int)
                ),
                min_errors=(
                    min_errors
                    if min_errors is not None
                    else _num("run", "min_errors", run["min_errors"], int)
                ),
            )
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"run: SimConfig: {exc}") from None

    base_model = run["noise_model"]
    curves: list[CurveSpec] = []
    if curves_raw:
        for clabel, items in curves_raw.items():
            model = items.get("noise_model", base_model)
            nsec = dict(noise_sec)
            nsec.update({k: v for k, v in items.items() if k in _NOISE_KEYS})
            curves.append(CurveSpec(label=clabel, sim=make_sim(model, nsec)))
    else:
        curves.append(
            CurveSpec(label=label or base_model, sim=make_sim(base_model, noise_sec))
        )
    return ResolvedConfig(curves=tuple(curves))


def _fmt(x) -> str:
    return repr(float(x))


def _noise_items(sim: SimConfig) -> list[tuple[str, str]]:
    p = sim.model_params
    if p is None:
        return []
    if isinstance(p, BgNoiseParams):
        return [("psi", _fmt(p.psi)), ("mu", _fmt(p.mu))]
    return [
        ("gamma_mean", _fmt(p.gamma_mean)),
        ("lambda_mean", _fmt(p.lambda_mean)),
        ("width_mean", _fmt(p.width_mean)),
    ]


def dump_config(resolved: ResolvedConfig) -> str:
    """Emit a document that re-parses to an identical ResolvedConfig."""
    base = resolved.base
    out = io.StringIO()

    out.write("[run]\n")
    out.write(f"noise_model = {base.noise_model}\n")
    out.write(f"snr_db = {','.join(_fmt(s) for s in base.snr_points)}\n")
    out.write(f"n_symbols = {base.n_symbols}\n")
    out.write(f"min_errors = {base.min_errors}\n")
    out.write(f"master_seed = {base.master_seed}\n")
    if len(resolved.curves) == 1:
        out.write(f"label = {resolved.curves[0].label}\n")

    out.write("\n[channel]\n")
    if base.channel is None:
        out.write("model = flat\n")
    else:
        ch = base.channel
        out.write("model = custom\n")
        out.write(f"a_scale = {_fmt(ch.a_scale)}\n")
        out.write(f"a0 = {_fmt(ch.a0)}\n")
        out.write(f"a1 = {_fmt(ch.a1)}\n")
        out.write(f"k_exp = {_fmt(ch.k_exp)}\n")
        out.write(f"k2_exp = {_fmt(ch.k2_exp)}\n")
        out.write(f"phase_velocity = {_fmt(ch.phase_velocity)}\n")
        out.write(f"freq_unit = {ch.freq_unit}\n")
        paths = "; ".join(f"{_fmt(p.g)},{_fmt(p.c)},{_fmt(p.ell)}" for p in ch.paths)
        out.write(f"paths = {paths}\n")

    o = base.ofdm
    out.write("\n[ofdm]\n")
    out.write(f"n_fft = {o.n_fft}\n")
    out.write(f"cp_len = {o.cp_len}\n")
    out.write(f"fs_hz = {_fmt(o.fs)}\n")
    out.write(f"active_set = {_format_active_set(o.active_set)}\n")

    items = _noise_items(base)
    if items:
        out.write("\n[noise]\n")
        for k, v in items:
            out.write(f"{k} = {v}\n")

    if len(resolved.curves) > 1:
        for spec in resolved.curves:
            out.write(f"\n[curve:{spec.label}]\n")
            out.write(f"noise_model = {spec.sim.noise_model}\n")
            for k, v in _noise_items(spec.sim):
                out.write(f"{k} = {v}\n")
    return out.getvalue()


def render_manifest(
    resolved: ResolvedConfig, outputs: list[str], created_utc: str
) -> str:
    """Config echo plus provenance; round-trips through parse_config."""
    lines = [
        "[manifest]",
        f"tool_version = {__version__}",
        f"created_utc = {created_utc}",
        f"master_seed = {resolved.base.master_seed}",
        f"outputs = {','.join(outputs)}",
        "",
        dump_config(resolved),
    ]
    return "\n".join(lines)
