"""OFDM/BPSK bit-error-rate simulator for power-line channels with
Bernoulli-Gaussian and bursty impulsive noise."""

__version__ = "0.1.0"

from .bersim import (  # noqa: F401
    BerCurve,
    BerPoint,
    SimConfig,
    awgn_reference,
    run_point,
    run_sweep,
    snr_to_sigma,
)
from .channel import (  # noqa: F401
    ChannelParams,
    FrequencyResponse,
    PathParams,
    ctf_at,
    power_db,
    sample_response,
    subcarrier_gains,
    table1_channel,
)
from .noise import (  # noqa: F401
    BgNoiseParams,
    BurstyNoiseParams,
    ImpulseEvent,
    ImpulseSchedule,
    NoiseTrace,
    bg_equivalent_params,
    bg_pdf,
    gen_bg,
    gen_impulse_schedule,
    realize_bursty,
)
from .ofdm import (  # noqa: F401
    OfdmConfig,
    apply_channel,
    bpsk_demap,
    bpsk_map,
    default_ofdm,
    demodulate,
    equalize,
    modulate,
)
