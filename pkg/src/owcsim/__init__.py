"""owcsim: Monte Carlo simulator for indoor optical wireless downlinks.

Compares VCSEL micro-lens-array access points against LED access points
under zero-forcing multi-user precoding: per-user SINR, achievable rate,
sum rate, and consumption factor (bits per joule) versus number of users.
"""

from .channel import ChannelMatrix, build_channel_matrix, led_channel_gain, vcsel_channel_gain
from .errors import ConfigError, RankDeficientChannelError
from .metrics import consumed_power, consumption_factor, ook_sinr_threshold, rate_per_user
from .noise import NoiseBreakdown, noise_components
from .optics import (
    BeamState,
    FreeSpace,
    ThinLens,
    array_spot_area,
    beam_from_waist,
    beam_radius,
    collect_power_square_aperture,
    gaussian_irradiance,
    lambertian_los_gain,
    rayleigh_range,
    transform_beam,
)
from .precoding import (
    PrecoderMatrix,
    SinrReport,
    allocate_power,
    effective_gains,
    min_norm_precoder,
    schedule_groups,
    sinr_per_user,
    zf_precoder,
)
from .rng import SplitMix64, drop_seed, mix64
from .runner import DropResult, SweepResult, run_drop, sweep_users
from .scenario import (
    ApSpec,
    LedUnitParams,
    RateModel,
    ReceiverParams,
    Room,
    Scenario,
    SystemKind,
    VcselArrayParams,
    Vec3,
    default_ap_grid,
    place_users,
    validate_config,
)

__version__ = "0.1.0"
