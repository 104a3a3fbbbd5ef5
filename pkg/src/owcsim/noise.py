"""Receiver noise model: four variance terms and their root-sum-square.

All terms are one-sided variances in A^2 over the signal bandwidth B:

    thermal          4 k_B T B / R_L
    preamplifier     (F - 1) * 4 k_B T B / R_L,  F = 10^(NF_dB/10)
    RIN              10^(RIN_dB/10) * i_sig^2 * B   (laser links only)
    background shot  2 q_e I_bg B

so thermal + preamp together equal the standard 4 k_B T F B / R_L. RIN
depends on the user's own signal photocurrent, which is why callers compute
noise per user after the signal level is known. Shot noise from the signal
itself is off by default and available as an explicit switch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .scenario import ReceiverParams

K_B = 1.380649e-23  # J/K
Q_E = 1.602176634e-19  # C


@dataclass(frozen=True)
class NoiseBreakdown:
    """Variance per term plus the combined standard deviation.

    total_std is the root-sum-square of the four canonical terms plus the
    optional signal-shot term (zero unless explicitly enabled).
    """

    thermal_var: float
    preamp_var: float
    rin_var: float
    background_shot_var: float
    total_std: float
    signal_shot_var: float = 0.0


def noise_components(
    receiver: ReceiverParams,
    bandwidth: float,
    rin_db_per_hz,
    signal_photocurrent: float,
    include_signal_shot: bool = False,
) -> NoiseBreakdown:
    """Evaluate every noise term at the given bandwidth and signal level.

    rin_db_per_hz of None disables the RIN term (LED links have no RIN).
    """
    if not (bandwidth > 0):
        raise ValueError(f"bandwidth must be > 0, got {bandwidth!r}")
    if signal_photocurrent < 0:
        raise ValueError(
            f"signal_photocurrent must be >= 0, got {signal_photocurrent!r}"
        )
    thermal = 4.0 * K_B * receiver.temperature_k * bandwidth / receiver.load_resistance
    noise_factor = 10.0 ** (receiver.tia_noise_figure_db / 10.0)
    preamp = (noise_factor - 1.0) * thermal
    if rin_db_per_hz is None:
        rin = 0.0
    else:
        rin = 10.0 ** (rin_db_per_hz / 10.0) * signal_photocurrent**2 * bandwidth
    bg_shot = 2.0 * Q_E * receiver.background_current * bandwidth
    sig_shot = 2.0 * Q_E * signal_photocurrent * bandwidth if include_signal_shot else 0.0
    total = math.sqrt(thermal + preamp + rin + bg_shot + sig_shot)
    return NoiseBreakdown(
        thermal_var=thermal,
        preamp_var=preamp,
        rin_var=rin,
        background_shot_var=bg_shot,
        total_std=total,
        signal_shot_var=sig_shot,
    )
