"""SINR-to-rate mapping, sum rate, and the consumption factor.

Two rate models are offered. Shannon caps (B log2(1+sinr)) give the smooth
curves used for system comparison; the OOK model is the literal modulation
reading: one bit per symbol at symbol rate B whenever the pre-FEC bit error
rate Q(sqrt(sinr)) clears the FEC limit, zero otherwise.

The consumption factor is delivered bits per joule of transmitter
electrical energy, also reported in Gb/mJ (1 Gb/mJ = 1e12 b/J).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfcinv

from .scenario import RateModel, Scenario, SystemKind


@dataclass(frozen=True)
class RateReport:
    per_user_rate: np.ndarray
    sum_rate: float
    duty_factors: np.ndarray


@dataclass(frozen=True)
class EnergyReport:
    consumed_power: float
    consumption_factor: float
    consumption_factor_gb_per_mj: float


def q_function(x: float) -> float:
    """Gaussian tail probability Q(x) = erfc(x / sqrt 2) / 2."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def ook_sinr_threshold(fec_ber_limit: float) -> float:
    """Smallest SINR at which OOK clears the FEC limit: Q(sqrt s) = limit."""
    if not (0 < fec_ber_limit < 0.5):
        raise ValueError(f"fec_ber_limit must lie in (0, 0.5), got {fec_ber_limit!r}")
    return 2.0 * erfcinv(2.0 * fec_ber_limit) ** 2


def rate_per_user(
    sinr: float,
    bandwidth: float,
    model: RateModel,
    fec_ber_limit: float = 1e-3,
) -> float:
    """Achievable bit rate of one user at the given linear SINR."""
    assert sinr >= 0 and bandwidth > 0
    if model is RateModel.SHANNON:
        return bandwidth * math.log2(1.0 + sinr)
    if sinr == 0.0:
        return 0.0
    return bandwidth if q_function(math.sqrt(sinr)) <= fec_ber_limit else 0.0


def rate_report(per_user_sinr, bandwidth, model, fec_ber_limit, duty_factors=None) -> RateReport:
    """Per-user rates scaled by duty factors, plus their sum."""
    sinr = np.asarray(per_user_sinr, dtype=float)
    duty = (
        np.ones_like(sinr)
        if duty_factors is None
        else np.broadcast_to(np.asarray(duty_factors, dtype=float), sinr.shape)
    )
    rates = np.array(
        [d * rate_per_user(s, bandwidth, model, fec_ber_limit) for s, d in zip(sinr, duty)]
    )
    return RateReport(per_user_rate=rates, sum_rate=float(rates.sum()), duty_factors=np.array(duty))


def consumed_power(scenario: Scenario, system: SystemKind) -> float:
    """Total transmitter electrical draw: every AP always on."""
    if system is SystemKind.VCSEL:
        per_ap = scenario.vcsel.total_electrical_power
    else:
        per_ap = scenario.led.total_electrical_power
    return len(scenario.aps) * per_ap


def consumption_factor(sum_rate: float, consumed_power_w: float) -> EnergyReport:
    """Bits delivered per joule of transmitter electrical energy."""
    if not (consumed_power_w > 0):
        raise ValueError(f"consumed power must be > 0, got {consumed_power_w!r}")
    bpj = sum_rate / consumed_power_w
    return EnergyReport(
        consumed_power=consumed_power_w,
        consumption_factor=bpj,
        consumption_factor_gb_per_mj=bpj * 1e-12,
    )
