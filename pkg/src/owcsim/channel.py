"""LOS channel-gain computation for both AP technologies.

A channel entry is the dimensionless fraction of an AP's transmitted
optical power that lands on one user's detector over the direct path.
Only the line-of-sight ray is evaluated; reflections are out of scope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import optics
from .scenario import (
    ApSpec,
    LedUnitParams,
    ReceiverParams,
    Scenario,
    SystemKind,
    VcselArrayParams,
    Vec3,
)


@dataclass(frozen=True)
class ChannelMatrix:
    """n_users x n_aps gain matrix; rows follow user order, columns AP order."""

    entries: np.ndarray
    system: SystemKind

    def __post_init__(self):
        e = self.entries
        assert e.ndim == 2
        assert np.all(e >= 0.0) and np.all(e <= 1.0), "gains must lie in [0, 1]"


def _los_geometry(ap: ApSpec, user_pos: Vec3):
    """Lateral offsets, vertical drop, slant distance, and the link cosine.

    AP points straight down and the detector faces straight up, so the
    emission and incidence angles coincide: cos = vertical / distance.
    """
    dx = user_pos.x - ap.position.x
    dy = user_pos.y - ap.position.y
    vertical = ap.position.z - user_pos.z
    if vertical <= 0:
        raise ValueError("user must lie below the AP plane")
    distance = math.sqrt(dx * dx + dy * dy + vertical * vertical)
    return dx, dy, vertical, distance, vertical / distance


def vcsel_channel_gain(
    ap: ApSpec,
    vcsel: VcselArrayParams,
    receiver: ReceiverParams,
    user_pos: Vec3,
) -> float:
    """Fraction of the array's emitted power collected by one detector.

    Each element's beam travels the same lens chain down the vertical drop;
    the spots land offset by the element grid positions. Collected powers
    add incoherently, are scaled by the incidence cosine, and normalized by
    the array's total emitted power. Exactly 0 outside the receiver FOV.
    """
    dx, dy, vertical, _, cos_link = _los_geometry(ap, user_pos)
    if cos_link < math.cos(receiver.fov_half_angle):
        return 0.0
    beam = optics.vcsel_element_beam(vcsel, vertical)
    w = optics.beam_radius(beam)
    a = receiver.half_side
    collected = 0.0
    for ex, ey in optics.element_offsets(vcsel):
        collected += optics.collect_power_square_aperture(
            (dx - ex, dy - ey), w, vcsel.optical_power_per_element, a
        )
    return collected * cos_link / vcsel.total_optical_power


def led_channel_gain(
    ap: ApSpec,
    led: LedUnitParams,
    receiver: ReceiverParams,
    user_pos: Vec3,
) -> float:
    """Unit gain of one LED AP: n co-located Lambertian emitters."""
    _, _, _, distance, cos_link = _los_geometry(ap, user_pos)
    single = optics.lambertian_los_gain(
        led.lambertian_order_m,
        receiver.detector_area,
        distance,
        cos_link,
        cos_link,
        receiver.fov_half_angle,
    )
    return led.n_emitters * single


def build_channel_matrix(scenario: Scenario, system: SystemKind) -> ChannelMatrix:
    """Evaluate every (user, AP) direct path for the chosen system."""
    receiver = scenario.receiver_for(system)
    n_u, n_a = len(scenario.users), len(scenario.aps)
    entries = np.zeros((n_u, n_a))
    for u, user in enumerate(scenario.users):
        for a, ap in enumerate(scenario.aps):
            try:
                if system is SystemKind.VCSEL:
                    g = vcsel_channel_gain(ap, scenario.vcsel, receiver, user)
                else:
                    g = led_channel_gain(ap, scenario.led, receiver, user)
            except ValueError as exc:
                raise ValueError(f"channel entry (user {u}, ap {a}): {exc}") from exc
            entries[u, a] = g
    return ChannelMatrix(entries=entries, system=system)
