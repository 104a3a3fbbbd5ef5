"""Gaussian-beam propagation and the Lambertian emission model.

The beam engine is the standard complex-q formalism: a TEM00 beam is fully
described by q = z + i*z_R relative to its embedded waist, and every optical
element acts on q through its ABCD matrix. Only two elements exist here,
free space and an ideal thin lens, which is all the micro-lens chain needs.

Collected power on the square detector comes out in closed form as a
product of error functions, so channel gains need no numerical quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .scenario import VcselArrayParams


@dataclass(frozen=True)
class BeamState:
    """A TEM00 beam at some plane: complex parameter, wavelength, power."""

    q: complex
    wavelength: float
    total_power: float

    def __post_init__(self):
        assert self.q.imag > 0, "non-physical beam (Im q <= 0)"
        assert self.total_power > 0
        assert self.wavelength > 0


@dataclass(frozen=True)
class FreeSpace:
    distance: float

    def __post_init__(self):
        assert self.distance >= 0


@dataclass(frozen=True)
class ThinLens:
    focal_length: float

    def __post_init__(self):
        assert self.focal_length != 0


OpticalElement = FreeSpace | ThinLens


def rayleigh_range(w0: float, wavelength: float) -> float:
    """z_R = pi w0^2 / lambda for a waist radius w0."""
    if not (w0 > 0) or not (wavelength > 0):
        raise ValueError(f"w0 and wavelength must be > 0, got {w0!r}, {wavelength!r}")
    return math.pi * w0 * w0 / wavelength


def beam_from_waist(w0: float, wavelength: float, total_power: float) -> BeamState:
    """Beam at its waist plane: q = i*z_R."""
    return BeamState(
        q=complex(0.0, rayleigh_range(w0, wavelength)),
        wavelength=wavelength,
        total_power=total_power,
    )


def transform_beam(beam: BeamState, element: OpticalElement) -> BeamState:
    """Apply one ABCD element to the beam; power and wavelength pass through."""
    if isinstance(element, FreeSpace):
        q = beam.q + element.distance
    elif isinstance(element, ThinLens):
        q = 1.0 / (1.0 / beam.q - 1.0 / element.focal_length)
    else:
        raise TypeError(f"unknown optical element {element!r}")
    assert q.imag > 0, "element produced a non-physical beam"
    return replace(beam, q=q)


def propagate(beam: BeamState, elements) -> BeamState:
    for element in elements:
        beam = transform_beam(beam, element)
    return beam


def beam_radius(beam: BeamState) -> float:
    """1/e^2 intensity radius at the beam's current plane.

    From the q parameter: W^2 = -lambda / (pi * Im(1/q)).
    """
    inv_q = 1.0 / beam.q
    return math.sqrt(-beam.wavelength / (math.pi * inv_q.imag))


def gaussian_irradiance(power: float, radius_w: float, r_offaxis: float) -> float:
    """Irradiance of a circular Gaussian beam at off-axis distance r.

    I(r) = (2P / pi W^2) * exp(-2 r^2 / W^2).
    """
    assert power > 0 and radius_w > 0 and r_offaxis >= 0
    w2 = radius_w * radius_w
    return (2.0 * power / (math.pi * w2)) * math.exp(-2.0 * r_offaxis * r_offaxis / w2)


def collect_power_square_aperture(
    beam_center_offset: tuple[float, float],
    radius_w: float,
    power: float,
    half_side_a: float,
) -> float:
    """Power a square aperture collects from a Gaussian spot, in closed form.

    The aperture is |x| <= a, |y| <= a with the beam centered at
    (x0, y0) = beam_center_offset. The 2-D integral of the TEM00 profile
    separates into an erf product:

        P/4 * [erf(sqrt2 (a-x0)/W) + erf(sqrt2 (a+x0)/W)] * [same in y]
    """
    assert radius_w > 0 and half_side_a > 0
    x0, y0 = beam_center_offset
    s = math.sqrt(2.0) / radius_w
    a = half_side_a
    fx = math.erf(s * (a - x0)) + math.erf(s * (a + x0))
    fy = math.erf(s * (a - y0)) + math.erf(s * (a + y0))
    return 0.25 * power * fx * fy


def lambertian_los_gain(
    order_m: float,
    detector_area: float,
    distance: float,
    cos_emit: float,
    cos_incid: float,
    fov_half_angle: float,
) -> float:
    """LOS DC gain of a generalized Lambertian emitter onto a flat detector.

    H = (m+1) A / (2 pi d^2) * cos^m(phi) * cos(psi), and exactly 0 once the
    incidence angle psi exceeds the receiver field of view.
    """
    assert distance > 0
    assert 0.0 <= cos_emit <= 1.0 and 0.0 <= cos_incid <= 1.0
    if cos_incid < math.cos(fov_half_angle):
        return 0.0
    return (
        (order_m + 1.0)
        * detector_area
        / (2.0 * math.pi * distance * distance)
        * cos_emit**order_m
        * cos_incid
    )


def vcsel_element_beam(vcsel: VcselArrayParams, link_distance: float) -> BeamState:
    """One array element's beam at the receive plane.

    The chain is waist -> FreeSpace(vcsel_to_lens) -> ThinLens(f) ->
    FreeSpace(link_distance); every element sees the same chain, offset
    laterally by its grid position.
    """
    assert link_distance > 0
    beam = beam_from_waist(
        vcsel.beam_waist_w0, vcsel.wavelength, vcsel.optical_power_per_element
    )
    return propagate(
        beam,
        (
            FreeSpace(vcsel.vcsel_to_lens),
            ThinLens(vcsel.lens_focal_length),
            FreeSpace(link_distance),
        ),
    )


def array_extent_radius(vcsel: VcselArrayParams) -> float:
    """Center-to-corner-element distance of the square emitter grid."""
    side = math.isqrt(vcsel.n_elements)
    return vcsel.pitch * (side - 1) / 2.0


def element_offsets(vcsel: VcselArrayParams) -> list[tuple[float, float]]:
    """Lateral (x, y) positions of each emitter, centered on the array axis."""
    side = math.isqrt(vcsel.n_elements)
    half = (side - 1) / 2.0
    return [
        ((i - half) * vcsel.pitch, (j - half) * vcsel.pitch)
        for i in range(side)
        for j in range(side)
    ]


def array_spot_area(vcsel: VcselArrayParams, link_distance: float) -> float:
    """1/e^2 footprint area of the whole array's union spot on the plane.

    The union radius is one element's beam radius plus the half-diagonal
    offset of the outermost elements along an axis; the area is pi r^2.
    Reported as a diagnostic so it can be compared against nominal spot
    figures for the same geometry.
    """
    w_final = beam_radius(vcsel_element_beam(vcsel, link_distance))
    side = math.isqrt(vcsel.n_elements)
    r_union = w_final + vcsel.pitch * (side - 1) / 2.0
    return math.pi * r_union * r_union
