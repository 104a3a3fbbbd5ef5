"""Gaussian-beam engine tests: oracles, ABCD algebra, aperture integrals."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from owcsim.optics import (
    BeamState,
    FreeSpace,
    ThinLens,
    array_spot_area,
    beam_from_waist,
    beam_radius,
    collect_power_square_aperture,
    element_offsets,
    gaussian_irradiance,
    lambertian_los_gain,
    propagate,
    rayleigh_range,
    transform_beam,
    vcsel_element_beam,
)
from owcsim.scenario import VcselArrayParams

W0 = 5e-6
WL = 1550e-9


def quad_collected(x0, y0, w, power, a, nodes=256):
    """Brute-force 2-D Gauss-Legendre integration of the Gaussian spot."""
    x, wx = np.polynomial.legendre.leggauss(nodes)
    xs = a * x
    ws = a * wx
    gx = np.exp(-2.0 * (xs - x0) ** 2 / w**2)
    gy = np.exp(-2.0 * (xs - y0) ** 2 / w**2)
    peak = 2.0 * power / (math.pi * w * w)
    return peak * (ws @ gx) * (ws @ gy)


def test_rayleigh_range_value():
    # independently computed: pi * (5 um)^2 / 1550 nm = 50.6708 um
    assert abs(rayleigh_range(W0, WL) - 50.67e-6) <= 0.01e-6


def test_rayleigh_range_trivial_cases():
    assert rayleigh_range(1.0, math.pi) == pytest.approx(1.0, rel=1e-15)
    assert rayleigh_range(2 * W0, WL) == pytest.approx(4 * rayleigh_range(W0, WL), rel=1e-15)


def test_rayleigh_range_rejects_nonpositive():
    with pytest.raises(ValueError):
        rayleigh_range(0.0, WL)
    with pytest.raises(ValueError):
        rayleigh_range(W0, -1.0)


def test_free_space_translates_q():
    beam = beam_from_waist(W0, WL, 1.0)
    zr = rayleigh_range(W0, WL)
    out = transform_beam(beam, FreeSpace(0.5))
    assert out.q == pytest.approx(complex(0.5, zr))
    assert out.total_power == beam.total_power
    assert out.wavelength == beam.wavelength


def test_thin_lens_at_match_focal_length():
    # waist beam with z_R = f through ThinLens(f): q' = f(-1+i)/2
    f = 2e-3
    w0 = math.sqrt(f * WL / math.pi)  # makes z_R == f
    beam = beam_from_waist(w0, WL, 1.0)
    out = transform_beam(beam, ThinLens(f))
    assert out.q == pytest.approx(f * complex(-1.0, 1.0) / 2.0, rel=1e-12)


def test_free_space_zero_is_identity():
    beam = beam_from_waist(W0, WL, 2.0)
    out = transform_beam(beam, FreeSpace(0.0))
    assert out == beam


def test_free_space_composition():
    beam = beam_from_waist(W0, WL, 1.0)
    ab = propagate(beam, (FreeSpace(0.3), FreeSpace(0.9)))
    once = transform_beam(beam, FreeSpace(1.2))
    assert ab.q == pytest.approx(once.q, rel=1e-15)


def test_thin_lens_involution():
    # applying ThinLens(f) twice subtracts 2/f: same as ThinLens(f/2) once
    beam = transform_beam(beam_from_waist(W0, WL, 1.0), FreeSpace(1e-4))
    twice = propagate(beam, (ThinLens(0.5e-3), ThinLens(0.5e-3)))
    once = transform_beam(beam, ThinLens(0.25e-3))
    assert twice.q == pytest.approx(once.q, rel=1e-12)


def test_beam_radius_at_waist_and_one_rayleigh():
    zr = rayleigh_range(W0, WL)
    beam = beam_from_waist(W0, WL, 1.0)
    assert beam_radius(beam) == pytest.approx(W0, rel=1e-12)
    at_zr = transform_beam(beam, FreeSpace(zr))
    assert beam_radius(at_zr) == pytest.approx(W0 * math.sqrt(2.0), rel=1e-12)


def test_beam_radius_after_vcsel_to_lens_gap():
    beam = transform_beam(beam_from_waist(W0, WL, 1.0), FreeSpace(0.133e-3))
    assert beam_radius(beam) == pytest.approx(14.05e-6, rel=0.01)


@given(st.floats(min_value=1e-6, max_value=10.0))
@settings(max_examples=60)
def test_beam_radius_matches_hyperbolic_law(z):
    zr = rayleigh_range(W0, WL)
    beam = transform_beam(beam_from_waist(W0, WL, 1.0), FreeSpace(z))
    expected = W0 * math.sqrt(1.0 + (z / zr) ** 2)
    assert beam_radius(beam) == pytest.approx(expected, rel=1e-12)


def test_gaussian_irradiance_values():
    assert gaussian_irradiance(1.0, 1.0, 0.0) == pytest.approx(2.0 / math.pi, rel=1e-15)
    on_axis = gaussian_irradiance(3.0, 0.2, 0.0)
    at_w = gaussian_irradiance(3.0, 0.2, 0.2)
    assert at_w == pytest.approx(on_axis * math.exp(-2.0), rel=1e-12)


def test_gaussian_irradiance_normalizes():
    # radial integral of I(r) 2 pi r dr recovers the power
    from scipy.integrate import trapezoid

    w = 0.37
    sub = np.linspace(0, 10 * w, 2001)
    vals = np.array([gaussian_irradiance(2.5, w, r) for r in sub])
    total = trapezoid(vals * 2 * math.pi * sub, sub)
    assert total == pytest.approx(2.5, rel=1e-3)


def test_collect_total_power_limit():
    # aperture much larger than the spot swallows everything
    got = collect_power_square_aperture((0.0, 0.0), 0.01, 1.0, 0.2)
    assert got == pytest.approx(1.0, rel=1e-8)


def test_collect_centered_aperture_equal_to_w():
    got = collect_power_square_aperture((0.0, 0.0), 1.0, 1.0, 1.0)
    assert got == pytest.approx(math.erf(math.sqrt(2.0)) ** 2, abs=1e-4)


def test_collect_far_offset_vanishes():
    got = collect_power_square_aperture((50.0, 0.0), 1.0, 1.0, 1.0)
    assert got == 0.0


def test_collect_matches_quadrature_sampled():
    rng = np.random.default_rng(7)
    for _ in range(20):
        a = rng.uniform(0.3, 2.0)
        w = rng.uniform(0.2, 4.0) * a
        x0 = rng.uniform(-2.0, 2.0) * a
        y0 = rng.uniform(-2.0, 2.0) * a
        p = rng.uniform(0.1, 5.0)
        closed = collect_power_square_aperture((x0, y0), w, p, a)
        brute = quad_collected(x0, y0, w, p, a)
        assert closed == pytest.approx(brute, rel=1e-6, abs=1e-12 * p)


@given(
    st.floats(min_value=-3.0, max_value=3.0),
    st.floats(min_value=-3.0, max_value=3.0),
    st.floats(min_value=1e-3, max_value=10.0),
    st.floats(min_value=1e-3, max_value=10.0),
)
@settings(max_examples=80)
def test_collect_conserves_energy(x0, y0, w, a):
    got = collect_power_square_aperture((x0, y0), w, 1.0, a)
    assert -1e-15 <= got <= 1.0 + 1e-12


def test_lambertian_on_axis_value():
    # (m+1) A / (2 pi d^2) at m=1, A=1e-4, d=3: 1e-4 / (9 pi)
    got = lambertian_los_gain(1.0, 1e-4, 3.0, 1.0, 1.0, math.radians(60))
    assert got == pytest.approx(3.537e-6, abs=1e-9)


def test_lambertian_fov_cutoff_is_exact_zero():
    fov = math.radians(60)
    just_out = math.cos(fov + 1e-6)
    assert lambertian_los_gain(1.0, 1e-4, 3.0, 1.0, just_out, fov) == 0.0


def test_lambertian_inverse_square():
    fov = math.radians(60)
    near = lambertian_los_gain(1.0, 1e-4, 3.0, 1.0, 1.0, fov)
    far = lambertian_los_gain(1.0, 1e-4, 6.0, 1.0, 1.0, fov)
    assert far == pytest.approx(near / 4.0, rel=1e-12)


def test_vcsel_element_beam_radius_at_link():
    # full chain lands at about 0.119 m for the default geometry
    w = beam_radius(vcsel_element_beam(VcselArrayParams(), 3.0))
    assert w == pytest.approx(0.1189, rel=1e-3)


def test_element_offsets_grid():
    offsets = element_offsets(VcselArrayParams())
    assert len(offsets) == 25
    assert max(abs(x) for x, _ in offsets) == pytest.approx(2 * 10e-6)
    assert sum(x for x, _ in offsets) == pytest.approx(0.0, abs=1e-18)


def test_array_spot_area_single_beam_case():
    v = VcselArrayParams(n_elements=1)
    w = beam_radius(vcsel_element_beam(v, 3.0))
    assert array_spot_area(v, 3.0) == pytest.approx(math.pi * w * w, rel=1e-15)


def test_array_spot_area_near_field_limit():
    v = VcselArrayParams()
    d = 1e-9
    w = beam_radius(vcsel_element_beam(v, d))
    extent = 10e-6 * (5 - 1) / 2
    assert array_spot_area(v, d) == pytest.approx(math.pi * (w + extent) ** 2, rel=1e-12)


def test_array_spot_area_default_positive():
    area = array_spot_area(VcselArrayParams(), 3.0)
    assert area > 0


def test_beam_state_rejects_nonphysical():
    with pytest.raises(AssertionError):
        BeamState(q=complex(1.0, -1.0), wavelength=WL, total_power=1.0)
