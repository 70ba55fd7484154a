import math

import numpy as np
import pytest

from holoris import (
    HalfAperture,
    SurfaceRole,
    SurfaceSpec,
    element_position,
    element_positions,
    far_field_margin,
    half_wavelength,
)
from holoris.geometry import SPEED_OF_LIGHT

from conftest import make_scenario


def test_single_element_tx_sits_at_surface_center():
    sc = make_scenario(tx=(1, 1), ris=(1, 1), rx=(1, 1), l_t=5.0, d_t=5.0)
    pos = element_position(sc, SurfaceRole.TRANSMITTER, 1)
    assert np.allclose(pos, [5.0, 5.0, 0.0], atol=1e-15)


def test_ris_2x2_first_element():
    sc = make_scenario(tx=(1, 1), rx=(1, 1), ris=(2, 2), spacing=0.04)
    pos = element_position(sc, SurfaceRole.RIS, 1)
    assert np.allclose(pos, [0.0, -0.02, -0.02], atol=1e-15)


def test_reference_setup_first_tx_element():
    # 8x8 transmitter at 3.5 GHz, half-wavelength pitch; first element has
    # grid indices (1, 1), so both in-plane offsets are delta - 4.5*delta.
    delta = 0.5 * SPEED_OF_LIGHT / 3.5e9
    sc = make_scenario(tx=(8, 8), ris=(32, 32), l_t=5.0, d_t=5.0)
    expected = np.array([5.0 + delta - 4.5 * delta, 5.0, delta - 4.5 * delta])
    assert np.allclose(element_position(sc, SurfaceRole.TRANSMITTER, 1), expected, atol=1e-12)


@pytest.mark.parametrize("role", list(SurfaceRole))
def test_centroid_matches_surface_center(rng, role):
    for _ in range(5):
        sc = make_scenario(
            tx=(int(rng.integers(1, 6)), int(rng.integers(1, 6))),
            rx=(int(rng.integers(1, 6)), int(rng.integers(1, 6))),
            ris=(int(rng.integers(1, 9)), int(rng.integers(1, 9))),
            l_t=float(rng.uniform(1, 8)), d_t=float(rng.uniform(1, 8)),
            l_r=float(rng.uniform(1, 8)), d_r=float(rng.uniform(1, 8)),
        )
        centroid = element_positions(sc, role).mean(axis=0)
        assert np.allclose(centroid, sc.surface_center(role), atol=1e-12)


def test_adjacent_elements_are_exactly_one_pitch_apart():
    sc = make_scenario(tx=(3, 4), ris=(5, 2), rx=(2, 2))
    for role in SurfaceRole:
        spec = sc.surface(role)
        pos = element_positions(sc, role)
        grid = pos.reshape(spec.count_a, spec.count_b, 3)
        if spec.count_b > 1:
            dz = np.diff(grid, axis=1)
            assert np.allclose(np.linalg.norm(dz, axis=-1), spec.spacing, atol=1e-14)
        if spec.count_a > 1:
            da = np.diff(grid, axis=0)
            assert np.allclose(np.linalg.norm(da, axis=-1), spec.spacing, atol=1e-14)


def test_positions_are_distinct():
    sc = make_scenario(tx=(4, 3), ris=(6, 5))
    for role in SurfaceRole:
        pos = element_positions(sc, role)
        assert len(np.unique(np.round(pos, 12), axis=0)) == pos.shape[0]


def test_index_out_of_range():
    sc = make_scenario(tx=(2, 2), ris=(4, 4))
    with pytest.raises(ValueError, match=r"tx.*\[1, 4\]"):
        element_position(sc, SurfaceRole.TRANSMITTER, 5)
    with pytest.raises(ValueError, match="ris"):
        element_position(sc, SurfaceRole.RIS, 0)


def test_reference_far_field_margin():
    # r1 = sqrt(50); the largest half-aperture is the RIS y side, 16 pitches.
    sc = make_scenario(tx=(8, 8), ris=(32, 32), l_t=5.0, d_t=5.0)
    delta = half_wavelength(3.5e9)
    expected = math.sqrt(50.0) / (16.0 * delta)
    m1, _ = far_field_margin(sc)
    assert m1 == pytest.approx(expected, rel=1e-12)
    assert m1 == pytest.approx(10.3, abs=0.1)


def test_margin_degenerate_and_scale_invariant():
    sc = make_scenario(tx=(2, 2), ris=(4, 4), l_t=3.0, d_t=3.0)
    assert sc.r1 == pytest.approx(3.0 * math.sqrt(2.0), rel=1e-12)
    ap = HalfAperture.from_scenario(sc)
    m1, m2 = far_field_margin(sc)
    assert m1 == pytest.approx(sc.r1 / max(ap.dx_t, ap.dz_t, ap.dy_ris, ap.dz_ris))

    doubled = make_scenario(
        tx=(2, 2), ris=(4, 4), l_t=6.0, d_t=6.0, l_r=10.0, d_r=10.0,
        spacing=2.0 * sc.tx.spacing,
    )
    base = make_scenario(tx=(2, 2), ris=(4, 4), l_t=3.0, d_t=3.0, l_r=5.0, d_r=5.0)
    assert far_field_margin(doubled) == pytest.approx(far_field_margin(base), rel=1e-12)


def test_derived_scalars():
    sc = make_scenario(l_t=3.0, d_t=4.0, l_r=6.0, d_r=8.0)
    assert sc.r1 == pytest.approx(5.0)
    assert sc.r2 == pytest.approx(10.0)
    assert sc.gamma1 == pytest.approx(math.asin(3.0 / 5.0))
    assert sc.gamma2 == pytest.approx(math.asin(0.6))
    assert sc.wavelength == pytest.approx(SPEED_OF_LIGHT / sc.frequency)
    assert sc.wavenumber == pytest.approx(2 * math.pi / sc.wavelength)


def test_half_aperture_and_areas():
    sc = make_scenario(tx=(8, 8), ris=(32, 32))
    delta = sc.tx.spacing
    ap = HalfAperture.from_scenario(sc)
    assert ap.dx_t == pytest.approx(4 * delta)
    assert ap.dy_ris == pytest.approx(16 * delta)
    assert ap.s_tx == pytest.approx((8 * delta) ** 2)
    assert ap.s_ris == pytest.approx((32 * delta) ** 2)


def test_invalid_specs_rejected():
    with pytest.raises(ValueError):
        SurfaceSpec(0, 2, 0.01, SurfaceRole.TRANSMITTER)
    with pytest.raises(ValueError):
        SurfaceSpec(2, 2, 0.0, SurfaceRole.RIS)
    with pytest.raises(ValueError, match="d_t"):
        make_scenario(d_t=-1.0)
