import math

import numpy as np
import pytest

from holoris import (
    InvariantViolation,
    RisConfig,
    RisKind,
    SurfaceRole,
    achievable_rate,
    build_channels,
    element_positions,
    end_to_end,
)
from holoris.channel import _los_matrix

from conftest import make_scenario


def test_entry_at_one_wavelength_distance():
    # 3-4-5 placement puts the single Tx element exactly one wavelength from
    # the single RIS element, so the phase winds a full turn.
    f = 3.5e9
    lam = 299792458.0 / f
    sc = make_scenario(tx=(1, 1), rx=(1, 1), ris=(1, 1),
                       l_t=0.6 * lam, d_t=0.8 * lam, frequency=f)
    ch = build_channels(sc)
    assert ch.h[0, 0] == pytest.approx(1.0 / (4 * math.pi * lam), rel=1e-12)
    assert abs(ch.h[0, 0].imag) < 1e-15


def test_entry_moduli_follow_inverse_distance():
    sc = make_scenario(tx=(2, 2), rx=(2, 3), ris=(3, 3))
    ch = build_channels(sc)
    tx = element_positions(sc, SurfaceRole.TRANSMITTER)
    rx = element_positions(sc, SurfaceRole.RECEIVER)
    ris = element_positions(sc, SurfaceRole.RIS)
    d1 = np.linalg.norm(ris[:, None, :] - tx[None, :, :], axis=-1)
    d2 = np.linalg.norm(rx[:, None, :] - ris[None, :, :], axis=-1)
    assert np.allclose(np.abs(ch.h), 1.0 / (4 * np.pi * d1), rtol=1e-13)
    assert np.allclose(np.abs(ch.g), 1.0 / (4 * np.pi * d2), rtol=1e-13)


def test_single_element_reference_value():
    sc = make_scenario(tx=(1, 1), rx=(1, 1), ris=(1, 1), l_t=5.0, d_t=5.0)
    ch = build_channels(sc)
    d = math.sqrt(50.0)
    expected = np.exp(1j * sc.wavenumber * d) / (4 * math.pi * d)
    assert ch.h[0, 0] == pytest.approx(expected, rel=1e-12)


def test_zero_distance_rejected():
    points = np.zeros((1, 3))
    with pytest.raises(ValueError, match="coincident"):
        _los_matrix(points, points, 1.0)


def test_svd_reconstruction_and_ordering():
    sc = make_scenario(tx=(3, 2), rx=(2, 2), ris=(4, 4))
    ch = build_channels(sc)
    for a, u, s, v in ((ch.h, ch.u_h, ch.s_h, ch.v_h), (ch.g, ch.u_g, ch.s_g, ch.v_g)):
        k = s.size
        recon = (u[:, :k] * s) @ v[:, :k].conj().T
        assert np.max(np.abs(recon - a)) <= 1e-12 * np.max(np.abs(a))
        assert np.all(np.diff(s) <= 0)
    assert ch.s_h.size == min(ch.tx_count, ch.ris_count)
    assert ch.s_g.size == min(ch.rx_count, ch.ris_count)


def test_end_to_end_identity_and_phase(rng):
    sc = make_scenario(tx=(2, 2), rx=(2, 2), ris=(3, 3))
    ch = build_channels(sc)
    n = ch.ris_count
    identity = RisConfig(np.eye(n, dtype=complex), RisKind.DIAGONAL)
    assert np.allclose(end_to_end(ch, identity), ch.g @ ch.h)

    theta = float(rng.uniform(0, 2 * np.pi))
    rotated = RisConfig(np.exp(1j * theta) * np.eye(n), RisKind.DIAGONAL)
    assert np.allclose(end_to_end(ch, rotated), np.exp(1j * theta) * ch.g @ ch.h)


def test_end_to_end_scalar_case():
    sc = make_scenario(tx=(1, 1), rx=(1, 1), ris=(1, 1))
    ch = build_channels(sc)
    phase = np.exp(0.73j)
    ris = RisConfig(phase.reshape(1, 1), RisKind.DIAGONAL)
    assert end_to_end(ch, ris)[0, 0] == pytest.approx(ch.g[0, 0] * phase * ch.h[0, 0])


def test_end_to_end_dimension_mismatch():
    sc = make_scenario(tx=(2, 2), rx=(2, 2), ris=(3, 3))
    ch = build_channels(sc)
    with pytest.raises(ValueError, match="RIS configuration"):
        end_to_end(ch, RisConfig(np.eye(4, dtype=complex), RisKind.DIAGONAL))


def test_rate_zero_power():
    z = np.array([[1.0 + 1j]])
    assert achievable_rate(z, np.zeros((1, 1)), 1.0) == 0.0


def test_rate_scalar_shannon():
    snr_per_watt = 7.5
    noise = 2e-3
    z = np.array([[math.sqrt(snr_per_watt * noise)]], dtype=complex)
    p = 0.4
    rate = achievable_rate(z, np.array([[p]]), noise)
    assert rate == pytest.approx(math.log2(1 + snr_per_watt * p), rel=1e-12)


def test_rate_matches_eigenvalue_oracle(rng):
    for _ in range(5):
        z = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        b = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        q = b @ b.conj().T
        noise = 0.37
        lam = np.linalg.eigvalsh(z @ q @ z.conj().T) / noise
        expected = np.sum(np.log2(1 + np.clip(lam, 0, None)))
        assert achievable_rate(z, q, noise) == pytest.approx(expected, rel=1e-10)


def test_rate_rejects_non_hermitian():
    z = np.eye(2, dtype=complex)
    q = np.array([[1.0, 0.5], [0.1, 1.0]], dtype=complex)
    with pytest.raises(ValueError, match="Hermitian"):
        achievable_rate(z, q, 1.0)


def test_global_phase_invariance(rng):
    sc = make_scenario(tx=(2, 2), rx=(2, 2), ris=(3, 3))
    ch = build_channels(sc)
    n = ch.ris_count
    base = RisConfig(np.eye(n, dtype=complex), RisKind.DIAGONAL)
    q = np.eye(ch.tx_count) * sc.power_budget / ch.tx_count
    r0 = achievable_rate(end_to_end(ch, base), q, sc.noise_power)
    for _ in range(5):
        theta = float(rng.uniform(0, 2 * np.pi))
        ris = RisConfig(np.exp(1j * theta) * np.eye(n), RisKind.DIAGONAL)
        r = achievable_rate(end_to_end(ch, ris), q, sc.noise_power)
        assert r == pytest.approx(r0, rel=1e-10)


def test_determinant_identity(rng):
    # log2 det(I_M + Z Q Z^H / s) equals log2 det(I_L + Q Z^H Z / s).
    for _ in range(5):
        m, el = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        z = rng.normal(size=(m, el)) + 1j * rng.normal(size=(m, el))
        b = rng.normal(size=(el, el)) + 1j * rng.normal(size=(el, el))
        q = b @ b.conj().T
        noise = 1.3
        left = achievable_rate(z, q, noise)
        gram = np.eye(el) + q @ z.conj().T @ z / noise
        right = float(np.log2(np.abs(np.linalg.det(gram))))
        assert left == pytest.approx(right, rel=1e-9)


def test_rate_monotone_in_power(rng):
    sc = make_scenario(tx=(2, 2), rx=(2, 2), ris=(3, 3))
    ch = build_channels(sc)
    ris = RisConfig(np.eye(ch.ris_count, dtype=complex), RisKind.DIAGONAL)
    z = end_to_end(ch, ris)
    b = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    q = b @ b.conj().T * 1e-6
    r1 = achievable_rate(z, q, sc.noise_power)
    for alpha in (1.5, 2.0, 10.0):
        assert achievable_rate(z, alpha * q, sc.noise_power) >= r1 - 1e-12


def test_ris_config_validation():
    with pytest.raises(InvariantViolation, match="unitary"):
        RisConfig(np.diag([1.0, 0.5]).astype(complex), RisKind.DIAGONAL)
    with pytest.raises(InvariantViolation, match="off-diagonal"):
        phi = np.eye(2, dtype=complex)
        phi[0, 1] = 1e-14
        phi[1, 0] = -1e-14
        RisConfig(phi, RisKind.DIAGONAL)
