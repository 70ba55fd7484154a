"""RIS configurations and transmit covariances for the link-design schemes.

Four optimized designs plus two reference baselines:

  ND_NUM     non-diagonal RIS and covariance from the exact SVDs of both
             segment channels; the rate-optimal benchmark.
  ND_PSWF    the same structure built from sampled band-limited (prolate)
             modes and focusing phases, no SVD of the channels required.
  FOC_NUM    diagonal (per-element) RIS from focusing phases; covariance
             from the SVD of the resulting end-to-end channel.
  FOC_PSWF   the focusing RIS combined with the closed-form covariance.
  RANDOM_RIS / SPECULAR_RIS
             diagonal baselines (i.i.d. random phases / identity); the
             transmitter is still SVD-optimized so only the RIS is penalized.

All schemes return a SchemeResult whose rate is evaluated on the true
end-to-end channel.
"""

from __future__ import annotations

import hashlib
import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .allocation import PowerAllocation, water_fill
from .channel import ChannelPair, RisConfig, RisKind, achievable_rate, end_to_end
from .geometry import (
    HalfAperture,
    Scenario,
    SurfaceRole,
    element_positions,
    far_field_margin,
)
from .pswf import PswfBasis, TruncationError, build_basis


class Scheme(Enum):
    ND_NUM = "nd_num"
    ND_PSWF = "nd_pswf"
    FOC_NUM = "foc_num"
    FOC_PSWF = "foc_pswf"
    RANDOM_RIS = "random_ris"
    SPECULAR_RIS = "specular_ris"


class Link(Enum):
    TX_RIS = "tx_ris"
    RIS_RX = "ris_rx"


# Couplings this far below the strongest 2-D mode are dropped from the
# sampled set; the orthonormal completion covers the remaining dimensions.
COUPLING_FLOOR = 1e-26

DEFAULT_MODE_BUDGET = 64
DEFAULT_MARGIN_THRESHOLD = 5.0


@dataclass(frozen=True, eq=False)
class FocusingMatrices:
    """Diagonals of the four focusing phase profiles.

    Each entry compensates the propagation phase from one element to the
    center of the opposite surface; outbound profiles carry exp(-j k0 d) and
    inbound ones exp(+j k0 d), so matched pairs cancel along the link axis.
    """

    f_tx_ris: np.ndarray  # length L
    f_ris_tx: np.ndarray  # length N
    f_ris_rx: np.ndarray  # length N
    f_rx_ris: np.ndarray  # length M


@dataclass(frozen=True, eq=False)
class PswfModeSet:
    """Sampled 2-D band-limited modes for one hop of the link.

    `holos_modes` is the full unitary on the active surface of the hop
    (transmitter L x L, or receiver M x M) and `ris_modes` the N x N unitary
    on the reflecting surface; their leading `retained` columns are the
    orthonormalized samples of the continuous mode functions, ordered by
    decreasing coupling. `mode_gains` holds the squared channel-gain
    estimate of each retained mode.
    """

    link: Link
    c_xy: float
    c_zz: float
    mode_index_pairs: list[tuple[int, int]]
    couplings_2d: np.ndarray
    mode_gains: np.ndarray
    holos_modes: np.ndarray
    ris_modes: np.ndarray

    @property
    def retained(self) -> int:
        return len(self.mode_index_pairs)


@dataclass(frozen=True, eq=False)
class SchemeResult:
    scheme: Scheme
    ris: RisConfig
    q: np.ndarray
    mode_snrs: np.ndarray
    power: np.ndarray
    water_level: float
    active_count: int
    rate: float


def focusing_matrices(scenario: Scenario) -> FocusingMatrices:
    k0 = scenario.wavenumber
    tx = element_positions(scenario, SurfaceRole.TRANSMITTER)
    rx = element_positions(scenario, SurfaceRole.RECEIVER)
    ris = element_positions(scenario, SurfaceRole.RIS)
    tx_center = scenario.surface_center(SurfaceRole.TRANSMITTER)
    rx_center = scenario.surface_center(SurfaceRole.RECEIVER)
    ris_center = scenario.surface_center(SurfaceRole.RIS)

    d_tx_ris = np.linalg.norm(tx - ris_center, axis=1)
    d_ris_tx = np.linalg.norm(ris - tx_center, axis=1)
    d_ris_rx = np.linalg.norm(ris - rx_center, axis=1)
    d_rx_ris = np.linalg.norm(rx - ris_center, axis=1)
    return FocusingMatrices(
        f_tx_ris=np.exp(-1j * k0 * d_tx_ris),
        f_ris_tx=np.exp(+1j * k0 * d_ris_tx),
        f_ris_rx=np.exp(-1j * k0 * d_ris_rx),
        f_rx_ris=np.exp(+1j * k0 * d_rx_ris),
    )


def _axis_basis(bandwidth: float, max_orders: int) -> tuple[PswfBasis, int]:
    """Per-axis basis plus the number of orders kept above the coupling floor.

    Shrinks the order count when deep-tail couplings underflow double
    precision (very small bandwidths); those orders are far below the
    coupling floor anyway.
    """
    cap = int(math.ceil(2.0 * bandwidth / math.pi)) + 30
    count = max(1, min(max_orders, cap))
    while True:
        try:
            basis = build_basis(bandwidth, count)
            break
        except TruncationError:
            if count == 1:
                raise
            count = max(1, count // 2)
    spectrum = basis.coupling_spectrum()
    above = spectrum / spectrum[0] >= COUPLING_FLOOR
    kept = int(np.flatnonzero(above)[-1]) + 1  # prefix, spectrum is monotone
    return basis, kept


def _sorted_pairs(spec_a: np.ndarray, spec_z: np.ndarray, n_modes: int) -> list[tuple[int, int]]:
    """Top 2-D index pairs by product coupling, deterministic tie-break."""
    prod = np.outer(spec_a, spec_z)
    ka, kz = np.meshgrid(np.arange(len(spec_a)), np.arange(len(spec_z)), indexing="ij")
    flat = prod.ravel()
    order = np.lexsort((kz.ravel(), ka.ravel(), -flat))
    return [(int(ka.ravel()[i]), int(kz.ravel()[i])) for i in order[:n_modes]]


def _complete_unitary(cols: np.ndarray, dim: int) -> np.ndarray:
    """Extend orthonormal columns to a full orthonormal basis of R^dim."""
    if cols.shape[1] == dim:
        return cols
    full, _ = np.linalg.qr(cols, mode="complete")
    return np.concatenate([cols, full[:, cols.shape[1]:]], axis=1)


def pswf_mode_set(
    scenario: Scenario,
    link: Link,
    n_modes: int | None = None,
    margin_threshold: float = DEFAULT_MARGIN_THRESHOLD,
) -> PswfModeSet:
    """Sampled separable mode decomposition of one hop.

    Builds per-axis band-limited bases from the hop geometry, forms 2-D
    modes as products ordered by decreasing coupling, samples them at the
    element grids of both surfaces, and orthonormalizes (strongest modes
    perturbed least) with completion to full unitaries. Gains are scaled to
    estimate the squared singular values of the sampled hop channel.

    Warns when the far-field margin of the hop is below `margin_threshold`;
    raises ValueError for degenerate geometry with a non-positive bandwidth.
    """
    ap = HalfAperture.from_scenario(scenario)
    k0 = scenario.wavenumber
    ris_pos = element_positions(scenario, SurfaceRole.RIS)

    if link is Link.TX_RIS:
        margin = far_field_margin(scenario)[0]
        r, gamma = scenario.r1, scenario.gamma1
        da, dz = ap.dx_t, ap.dz_t
        holos_pos = element_positions(scenario, SurfaceRole.TRANSMITTER)
        holos_axis = (holos_pos[:, 0] - scenario.l_t) / da
    else:
        margin = far_field_margin(scenario)[1]
        r, gamma = scenario.r2, scenario.gamma2
        da, dz = ap.dx_r, ap.dz_r
        holos_pos = element_positions(scenario, SurfaceRole.RECEIVER)
        holos_axis = (holos_pos[:, 0] - scenario.l_r) / da

    if margin < margin_threshold:
        warnings.warn(
            f"{link.value}: far-field margin {margin:.2f} below {margin_threshold};"
            " closed-form modes may be inaccurate",
            stacklevel=2,
        )

    c_xy = da * ap.dy_ris * k0 * math.sin(2.0 * gamma) / (2.0 * r)
    c_zz = dz * ap.dz_ris * k0 / r
    if not (c_xy > 0 and c_zz > 0):
        raise ValueError(f"{link.value}: degenerate geometry, bandwidths ({c_xy}, {c_zz})")

    n_holos = holos_pos.shape[0]
    n_ris = ris_pos.shape[0]
    if n_modes is None:
        n_modes = min(DEFAULT_MODE_BUDGET, n_holos, n_ris)

    basis_a, kept_a = _axis_basis(c_xy, n_modes)
    basis_z, kept_z = _axis_basis(c_zz, n_modes)
    spec_a = basis_a.coupling_spectrum()[:kept_a]
    spec_z = basis_z.coupling_spectrum()[:kept_z]
    pairs = _sorted_pairs(spec_a, spec_z, n_modes)

    holos_z = holos_pos[:, 2] / dz
    ris_axis = ris_pos[:, 1] / ap.dy_ris
    ris_z = ris_pos[:, 2] / ap.dz_ris
    holos_a_tab = basis_a.eval_all(holos_axis)
    holos_z_tab = basis_z.eval_all(holos_z)
    ris_a_tab = basis_a.eval_all(ris_axis)
    ris_z_tab = basis_z.eval_all(ris_z)

    holos_cols = np.zeros((n_holos, len(pairs)))
    ris_cols = np.zeros((n_ris, len(pairs)))
    kept_pairs: list[tuple[int, int]] = []
    couplings: list[float] = []
    gains: list[float] = []
    kept = 0
    amplitude = 1.0 / (4.0 * math.pi * r)

    for ka, kz in pairs:
        h_raw = holos_a_tab[ka] * holos_z_tab[kz]
        r_raw = ris_a_tab[ka] * ris_z_tab[kz]
        h_norm = np.linalg.norm(h_raw)
        r_norm = np.linalg.norm(r_raw)
        if h_norm < 1e-12 or r_norm < 1e-12:
            continue  # mode unsupported by this element grid (e.g. 1-element axis)

        # Double-pass Gram-Schmidt against already-kept columns on both sides.
        hc, rc = h_raw.copy(), r_raw.copy()
        for _ in range(2):
            if kept:
                hc -= holos_cols[:, :kept] @ (holos_cols[:, :kept].T @ hc)
                rc -= ris_cols[:, :kept] @ (ris_cols[:, :kept].T @ rc)
        hn, rn = np.linalg.norm(hc), np.linalg.norm(rc)
        if hn < 1e-7 * h_norm or rn < 1e-7 * r_norm:
            continue  # aliases an already-kept mode on this grid

        holos_cols[:, kept] = hc / hn
        ris_cols[:, kept] = rc / rn
        kept_pairs.append((ka, kz))
        coupling = float(spec_a[ka] * spec_z[kz])
        couplings.append(coupling)
        gains.append(coupling * (h_norm * r_norm * amplitude) ** 2)
        kept += 1
        if kept == min(n_holos, n_ris):
            break

    holos_modes = _complete_unitary(holos_cols[:, :kept], n_holos)
    ris_modes = _complete_unitary(ris_cols[:, :kept], n_ris)
    return PswfModeSet(
        link=link,
        c_xy=c_xy,
        c_zz=c_zz,
        mode_index_pairs=kept_pairs,
        couplings_2d=np.array(couplings),
        mode_gains=np.array(gains),
        holos_modes=holos_modes,
        ris_modes=ris_modes,
    )


def _covariance(columns: np.ndarray, powers: np.ndarray) -> np.ndarray:
    q = (columns * powers) @ columns.conj().T
    return 0.5 * (q + q.conj().T)


def _svd_transmitter(
    channels: ChannelPair, scenario: Scenario, ris: RisConfig, scheme: Scheme
) -> SchemeResult:
    """Covariance matched to a fixed RIS: SVD of the end-to-end channel plus
    water-filling."""
    z = end_to_end(channels, ris)
    _, s, vh = np.linalg.svd(z, full_matrices=False)
    snrs = s**2 / scenario.noise_power
    alloc = water_fill(snrs, scenario.power_budget)
    q = _covariance(vh.conj().T, alloc.powers)
    rate = achievable_rate(z, q, scenario.noise_power)
    return SchemeResult(
        scheme=scheme,
        ris=ris,
        q=q,
        mode_snrs=snrs,
        power=alloc.powers,
        water_level=alloc.water_level,
        active_count=alloc.active_count,
        rate=rate,
    )


def nd_num(channels: ChannelPair, scenario: Scenario) -> SchemeResult:
    """Rate-optimal benchmark: RIS pairs the hop SVD bases, covariance
    water-fills over the products of the hop singular values."""
    phi = channels.v_g @ channels.u_h.conj().T
    ris = RisConfig(phi=phi, kind=RisKind.NON_DIAGONAL)
    k = min(channels.tx_count, channels.rx_count, channels.ris_count)
    snrs = (channels.s_h[:k] ** 2) * (channels.s_g[:k] ** 2) / scenario.noise_power
    alloc = water_fill(snrs, scenario.power_budget)
    q = _covariance(channels.v_h[:, :k], alloc.powers)
    rate = achievable_rate(end_to_end(channels, ris), q, scenario.noise_power)
    return SchemeResult(
        scheme=Scheme.ND_NUM,
        ris=ris,
        q=q,
        mode_snrs=snrs,
        power=alloc.powers,
        water_level=alloc.water_level,
        active_count=alloc.active_count,
        rate=rate,
    )


@dataclass(frozen=True, eq=False)
class _PswfDesign:
    phi_nd: np.ndarray
    q: np.ndarray
    snrs: np.ndarray
    alloc: PowerAllocation
    link_tx: PswfModeSet
    link_rx: PswfModeSet


def _pswf_design(
    scenario: Scenario,
    mode_budget: int | None = None,
    margin_threshold: float = DEFAULT_MARGIN_THRESHOLD,
) -> _PswfDesign:
    """Closed-form RIS and covariance shared by the two analytical schemes."""
    link_tx = pswf_mode_set(scenario, Link.TX_RIS, mode_budget, margin_threshold)
    link_rx = pswf_mode_set(scenario, Link.RIS_RX, mode_budget, margin_threshold)
    f = focusing_matrices(scenario)

    v_h = f.f_tx_ris[:, None] * link_tx.holos_modes
    u_h = f.f_ris_tx[:, None] * link_tx.ris_modes
    v_g = f.f_ris_rx[:, None] * link_rx.ris_modes
    phi_nd = v_g @ u_h.conj().T

    counts = (v_h.shape[0], link_rx.holos_modes.shape[0], u_h.shape[0])
    k = min(link_tx.retained, link_rx.retained, *counts)
    snrs = link_tx.mode_gains[:k] * link_rx.mode_gains[:k] / scenario.noise_power
    alloc = water_fill(snrs, scenario.power_budget)
    q = _covariance(v_h[:, :k], alloc.powers)
    return _PswfDesign(phi_nd=phi_nd, q=q, snrs=snrs, alloc=alloc,
                       link_tx=link_tx, link_rx=link_rx)


def nd_pswf(
    channels: ChannelPair,
    scenario: Scenario,
    mode_budget: int | None = None,
    margin_threshold: float = DEFAULT_MARGIN_THRESHOLD,
    _design: _PswfDesign | None = None,
) -> SchemeResult:
    """Non-diagonal RIS and covariance from sampled band-limited modes."""
    design = _design or _pswf_design(scenario, mode_budget, margin_threshold)
    ris = RisConfig(phi=design.phi_nd, kind=RisKind.NON_DIAGONAL)
    rate = achievable_rate(end_to_end(channels, ris), design.q, scenario.noise_power)
    return SchemeResult(
        scheme=Scheme.ND_PSWF,
        ris=ris,
        q=design.q,
        mode_snrs=design.snrs,
        power=design.alloc.powers,
        water_level=design.alloc.water_level,
        active_count=design.alloc.active_count,
        rate=rate,
    )


def foc_ris(scenario: Scenario) -> RisConfig:
    """Diagonal focusing RIS: each element cancels the phase of the path
    that passes through it toward both surface centers."""
    f = focusing_matrices(scenario)
    return RisConfig(phi=np.diag(f.f_ris_rx * f.f_ris_tx.conj()), kind=RisKind.DIAGONAL)


def foc_num(channels: ChannelPair, scenario: Scenario) -> SchemeResult:
    """Focusing RIS with an SVD-matched transmitter."""
    return _svd_transmitter(channels, scenario, foc_ris(scenario), Scheme.FOC_NUM)


def foc_pswf(
    channels: ChannelPair,
    scenario: Scenario,
    mode_budget: int | None = None,
    margin_threshold: float = DEFAULT_MARGIN_THRESHOLD,
    _design: _PswfDesign | None = None,
) -> SchemeResult:
    """Focusing RIS combined with the closed-form covariance."""
    design = _design or _pswf_design(scenario, mode_budget, margin_threshold)
    ris = foc_ris(scenario)
    rate = achievable_rate(end_to_end(channels, ris), design.q, scenario.noise_power)
    return SchemeResult(
        scheme=Scheme.FOC_PSWF,
        ris=ris,
        q=design.q,
        mode_snrs=design.snrs,
        power=design.alloc.powers,
        water_level=design.alloc.water_level,
        active_count=design.alloc.active_count,
        rate=rate,
    )


def scenario_fingerprint(scenario: Scenario) -> int:
    """Stable 64-bit fingerprint of the deployment, for keyed randomness."""
    parts = []
    for spec in (scenario.tx, scenario.rx, scenario.ris):
        parts += [str(spec.count_a), str(spec.count_b), float(spec.spacing).hex(), spec.role.value]
    for name in ("d_t", "d_r", "l_t", "l_r", "frequency", "power_budget", "noise_power"):
        parts.append(float(getattr(scenario, name)).hex())
    digest = hashlib.sha256("|".join(parts).encode()).digest()
    return int.from_bytes(digest[:8], "little")


def baseline(
    channels: ChannelPair, scenario: Scenario, kind: Scheme, seed: int = 0
) -> SchemeResult:
    """Reference diagonal RIS with an SVD-matched transmitter.

    RANDOM_RIS draws i.i.d. uniform phases from a counter-based generator
    keyed by (seed, scenario fingerprint), so sweeps are reproducible and
    independent of evaluation order. SPECULAR_RIS applies a uniform profile.
    """
    n = channels.ris_count
    if kind is Scheme.RANDOM_RIS:
        key = np.array([seed & 0xFFFFFFFFFFFFFFFF, scenario_fingerprint(scenario)],
                       dtype=np.uint64)
        rng = np.random.Generator(np.random.Philox(key=key))
        phi = np.diag(np.exp(2j * np.pi * rng.random(n)))
    elif kind is Scheme.SPECULAR_RIS:
        phi = np.eye(n, dtype=complex)
    else:
        raise ValueError(f"baseline kind must be RANDOM_RIS or SPECULAR_RIS, got {kind}")
    ris = RisConfig(phi=phi, kind=RisKind.DIAGONAL)
    return _svd_transmitter(channels, scenario, ris, kind)


def dof_estimates(scenario: Scenario) -> tuple[float, float]:
    """Asymptotic mode counts of the two hops from areas and geometry."""
    ap = HalfAperture.from_scenario(scenario)
    lam_sq = scenario.wavelength**2
    n1 = ap.s_tx * ap.s_ris * math.sin(2.0 * scenario.gamma1) / (2.0 * lam_sq * scenario.r1**2)
    n2 = ap.s_rx * ap.s_ris * math.sin(2.0 * scenario.gamma2) / (2.0 * lam_sq * scenario.r2**2)
    return n1, n2


def evaluate(
    channels: ChannelPair,
    scenario: Scenario,
    scheme: Scheme,
    seed: int = 0,
    mode_budget: int | None = None,
) -> SchemeResult:
    if scheme is Scheme.ND_NUM:
        return nd_num(channels, scenario)
    if scheme is Scheme.ND_PSWF:
        return nd_pswf(channels, scenario, mode_budget)
    if scheme is Scheme.FOC_NUM:
        return foc_num(channels, scenario)
    if scheme is Scheme.FOC_PSWF:
        return foc_pswf(channels, scenario, mode_budget)
    return baseline(channels, scenario, scheme, seed)


def evaluate_many(
    channels: ChannelPair,
    scenario: Scenario,
    schemes: list[Scheme],
    seed: int = 0,
    mode_budget: int | None = None,
) -> dict[Scheme, SchemeResult]:
    """Evaluate several schemes, sharing the closed-form design where possible."""
    design = None
    if Scheme.ND_PSWF in schemes or Scheme.FOC_PSWF in schemes:
        design = _pswf_design(scenario, mode_budget)
    results: dict[Scheme, SchemeResult] = {}
    for scheme in schemes:
        if scheme is Scheme.ND_PSWF:
            results[scheme] = nd_pswf(channels, scenario, _design=design)
        elif scheme is Scheme.FOC_PSWF:
            results[scheme] = foc_pswf(channels, scenario, _design=design)
        else:
            results[scheme] = evaluate(channels, scenario, scheme, seed, mode_budget)
    return results
