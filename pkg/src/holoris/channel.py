"""LoS channel matrices, the end-to-end channel and the achievable rate.

Each entry of the segment channels is a free-space Green's function sample
exp(j*k0*d)/(4*pi*d) at the inter-element distance d; no antenna effective
area factor is applied. The end-to-end channel through a reflecting surface
with configuration Phi is Z = G @ Phi @ H.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np

from .exceptions import InvariantViolation
from .geometry import Scenario, SurfaceRole, element_positions

UNITARITY_TOL = 1e-10


def _pairwise_distances(to_points: np.ndarray, from_points: np.ndarray) -> np.ndarray:
    return np.linalg.norm(to_points[:, None, :] - from_points[None, :, :], axis=-1)


def _los_matrix(to_points: np.ndarray, from_points: np.ndarray, wavenumber: float) -> np.ndarray:
    d = _pairwise_distances(to_points, from_points)
    if np.min(d) <= 0.0:
        raise ValueError("coincident elements: zero inter-element distance")
    return np.exp(1j * wavenumber * d) / (4.0 * np.pi * d)


@dataclass(frozen=True, eq=False)
class ChannelPair:
    """The segment channels h (N x L, Tx to RIS) and g (M x N, RIS to Rx).

    SVD factors are computed lazily and cached; the pair is immutable so the
    cache never needs invalidation. A concurrent first access may compute the
    factorization twice, but both results are identical, so sharing a pair
    across threads is safe.
    """

    h: np.ndarray
    g: np.ndarray

    @cached_property
    def _svd_h(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return np.linalg.svd(self.h, full_matrices=True)

    @cached_property
    def _svd_g(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return np.linalg.svd(self.g, full_matrices=True)

    @property
    def u_h(self) -> np.ndarray:
        return self._svd_h[0]

    @property
    def s_h(self) -> np.ndarray:
        """Singular values of h, non-increasing, length min(L, N)."""
        return self._svd_h[1]

    @property
    def v_h(self) -> np.ndarray:
        return self._svd_h[2].conj().T

    @property
    def u_g(self) -> np.ndarray:
        return self._svd_g[0]

    @property
    def s_g(self) -> np.ndarray:
        return self._svd_g[1]

    @property
    def v_g(self) -> np.ndarray:
        return self._svd_g[2].conj().T

    @property
    def tx_count(self) -> int:
        return self.h.shape[1]

    @property
    def ris_count(self) -> int:
        return self.h.shape[0]

    @property
    def rx_count(self) -> int:
        return self.g.shape[0]


class RisKind(Enum):
    DIAGONAL = "diagonal"
    NON_DIAGONAL = "non_diagonal"


@dataclass(frozen=True, eq=False)
class RisConfig:
    """An N x N reflection matrix constrained to phi @ phi^H = I."""

    phi: np.ndarray
    kind: RisKind

    def __post_init__(self):
        n = self.phi.shape[0]
        if self.phi.shape != (n, n):
            raise InvariantViolation(f"RIS matrix must be square, got {self.phi.shape}")
        gram = self.phi @ self.phi.conj().T
        err = np.max(np.abs(gram - np.eye(n)))
        if err > UNITARITY_TOL:
            raise InvariantViolation(f"RIS configuration not unitary: |phi phi^H - I| = {err:.3e}")
        if self.kind is RisKind.DIAGONAL:
            off = self.phi - np.diag(np.diag(self.phi))
            if np.any(off != 0):
                raise InvariantViolation("diagonal RIS has nonzero off-diagonal entries")
            mod_err = np.max(np.abs(np.abs(np.diag(self.phi)) - 1.0))
            if mod_err > 1e-12:
                raise InvariantViolation(
                    f"diagonal RIS entries must have unit modulus, error {mod_err:.3e}"
                )


def build_channels(scenario: Scenario) -> ChannelPair:
    """Sample the Green's function between every element pair of both hops."""
    k0 = scenario.wavenumber
    tx = element_positions(scenario, SurfaceRole.TRANSMITTER)
    rx = element_positions(scenario, SurfaceRole.RECEIVER)
    ris = element_positions(scenario, SurfaceRole.RIS)
    return ChannelPair(h=_los_matrix(ris, tx, k0), g=_los_matrix(rx, ris, k0))


def end_to_end(channels: ChannelPair, ris: RisConfig) -> np.ndarray:
    """The M x L composite channel g @ phi @ h."""
    n = channels.ris_count
    if ris.phi.shape != (n, n):
        raise ValueError(
            f"RIS configuration is {ris.phi.shape}, channels expect ({n}, {n})"
        )
    return channels.g @ ris.phi @ channels.h


def achievable_rate(z: np.ndarray, q: np.ndarray, noise_power: float) -> float:
    """Gaussian-input rate log2 det(I + z q z^H / noise_power) in bits/s/Hz.

    Evaluated through the eigenvalues of the Hermitian matrix z q z^H to stay
    stable at low SNR; eigenvalues within -1e-12 of zero are clipped to zero.
    """
    q = np.asarray(q)
    scale = max(np.max(np.abs(q)), np.finfo(float).tiny)
    asym = np.max(np.abs(q - q.conj().T))
    if asym > 1e-10 * scale:
        raise ValueError(f"covariance not Hermitian: relative asymmetry {asym / scale:.3e}")
    a = z @ q @ z.conj().T / noise_power
    lam = np.linalg.eigvalsh(0.5 * (a + a.conj().T))
    lam = np.clip(lam, 0.0, None)
    return float(np.sum(np.log2(1.0 + lam)))
