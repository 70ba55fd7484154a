"""Prolate spheroidal wave functions of order zero on [-1, 1].

The band-limited basis is built from the Legendre expansion of the
commuting differential operator d/dx[(1-x^2) d/dx] - c^2 x^2, which is
tridiagonal in the normalized Legendre basis after even/odd splitting.
Each retained function psi_k is L2-normalized on [-1, 1] with the sign
convention psi_k(1) > 0, and carries its coupling eigenvalue mu_k of the
finite Fourier transform,

    integral_{-1}^{1} exp(j c x y) psi_k(y) dy = mu_k psi_k(x).

The squared coupling magnitudes satisfy the Hilbert-Schmidt sum rule
sum_k |mu_k|^2 = 4 and collapse super-exponentially beyond roughly 2c/pi
retained modes, which is what makes truncated bases useful.

Eigenvector entries far below the dominant Legendre coefficient are
recomputed through the three-term recurrence of the tridiagonal operator
(stable in the growing direction), so small coupling eigenvalues retain
relative accuracy instead of drowning in the dense solver's absolute
error floor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import spherical_jn


class TruncationError(ValueError):
    """Raised when the requested orders cannot be resolved by the expansion."""


def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1]."""
    return np.polynomial.legendre.leggauss(n)


def normalized_legendre(n_terms: int, x) -> np.ndarray:
    """Table of sqrt(m + 1/2) * P_m(x) for m < n_terms, shape (n_terms, len(x))."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((n_terms, x.size))
    p_prev = np.ones_like(x)
    out[0] = math.sqrt(0.5) * p_prev
    if n_terms == 1:
        return out
    p_cur = x.copy()
    out[1] = math.sqrt(1.5) * p_cur
    for m in range(1, n_terms - 1):
        p_next = ((2 * m + 1) * x * p_cur - m * p_prev) / (m + 1)
        out[m + 1] = math.sqrt(m + 1.5) * p_next
        p_prev, p_cur = p_cur, p_next
    return out


@dataclass(frozen=True, eq=False)
class PswfBasis:
    """Expansion coefficients and coupling eigenvalues for one bandwidth."""

    bandwidth: float
    order_count: int
    legendre_coeffs: np.ndarray  # (order_count, n_legendre), normalized Legendre basis
    couplings: np.ndarray        # complex finite-Fourier eigenvalues, one per order

    @property
    def n_legendre(self) -> int:
        return self.legendre_coeffs.shape[1]

    def eval(self, order: int, x):
        """psi_order evaluated at x (scalar or array), |x| <= 1."""
        if not 0 <= order < self.order_count:
            raise ValueError(f"order {order} not in [0, {self.order_count})")
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        if np.any(np.abs(arr) > 1.0 + 1e-12):
            raise ValueError("evaluation points must lie in [-1, 1]")
        table = normalized_legendre(self.n_legendre, arr)
        values = self.legendre_coeffs[order] @ table
        return values[0] if np.isscalar(x) or np.ndim(x) == 0 else values

    def eval_all(self, x) -> np.ndarray:
        """All retained orders at once, shape (order_count, len(x))."""
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        if np.any(np.abs(arr) > 1.0 + 1e-12):
            raise ValueError("evaluation points must lie in [-1, 1]")
        return self.legendre_coeffs @ normalized_legendre(self.n_legendre, arr)

    def coupling_spectrum(self) -> np.ndarray:
        """Squared coupling magnitudes |mu_k|^2, non-increasing in k."""
        return np.abs(self.couplings) ** 2


def _operator_bands(c: float, parity: int, size: int) -> tuple[np.ndarray, np.ndarray]:
    n = parity + 2 * np.arange(size, dtype=float)
    diag = n * (n + 1) + c * c * (2 * n * (n + 1) - 1) / ((2 * n + 3) * (2 * n - 1))
    m = n[:-1]
    off = c * c * (m + 2) * (m + 1) / ((2 * m + 3) * np.sqrt((2 * m + 1) * (2 * m + 5)))
    return diag, off


def _refine_head(diag: np.ndarray, off: np.ndarray, chi: float, vec: np.ndarray) -> np.ndarray:
    """Recompute coefficients below the dominant one from the recurrence.

    The upward recurrence is stable for the (growing) head of the eigenvector,
    so ratios v_i / v_{i+1} computed from the first rows carry relative
    accuracy even where the dense eigenvector is pure rounding noise. Falls
    back to the unrefined vector when the ratios are inconsistent with the
    reliable entries.
    """
    peak = int(np.argmax(np.abs(vec)))
    if peak == 0:
        return vec
    ratios = np.empty(peak)
    denom = diag[0] - chi
    if denom == 0.0:
        return vec
    ratios[0] = -off[0] / denom
    for i in range(1, peak):
        denom = (diag[i] - chi) + off[i - 1] * ratios[i - 1]
        if denom == 0.0:
            return vec
        ratios[i] = -off[i] / denom
    if not np.all(np.isfinite(ratios)):
        return vec

    refined = vec.copy()
    for i in range(peak - 1, -1, -1):
        refined[i] = ratios[i] * refined[i + 1]

    reliable = np.abs(vec[:peak]) >= 1e-8 * np.abs(vec[peak])
    if reliable.any():
        ref = refined[:peak][reliable]
        old = vec[:peak][reliable]
        if np.max(np.abs(ref - old) / np.abs(old)) > 1e-6:
            return vec
    return refined


def _couplings(coeffs: np.ndarray, c: float) -> np.ndarray:
    """Finite-Fourier eigenvalues of every retained order.

    The primary path is double Gauss-Legendre quadrature of
    psi_k(x) exp(j c x y) psi_k(y), which makes no assumption about the
    eigenvalue's phase. Below an absolute floor where quadrature rounding
    dominates, the eigenvalue is instead read off at x = 1 through the
    plane-wave expansion exp(j a y) = sum_n (2n+1) j^n j_n(a) P_n(y), whose
    dominant terms are the relative-accurate head coefficients.
    """
    order_count, n_legendre = coeffs.shape
    n_nodes = max(64, n_legendre + int(3 * c) + 16)
    nodes, weights = gauss_legendre(n_nodes)
    psi = coeffs @ normalized_legendre(n_legendre, nodes)  # (K, Q)
    weighted = psi * weights
    kernel = np.exp(1j * c * np.outer(nodes, nodes))
    mu_quad = np.einsum("kq,qr,kr->k", weighted, kernel, weighted)

    n = np.arange(n_legendre)
    series = coeffs @ (2.0 * np.sqrt(n + 0.5) * (1j ** n) * spherical_jn(n, c))
    endpoint = coeffs @ np.sqrt(n + 0.5)  # psi_k(1), positive by convention
    mu_series = series / endpoint

    use_quad = np.abs(mu_quad) >= 1e-8
    return np.where(use_quad, mu_quad, mu_series)


def build_basis(bandwidth: float, order_count: int, n_legendre: int | None = None) -> PswfBasis:
    """Construct the first `order_count` band-limited functions for `bandwidth`.

    `n_legendre` overrides the default truncation 2*order_count + max(30,
    ceil(2c)); the default leaves a comfortable decay margin for every
    retained order. Raises TruncationError when the expansion cannot resolve
    the requested orders, with instructions to enlarge the truncation.
    """
    c = float(bandwidth)
    if not c > 0:
        raise ValueError(f"bandwidth must be > 0, got {bandwidth}")
    if order_count < 1:
        raise ValueError(f"order_count must be >= 1, got {order_count}")
    if n_legendre is None:
        n_legendre = 2 * order_count + max(30, math.ceil(2 * c))

    n_even = (n_legendre + 1) // 2
    n_odd = n_legendre // 2
    need = {0: (order_count + 1) // 2, 1: order_count // 2}
    if need[0] > n_even or need[1] > n_odd:
        raise TruncationError(
            f"n_legendre={n_legendre} holds fewer than {order_count} orders; "
            "increase n_legendre"
        )

    coeffs = np.zeros((order_count, n_legendre))
    for parity in (0, 1):
        count = need[parity]
        if count == 0:
            continue
        size = n_even if parity == 0 else n_odd
        diag, off = _operator_bands(c, parity, size)
        chis, vecs = eigh_tridiagonal(diag, off, select="i", select_range=(0, count - 1))
        indices = parity + 2 * np.arange(size)
        scale = np.sqrt(indices + 0.5)
        for i in range(count):
            vec = _refine_head(diag, off, chis[i], vecs[:, i])
            vec = vec / np.linalg.norm(vec)
            if float(vec @ scale) < 0:
                vec = -vec
            coeffs[2 * i + parity, indices] = vec

    tail = np.max(np.abs(coeffs[:, -4:]), axis=1)
    bad = np.flatnonzero(tail > 1e-8)
    if bad.size:
        raise TruncationError(
            f"order {bad[0]} not resolved at n_legendre={n_legendre} "
            f"(tail coefficient {tail[bad[0]]:.2e}); increase n_legendre"
        )

    couplings = _couplings(coeffs, c)
    mags = np.abs(couplings)
    if not np.all(np.isfinite(mags)) or np.any(mags == 0.0):
        raise TruncationError(
            f"coupling eigenvalues underflow for bandwidth {c}; "
            "reduce order_count or increase n_legendre"
        )
    if np.any(np.diff(mags) > 0):
        raise TruncationError(
            f"coupling magnitudes not monotone for bandwidth {c}; "
            "reduce order_count or increase n_legendre"
        )
    return PswfBasis(
        bandwidth=c,
        order_count=order_count,
        legendre_coeffs=coeffs,
        couplings=couplings,
    )
