"""Water-filling power allocation over per-mode SNRs.

Maximizes sum_k log2(1 + s_k * P_k) subject to sum_k P_k = P_T, P_k >= 0,
where s_k is the SNR per transmitted watt of mode k. The active set is found
in closed form (sort plus prefix sums) rather than by bisection, so the KKT
conditions hold exactly: P_k = water_level - 1/s_k for active modes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Modes below this per-watt SNR are treated as unusable to avoid overflow in 1/s.
ZERO_SNR = 1e-30


@dataclass(frozen=True)
class PowerAllocation:
    powers: np.ndarray
    water_level: float
    active_count: int


def water_fill(snrs, total_power: float) -> PowerAllocation:
    """Allocate `total_power` watts over modes with per-watt SNRs `snrs`.

    Returns powers in the original input order; modes with s_k <= 1e-30 get
    zero power. Raises ValueError for an empty or all-zero SNR vector or a
    non-positive budget.

    The active set and the water level come from the closed form directly;
    there is no iteration or tolerance knob. Internally everything is
    computed relative to the strongest mode's inverse SNR, which keeps all
    intermediates at the allocation scale, so the powers sum to the budget
    to machine precision even when 1/s_k dwarfs it; the reported water
    level then satisfies P_k = water_level - 1/s_k up to one rounding of
    the level itself.
    """
    s = np.asarray(snrs, dtype=float)
    if s.ndim != 1 or s.size == 0:
        raise ValueError("snrs must be a non-empty 1-D vector")
    if np.any(s < 0) or not np.all(np.isfinite(s)):
        raise ValueError("snrs must be finite and non-negative")
    if not total_power > 0:
        raise ValueError(f"total_power must be > 0, got {total_power}")

    usable = s > ZERO_SNR
    if not usable.any():
        raise ValueError("all per-mode SNRs are zero; nothing to allocate")

    idx = np.flatnonzero(usable)
    order = idx[np.argsort(-s[idx], kind="stable")]
    inv = 1.0 / s[order]
    k = inv.size

    # Deviations from the strongest mode; dev[0] = 0 anchors the shifted
    # level below total_power, so no intermediate exceeds the power scale.
    dev = inv - inv[0]

    # Largest m for which the closed-form level still exceeds the m-th
    # smallest 1/s (equivalently: shifted level exceeds its deviation).
    levels = (total_power + np.cumsum(dev)) / np.arange(1, k + 1)
    feasible = levels > dev
    m = int(np.flatnonzero(feasible)[-1]) + 1
    level_shift = float(levels[m - 1])

    powers = np.zeros_like(s)
    powers[order[:m]] = level_shift - dev[:m]
    return PowerAllocation(
        powers=powers,
        water_level=float(inv[0] + level_shift),
        active_count=m,
    )
