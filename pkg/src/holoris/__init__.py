"""Numerical library for line-of-sight RIS-aided holographic MIMO links.

Builds LoS channels over a Tx / RIS / Rx deployment, computes optimal and
closed-form RIS configurations and transmit covariances, and runs the
rate-ratio and C-CDF experiments through the command line interface.
"""

from .allocation import PowerAllocation, water_fill
from .channel import (
    ChannelPair,
    RisConfig,
    RisKind,
    achievable_rate,
    build_channels,
    end_to_end,
)
from .exceptions import ConfigError, InvariantViolation
from .geometry import (
    HalfAperture,
    Scenario,
    SurfaceRole,
    SurfaceSpec,
    element_position,
    element_positions,
    far_field_margin,
    half_wavelength,
)
from .pswf import PswfBasis, TruncationError, build_basis
from .schemes import (
    FocusingMatrices,
    Link,
    PswfModeSet,
    Scheme,
    SchemeResult,
    baseline,
    dof_estimates,
    evaluate,
    evaluate_many,
    foc_num,
    foc_pswf,
    foc_ris,
    focusing_matrices,
    nd_num,
    nd_pswf,
    pswf_mode_set,
)

__all__ = [
    "ChannelPair",
    "ConfigError",
    "FocusingMatrices",
    "HalfAperture",
    "InvariantViolation",
    "Link",
    "PowerAllocation",
    "PswfBasis",
    "PswfModeSet",
    "RisConfig",
    "RisKind",
    "Scenario",
    "Scheme",
    "SchemeResult",
    "SurfaceRole",
    "SurfaceSpec",
    "TruncationError",
    "achievable_rate",
    "baseline",
    "build_basis",
    "build_channels",
    "dof_estimates",
    "element_position",
    "element_positions",
    "end_to_end",
    "evaluate",
    "evaluate_many",
    "far_field_margin",
    "foc_num",
    "foc_pswf",
    "foc_ris",
    "focusing_matrices",
    "half_wavelength",
    "nd_num",
    "nd_pswf",
    "pswf_mode_set",
    "water_fill",
]

__version__ = "0.1.0"
