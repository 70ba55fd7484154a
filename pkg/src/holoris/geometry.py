"""Surfaces and deployment geometry for RIS-aided holographic links.

The transmit and receive surfaces are uniform rectangular arrays parallel to
the xz plane, at y = d_t and y = -d_r respectively; the reflecting surface
lies in the x = 0 plane. All three surface centers sit at height z = 0. The
transmitter center is at (l_t, d_t, 0) and the receiver center at
(l_r, -d_r, 0), so the link distances to the RIS center are
r1 = sqrt(l_t^2 + d_t^2) and r2 = sqrt(l_r^2 + d_r^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0


class SurfaceRole(Enum):
    TRANSMITTER = "tx"
    RECEIVER = "rx"
    RIS = "ris"


@dataclass(frozen=True)
class SurfaceSpec:
    """Uniform rectangular array of count_a x count_b elements with pitch `spacing`.

    The first in-plane axis runs along x for transmit/receive surfaces and
    along y for the RIS; the second axis is always z.
    """

    count_a: int
    count_b: int
    spacing: float
    role: SurfaceRole

    def __post_init__(self):
        if self.count_a < 1 or self.count_b < 1:
            raise ValueError(
                f"{self.role.value}: element counts must be >= 1, "
                f"got {self.count_a} x {self.count_b}"
            )
        if not self.spacing > 0:
            raise ValueError(f"{self.role.value}: spacing must be > 0, got {self.spacing}")

    @property
    def count(self) -> int:
        return self.count_a * self.count_b


def half_wavelength(frequency: float) -> float:
    """Half the free-space wavelength at `frequency` (Hz)."""
    return 0.5 * SPEED_OF_LIGHT / frequency


@dataclass(frozen=True)
class Scenario:
    """Full deployment: three surfaces plus radio parameters.

    Lengths are meters, frequency Hz, powers watts. `power_budget` is the
    transmit power constraint and `noise_power` the receiver noise power.
    """

    tx: SurfaceSpec
    rx: SurfaceSpec
    ris: SurfaceSpec
    d_t: float
    d_r: float
    l_t: float
    l_r: float
    frequency: float
    power_budget: float
    noise_power: float

    def __post_init__(self):
        expected = (SurfaceRole.TRANSMITTER, SurfaceRole.RECEIVER, SurfaceRole.RIS)
        actual = (self.tx.role, self.rx.role, self.ris.role)
        if actual != expected:
            raise ValueError(f"surface roles must be {expected}, got {actual}")
        for name in ("d_t", "d_r", "l_t", "l_r", "frequency", "power_budget", "noise_power"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"{name} must be > 0, got {value}")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.frequency

    @property
    def wavenumber(self) -> float:
        return 2.0 * math.pi / self.wavelength

    @property
    def r1(self) -> float:
        """Distance from the transmitter center to the RIS center."""
        return math.hypot(self.l_t, self.d_t)

    @property
    def r2(self) -> float:
        """Distance from the receiver center to the RIS center."""
        return math.hypot(self.l_r, self.d_r)

    @property
    def gamma1(self) -> float:
        """Elevation of the Tx-RIS line over the RIS plane normal, asin(l_t/r1)."""
        return math.asin(self.l_t / self.r1)

    @property
    def gamma2(self) -> float:
        return math.asin(self.l_r / self.r2)

    def surface(self, role: SurfaceRole) -> SurfaceSpec:
        return {
            SurfaceRole.TRANSMITTER: self.tx,
            SurfaceRole.RECEIVER: self.rx,
            SurfaceRole.RIS: self.ris,
        }[role]

    def surface_center(self, role: SurfaceRole) -> np.ndarray:
        if role is SurfaceRole.TRANSMITTER:
            return np.array([self.l_t, self.d_t, 0.0])
        if role is SurfaceRole.RECEIVER:
            return np.array([self.l_r, -self.d_r, 0.0])
        return np.zeros(3)


@dataclass(frozen=True)
class HalfAperture:
    """Half side lengths of the three surfaces, in meters.

    Each field equals half the physical side length, e.g. a transmit surface
    with count_a elements at pitch delta spans 2*dx_t = delta*count_a along x.
    """

    dx_t: float
    dz_t: float
    dx_r: float
    dz_r: float
    dy_ris: float
    dz_ris: float

    @classmethod
    def from_scenario(cls, scenario: Scenario) -> "HalfAperture":
        tx, rx, ris = scenario.tx, scenario.rx, scenario.ris
        return cls(
            dx_t=0.5 * tx.spacing * tx.count_a,
            dz_t=0.5 * tx.spacing * tx.count_b,
            dx_r=0.5 * rx.spacing * rx.count_a,
            dz_r=0.5 * rx.spacing * rx.count_b,
            dy_ris=0.5 * ris.spacing * ris.count_a,
            dz_ris=0.5 * ris.spacing * ris.count_b,
        )

    @property
    def s_tx(self) -> float:
        return 4.0 * self.dx_t * self.dz_t

    @property
    def s_rx(self) -> float:
        return 4.0 * self.dx_r * self.dz_r

    @property
    def s_ris(self) -> float:
        return 4.0 * self.dy_ris * self.dz_ris


def element_positions(scenario: Scenario, role: SurfaceRole) -> np.ndarray:
    """Cartesian positions of every element of one surface, shape (count, 3).

    The linear index runs fastest over the z-axis grid index, then over the
    other in-plane axis, i.e. element i (0-based) has grid indices
    (a, z) = (i // count_b + 1, i % count_b + 1). Grids are centered on the
    surface center so the element centroid coincides with it.
    """
    spec = scenario.surface(role)
    delta = spec.spacing
    a_idx = np.repeat(np.arange(1, spec.count_a + 1), spec.count_b)
    z_idx = np.tile(np.arange(1, spec.count_b + 1), spec.count_a)
    in_a = delta * a_idx - 0.5 * delta * (spec.count_a + 1)
    in_z = delta * z_idx - 0.5 * delta * (spec.count_b + 1)

    if role is SurfaceRole.TRANSMITTER:
        x = scenario.l_t + in_a
        y = np.full_like(x, scenario.d_t)
    elif role is SurfaceRole.RECEIVER:
        x = scenario.l_r + in_a
        y = np.full_like(x, -scenario.d_r)
    else:
        x = np.zeros_like(in_a)
        y = in_a
    return np.column_stack([x, y, in_z])


def element_position(scenario: Scenario, role: SurfaceRole, index: int) -> np.ndarray:
    """Position of a single element, 1-based `index`."""
    spec = scenario.surface(role)
    if not 1 <= index <= spec.count:
        raise ValueError(
            f"{spec.role.value}: element index {index} out of range [1, {spec.count}]"
        )
    return element_positions(scenario, role)[index - 1]


def far_field_margin(scenario: Scenario) -> tuple[float, float]:
    """Per-link ratios of link distance to the largest relevant half-aperture.

    Large values mean the separable closed-form mode decomposition is
    trustworthy; callers compare against a threshold of their choosing.
    """
    ap = HalfAperture.from_scenario(scenario)
    m1 = scenario.r1 / max(ap.dx_t, ap.dz_t, ap.dy_ris, ap.dz_ris)
    m2 = scenario.r2 / max(ap.dx_r, ap.dz_r, ap.dy_ris, ap.dz_ris)
    return m1, m2
