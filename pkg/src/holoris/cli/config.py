"""Experiment configuration files.

A flat INI-style format with three sections. Lengths are meters, frequency
is GHz and powers are dBm (converted to watts internally as
10^((dBm - 30)/10)):

    [scenario]
    tx = 4x4                # elements along x (or y for the RIS) times z
    rx = 4x4
    ris = 16x16
    l_t_m = 5.0
    d_t_m = 5.0
    l_r_m = 5.0
    d_r_m = 5.0
    frequency_ghz = 3.5
    power_dbm = -20.0
    noise_dbm = -97.0
    # spacing_m = 0.05      # optional, defaults to half the wavelength

    [run]
    schemes = nd_num, nd_pswf, foc_num, foc_pswf, random_ris, specular_ris
    # max_modes = 64

    [sweep]
    kind = grid             # or: ensemble
    l_r_min = 1.0
    l_r_max = 10.0
    l_r_steps = 10
    d_r_min = 1.0
    d_r_max = 10.0
    d_r_steps = 10
    count = 200             # ensemble only
    seed = 1

    [output]
    path = out.csv
    format = csv            # or: json
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field

import numpy as np

from ..exceptions import ConfigError
from ..geometry import Scenario, SurfaceRole, SurfaceSpec, half_wavelength
from ..schemes import Scheme


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


@dataclass(frozen=True)
class GridSweep:
    l_r_values: np.ndarray
    d_r_values: np.ndarray


@dataclass(frozen=True)
class EnsembleSweep:
    l_r_range: tuple[float, float]
    d_r_range: tuple[float, float]
    count: int
    seed: int


@dataclass
class ExperimentSpec:
    base_scenario: Scenario
    schemes: list[Scheme]
    grid: GridSweep | None = None
    ensemble: EnsembleSweep | None = None
    output_path: str = "out.csv"
    output_format: str = "csv"
    mode_budget: int | None = None
    seed: int = 0
    power_dbm: float = 0.0
    noise_dbm: float = 0.0
    scenario_lines: list[str] = field(default_factory=list)


_SCHEME_ALIASES = {
    "random": Scheme.RANDOM_RIS,
    "specular": Scheme.SPECULAR_RIS,
    **{s.value: s for s in Scheme},
}


def canonical_order(schemes) -> list[Scheme]:
    """Schemes in enum definition order regardless of the input order."""
    present = set(schemes)
    return [s for s in Scheme if s in present]


def _get(parser, section, key, convert, default=None, where=""):
    if not parser.has_option(section, key):
        if default is not None:
            return default
        raise ConfigError(f"[{section}] missing required key '{key}'{where}")
    raw = parser.get(section, key)
    try:
        return convert(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[{section}] key '{key}': bad value {raw!r} ({exc})") from exc


def _parse_counts(raw: str) -> tuple[int, int]:
    parts = raw.lower().split("x")
    if len(parts) != 2:
        raise ValueError("expected 'AxB'")
    a, b = int(parts[0]), int(parts[1])
    if a < 1 or b < 1:
        raise ValueError("counts must be >= 1")
    return a, b


def _parse_schemes(raw: str) -> list[Scheme]:
    tokens = [t.strip().lower() for t in raw.split(",") if t.strip()]
    if not tokens:
        raise ValueError("scheme list is empty")
    out = []
    for t in tokens:
        if t not in _SCHEME_ALIASES:
            raise ValueError(f"unknown scheme '{t}', choose from "
                             f"{sorted(_SCHEME_ALIASES)}")
        out.append(_SCHEME_ALIASES[t])
    return out


def load_experiment(path: str) -> ExperimentSpec:
    """Parse a configuration file into an ExperimentSpec.

    Raises ConfigError with section/key diagnostics on any problem.
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        read = parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc  # carries file/line diagnostics
    if not read:
        raise ConfigError(f"cannot read config file: {path}")
    if not parser.has_section("scenario"):
        raise ConfigError("missing [scenario] section")

    tx_counts = _get(parser, "scenario", "tx", _parse_counts)
    rx_counts = _get(parser, "scenario", "rx", _parse_counts)
    ris_counts = _get(parser, "scenario", "ris", _parse_counts)
    l_t = _get(parser, "scenario", "l_t_m", float)
    d_t = _get(parser, "scenario", "d_t_m", float)
    l_r = _get(parser, "scenario", "l_r_m", float)
    d_r = _get(parser, "scenario", "d_r_m", float)
    freq_ghz = _get(parser, "scenario", "frequency_ghz", float)
    power_dbm = _get(parser, "scenario", "power_dbm", float)
    noise_dbm = _get(parser, "scenario", "noise_dbm", float)
    frequency = freq_ghz * 1e9
    if not frequency > 0:
        raise ConfigError("[scenario] key 'frequency_ghz': must be > 0")
    spacing = _get(parser, "scenario", "spacing_m", float,
                   default=half_wavelength(frequency))

    try:
        scenario = Scenario(
            tx=SurfaceSpec(*tx_counts, spacing, SurfaceRole.TRANSMITTER),
            rx=SurfaceSpec(*rx_counts, spacing, SurfaceRole.RECEIVER),
            ris=SurfaceSpec(*ris_counts, spacing, SurfaceRole.RIS),
            d_t=d_t, d_r=d_r, l_t=l_t, l_r=l_r,
            frequency=frequency,
            power_budget=dbm_to_watts(power_dbm),
            noise_power=dbm_to_watts(noise_dbm),
        )
    except ValueError as exc:
        raise ConfigError(f"[scenario]: {exc}") from exc

    if parser.has_option("run", "schemes"):
        schemes = _get(parser, "run", "schemes", _parse_schemes)
    else:
        schemes = list(Scheme)
    mode_budget = None
    if parser.has_option("run", "max_modes"):
        mode_budget = _get(parser, "run", "max_modes", int)
        if mode_budget < 1:
            raise ConfigError("[run] key 'max_modes': must be >= 1")

    spec = ExperimentSpec(
        base_scenario=scenario,
        schemes=schemes,
        power_dbm=power_dbm,
        noise_dbm=noise_dbm,
        scenario_lines=[
            f"tx {tx_counts[0]}x{tx_counts[1]}, rx {rx_counts[0]}x{rx_counts[1]}, "
            f"ris {ris_counts[0]}x{ris_counts[1]}, spacing {spacing:.6g} m",
            f"l_t {l_t:g} m, d_t {d_t:g} m, l_r {l_r:g} m, d_r {d_r:g} m",
            f"frequency {freq_ghz:g} GHz, power {power_dbm:g} dBm, noise {noise_dbm:g} dBm",
        ],
    )

    if parser.has_section("sweep"):
        kind = _get(parser, "sweep", "kind", str, default="grid").strip().lower()
        lo_l = _get(parser, "sweep", "l_r_min", float)
        hi_l = _get(parser, "sweep", "l_r_max", float)
        lo_d = _get(parser, "sweep", "d_r_min", float)
        hi_d = _get(parser, "sweep", "d_r_max", float)
        if min(lo_l, hi_l, lo_d, hi_d) <= 0:
            raise ConfigError("[sweep]: receiver placements must keep l_r > 0 and d_r > 0")
        spec.seed = _get(parser, "sweep", "seed", int, default=0)
        if kind == "grid":
            nl = _get(parser, "sweep", "l_r_steps", int)
            nd = _get(parser, "sweep", "d_r_steps", int)
            if nl < 1 or nd < 1:
                raise ConfigError("[sweep]: step counts must be >= 1")
            spec.grid = GridSweep(
                l_r_values=np.linspace(lo_l, hi_l, nl),
                d_r_values=np.linspace(lo_d, hi_d, nd),
            )
        elif kind == "ensemble":
            count = _get(parser, "sweep", "count", int)
            spec.ensemble = EnsembleSweep(
                l_r_range=(lo_l, hi_l), d_r_range=(lo_d, hi_d),
                count=count, seed=spec.seed,
            )
        else:
            raise ConfigError(f"[sweep] key 'kind': expected grid or ensemble, got {kind!r}")

    if parser.has_section("output"):
        spec.output_path = _get(parser, "output", "path", str, default=spec.output_path)
        fmt = _get(parser, "output", "format", str, default="csv").strip().lower()
        if fmt not in ("csv", "json"):
            raise ConfigError(f"[output] key 'format': expected csv or json, got {fmt!r}")
        spec.output_format = fmt
    return spec
