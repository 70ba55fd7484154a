import numpy as np
import pytest

from holoris import Scenario, SurfaceRole, SurfaceSpec, far_field_margin, half_wavelength

FREQUENCY = 3.5e9
POWER_W = 10.0 ** ((-20.0 - 30.0) / 10.0)   # -20 dBm
NOISE_W = 10.0 ** ((-97.0 - 30.0) / 10.0)   # -97 dBm


def make_scenario(tx=(4, 4), ris=(16, 16), rx=None, l_t=5.0, d_t=5.0,
                  l_r=5.0, d_r=5.0, frequency=FREQUENCY, spacing=None,
                  power=POWER_W, noise=NOISE_W) -> Scenario:
    rx = rx or tx
    delta = spacing if spacing is not None else half_wavelength(frequency)
    return Scenario(
        tx=SurfaceSpec(tx[0], tx[1], delta, SurfaceRole.TRANSMITTER),
        rx=SurfaceSpec(rx[0], rx[1], delta, SurfaceRole.RECEIVER),
        ris=SurfaceSpec(ris[0], ris[1], delta, SurfaceRole.RIS),
        d_t=d_t, d_r=d_r, l_t=l_t, l_r=l_r,
        frequency=frequency, power_budget=power, noise_power=noise,
    )


def random_scenario(rng: np.random.Generator, margin_min: float = 3.0,
                    tx_side=(2, 4), ris_side=(8, 12)) -> Scenario:
    """Random small deployment with a guaranteed far-field margin."""
    while True:
        tx = (int(rng.integers(tx_side[0], tx_side[1] + 1)),
              int(rng.integers(tx_side[0], tx_side[1] + 1)))
        rx = (int(rng.integers(tx_side[0], tx_side[1] + 1)),
              int(rng.integers(tx_side[0], tx_side[1] + 1)))
        ris = (int(rng.integers(ris_side[0], ris_side[1] + 1)),
               int(rng.integers(ris_side[0], ris_side[1] + 1)))
        sc = make_scenario(
            tx=tx, ris=ris, rx=rx,
            l_t=float(rng.uniform(2.0, 10.0)), d_t=float(rng.uniform(2.0, 10.0)),
            l_r=float(rng.uniform(2.0, 10.0)), d_r=float(rng.uniform(2.0, 10.0)),
        )
        if min(far_field_margin(sc)) >= margin_min:
            return sc


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
