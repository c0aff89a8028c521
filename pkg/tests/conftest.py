import numpy as np
import pytest
from scipy.constants import c

from rifscatter.medium import FUSED_SILICA, StepConfig, velocity_from_center_wavelength
from rifscatter.modes import horizon_intervals

# Front speed matched to the lab group velocity at 396.34 nm (u ~ 0.66 c).
U_UV = velocity_from_center_wavelength(FUSED_SILICA, 396.34e-9)


@pytest.fixture(scope="session")
def step():
    return StepConfig(FUSED_SILICA, 2e-6, 2 * c / 3)


@pytest.fixture(scope="session")
def step_uv():
    return StepConfig(FUSED_SILICA, 2e-6, U_UV)


@pytest.fixture(scope="session")
def intervals(step):
    return horizon_intervals(step)


def interval_point(interval, x=0.5):
    a, b = interval
    return a + x * (b - a)


@pytest.fixture(scope="session")
def scenario_omegas(step, intervals):
    """One comoving frequency inside each kinematic scenario a-e."""
    hi = intervals
    return {
        "a": 0.5 * hi.whi[0],
        "b": interval_point(hi.whi),
        "c": np.sqrt(hi.whi[1] * hi.bhi[0]),
        "d": interval_point(hi.bhi),
        "e": 2.0 * hi.bhi[1],
    }
