import dataclasses
import math

import numpy as np
import pytest

from cognet import default_scenario
from cognet.geometry import PrimaryPlacement


@pytest.fixture
def sc_default():
    return default_scenario()


@pytest.fixture
def sc_omni():
    return default_scenario().with_ula(1, 1)


@pytest.fixture
def sc_small():
    """Desk-scaled region for Monte-Carlo runs."""
    return dataclasses.replace(default_scenario(), R=500.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def random_placement(rng, x_max=200.0):
    return PrimaryPlacement(
        x_p=rng.uniform(1.0, x_max),
        delta_p=rng.uniform(-math.pi, math.pi),
        omega_p=rng.uniform(-math.pi, math.pi),
    )
