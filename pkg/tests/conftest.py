import numpy as np
import pytest

from fitcoef.datasets import WIND_SPEEDS
from fitcoef.npde import Sample


@pytest.fixture
def wind() -> Sample:
    return Sample(WIND_SPEEDS)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
