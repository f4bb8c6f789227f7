import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from qds_lab import AscentSettings

settings.register_profile(
    "default",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
# property batches at the 1000-sample size the selftest batches use
settings.register_profile(
    "ci",
    max_examples=1000,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture()
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture()
def fast_ascent():
    return AscentSettings(restarts=4, iterations=60)
