import random

import pytest
from hypothesis import HealthCheck, settings

# exact arithmetic is slow-ish; derandomize so reports are reproducible
settings.register_profile(
    "naryalg",
    derandomize=True,
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("naryalg")


@pytest.fixture
def rng():
    return random.Random(20240601)
