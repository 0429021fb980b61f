import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("confmax", max_examples=40, deadline=None)
settings.load_profile("confmax")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
