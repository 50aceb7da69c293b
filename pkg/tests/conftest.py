import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("capq", max_examples=40, deadline=None)
settings.load_profile("capq")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
