import numpy as np
import pytest
from hypothesis import settings, strategies as st

from dirichlet_composition.mobius import MobiusMap
from dirichlet_composition.selftest import random_automorphism, random_disk_point, random_self_map

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

seeds = st.integers(min_value=0, max_value=2**32 - 1)
automorphisms = seeds.map(lambda s: random_automorphism(np.random.default_rng(s)))
self_maps = seeds.map(lambda s: random_self_map(np.random.default_rng(s)))


def disk_points(r_max=0.9):
    return seeds.map(lambda s: random_disk_point(np.random.default_rng(s), r_max))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def hyp05():
    """(z + 0.5)/(1 + 0.5 z)."""
    return MobiusMap(1, 0.5, 0.5, 1)


@pytest.fixture
def half_shift():
    """(1 + z)/2."""
    return MobiusMap(1, 1, 0, 2)


@pytest.fixture
def neg():
    return MobiusMap(-1, 0, 0, 1)
