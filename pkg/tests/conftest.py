import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from nilherm.forms import Form
from nilherm.scalar import Q, Scalar

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def rationals(bound: int = 6, den: int = 4):
    return st.builds(lambda a, b: Q(a, b), st.integers(-bound * den, bound * den),
                     st.integers(1, den))


def scalars(bound: int = 6, den: int = 4):
    return st.builds(Scalar, rationals(bound, den), rationals(bound, den))


def nonzero_scalars():
    return scalars().filter(bool)


def forms(n: int, degree: int | None = None, max_terms: int = 5):
    """Random exact forms on dimension ``n`` (fixed degree when given)."""
    full = (1 << (2 * n)) - 1

    def ok(w):
        return degree is None or bin(w).count("1") == degree

    words = [w for w in range(full + 1) if ok(w)]
    return st.dictionaries(st.sampled_from(words), scalars(), max_size=max_terms).map(
        lambda terms: Form(n, terms))


@pytest.fixture
def rng():
    return random.Random(12345)
