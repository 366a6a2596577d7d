import pytest
from hypothesis import HealthCheck, settings

from vstar.hf import EMPTY, atom, set_of

settings.register_profile(
    "default", deadline=None, max_examples=100, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def u():
    return atom(1)


@pytest.fixture
def v():
    return atom(2)


@pytest.fixture
def w():
    return atom(3)


def sierpinski(a, b):
    from vstar.structured import QuasiStructuredSet

    return QuasiStructuredSet(set_of((a, b)), set_of((EMPTY, set_of((a,)), set_of((a, b)))))
