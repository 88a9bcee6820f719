import pytest

from hardy_sharp import HardyParams


@pytest.fixture
def P():
    """Shorthand constructor for parameter tuples."""
    return lambda d, s, p, a, b: HardyParams(d, s, p, a, b)
