import mpmath
import pytest


@pytest.fixture
def mp40():
    with mpmath.workdps(40):
        yield mpmath
