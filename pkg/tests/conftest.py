import pytest

from lfmax import zeta
from lfmax.mathfn import sieve_von_mangoldt


@pytest.fixture(scope="session")
def zeros_1000():
    """Zero table to height 1000, shared by zeta / acceptance tests."""
    return zeta.find_zeros(1000.0)


@pytest.fixture(scope="session")
def vm_table():
    return sieve_von_mangoldt(64)
