import pytest

from latgen import all_distributive_lattices


@pytest.fixture(scope="session")
def small_lattices():
    """Every distributive lattice with at most 6 elements, up to isomorphism."""
    return all_distributive_lattices(6)
