import pytest

from meancalc import fredericksburg


@pytest.fixture(scope="session")
def sat_table():
    return fredericksburg()
