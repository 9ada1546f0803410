import pytest

from partbounds.exact import default_table


@pytest.fixture(scope="session")
def table():
    """Shared partition table, pre-grown once for the whole run."""
    t = default_table()
    t.ensure(10050)
    return t
