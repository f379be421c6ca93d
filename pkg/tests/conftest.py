import pytest

from e7theta import acceptance


@pytest.fixture(scope="session")
def store():
    """The full W(E7) closure, shared with the acceptance battery."""
    return acceptance.group_store()
