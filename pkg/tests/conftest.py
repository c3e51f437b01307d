import pytest

from kgraphlat import textio


@pytest.fixture(scope="session")
def fx():
    """Fixture graphs by name; session-scoped so caches warm up once."""
    return {name: textio.fixture(name) for name in textio.FIXTURE_TEXTS}
