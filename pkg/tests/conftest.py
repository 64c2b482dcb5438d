import pytest

from omintail.catalog import CATALOG_TEXT, catalog


@pytest.fixture(scope="session")
def catalog_terms():
    return catalog()


def pytest_generate_tests(metafunc):
    if "catalog_text" in metafunc.fixturenames:
        metafunc.parametrize("catalog_text", CATALOG_TEXT)
