import pytest

import srgo


@pytest.fixture(scope="session")
def models():
    """All bundled models, loaded once."""
    return {name: srgo.load_model(name) for name in srgo.list_models()}


@pytest.fixture(scope="session")
def heisenberg(models):
    return models["heisenberg"]


@pytest.fixture(scope="session")
def cartan(models):
    return models["cartan"]


@pytest.fixture(scope="session")
def so3_axisym(models):
    return models["so3_axisym"]
