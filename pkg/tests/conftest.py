import pytest
from hypothesis import settings

from app.etale.curve import Curve
from app.models.curve import GENUS5_COEFFICIENTS, genus50_coefficients
from app.utils.config import get_settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow tests")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running reproduction checks (use --runslow)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def genus5_curve() -> Curve:
    return Curve.from_coefficients(GENUS5_COEFFICIENTS)


@pytest.fixture(scope="session")
def genus50_curve() -> Curve:
    """y² = 5·f with f monic of degree 102 and f(0) = 1."""
    return Curve.from_coefficients(genus50_coefficients(5))


@pytest.fixture(scope="session")
def genus50_untwisted() -> Curve:
    return Curve.from_coefficients(genus50_coefficients(1))


@pytest.fixture(scope="session")
def sextic() -> Curve:
    """y² = x⁶ + 1."""
    return Curve.from_coefficients([1, 0, 0, 0, 0, 0, 1])


@pytest.fixture(scope="session")
def no_real_points() -> Curve:
    """y² = -x⁶ - 1."""
    return Curve.from_coefficients([-1, 0, 0, 0, 0, 0, -1])


@pytest.fixture
def small_rho_budget(monkeypatch):
    """Settings with a rho budget of 10⁵ iterations so unfactorable discriminants give up quickly."""
    monkeypatch.setenv("OBSTRUCT_RHO_BUDGET", str(10**5))
    get_settings.cache_clear()
    yield get_settings()
    get_settings.cache_clear()
