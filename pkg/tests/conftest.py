import pytest

from mwbench import canonical_height
from mwbench.config import WorkbenchConfig

_HEIGHT_CACHE = {}


@pytest.fixture(scope="session")
def config():
    return WorkbenchConfig.default()


@pytest.fixture(scope="session")
def curves(config):
    return config.curves


@pytest.fixture(scope="session")
def hhat():
    """Session-cached canonical heights (they are pure and deterministic)."""

    def compute(curve, P, tol=1e-10):
        key = (curve.a4, curve.a6, P.x, P.y, tol)
        if key not in _HEIGHT_CACHE:
            _HEIGHT_CACHE[key] = canonical_height(curve, P, tol)
        return _HEIGHT_CACHE[key]

    return compute
