"""Shared fixtures."""

import numpy as np
import pytest

from bresselab.models.parameters import Parameters, SystemKind


@pytest.fixture
def unit_params() -> Parameters:
    """Unit coefficients: equal wave speeds."""
    return Parameters()


@pytest.fixture
def distinct_params() -> Parameters:
    """b = 2 breaks rho1/rho2 = k/b."""
    return Parameters(b=2.0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(7)


@pytest.fixture(params=[SystemKind.TYPE_I, SystemKind.TYPE_III], ids=["type1", "type3"])
def kind(request: pytest.FixtureRequest) -> SystemKind:
    return request.param  # type: ignore[no-any-return]


@pytest.fixture(params=["equal", "distinct"])
def params(request: pytest.FixtureRequest) -> Parameters:
    """Both speed classes."""
    return Parameters() if request.param == "equal" else Parameters(b=2.0)
