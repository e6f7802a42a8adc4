"""Shared fixtures: the three worked parameter cases used throughout."""

import pytest

from dcclsc import Params


@pytest.fixture
def params_m():
    # manufacturer-led worked case; interior-valid equilibrium
    return Params(alpha=0.9, c_m=0.15, c_r=0.12, s=0.02)


@pytest.fixture
def params_r():
    # retailer-led sensitivity-table case (q1 < 0 at equilibrium)
    return Params(alpha=0.65, c_m=1.5, c_r=0.7, s=0.2)


@pytest.fixture
def params_mr():
    # joint-recycling golden instance
    return Params(alpha=0.6, c_m=1.0, c_r=0.5, s=0.2)
