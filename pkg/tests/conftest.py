import math
import warnings

import pytest

from vortex_spectra import PhysicalConstants, PipeDomain, derive_scales
from vortex_spectra.config import default_config


@pytest.fixture
def natural():
    return PhysicalConstants.natural()


@pytest.fixture
def wide_domain():
    # natural units need R1 well above the first Bessel zero for a non-empty gamma interval
    return PipeDomain(R1=30.0, L=3000.0, R=1.0)


@pytest.fixture
def run_config():
    return default_config()


def series_j(k, x, terms=80):
    """Independent ascending-series oracle for J_k, used only by the tests."""
    total = 0.0
    term = (x / 2.0) ** k / math.factorial(k)
    for j in range(terms):
        total += term
        term *= -(x * x / 4.0) / ((j + 1) * (j + 1 + k))
    return total


def bisect_zero(k, a, b, tol=1e-13):
    fa = series_j(k, a)
    assert fa * series_j(k, b) < 0
    while b - a > tol:
        mid = 0.5 * (a + b)
        fm = series_j(k, mid)
        if (fm > 0) == (fa > 0):
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b)


@pytest.fixture
def quiet():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        yield
