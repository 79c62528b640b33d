"""Shared fixtures: a scaled unit pipe with the default friction number."""
import numpy as np
import pytest

from linepack import PipeModel
from linepack.harness import ALPHA_DIMLESS_DEFAULT


@pytest.fixture(scope="session")
def pipe():
    return PipeModel.dimensionless(ALPHA_DIMLESS_DEFAULT)


@pytest.fixture
def x201():
    return np.linspace(0.0, 1.0, 201)
