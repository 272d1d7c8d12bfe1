import math

import numpy as np
import pytest

from exit_spectra.enums import SurfaceTypes
from exit_spectra.factories import SurfaceGeneratorFactory
from exit_spectra.geometry import ModelSpace, space_form_warping
from exit_spectra.utils import WarningManager


@pytest.fixture
def euclidean_plane() -> ModelSpace:
    return ModelSpace(2, space_form_warping(0.0))


@pytest.fixture
def hyperbolic_plane() -> ModelSpace:
    return ModelSpace(2, space_form_warping(-1.0))


@pytest.fixture
def warning_manager() -> WarningManager:
    return WarningManager()


@pytest.fixture(scope="session")
def coarse_disk():
    """Flat disk of radius 1.25 with edge length 0.1, pole at the origin."""
    return SurfaceGeneratorFactory.get_generator(SurfaceTypes.DISK).generate(0.1, 1.25)


@pytest.fixture(scope="session")
def rotation() -> np.ndarray:
    a, b = 0.7, -1.1
    rz = np.array([[math.cos(a), -math.sin(a), 0.0], [math.sin(a), math.cos(a), 0.0], [0.0, 0.0, 1.0]])
    rx = np.array([[1.0, 0.0, 0.0], [0.0, math.cos(b), -math.sin(b)], [0.0, math.sin(b), math.cos(b)]])
    return rz @ rx
