from pathlib import Path

import numpy as np
import pytest

from visicone.bodies import DiskCone, Polytope, Segment, Simplex

GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def unit_square():
    return Polytope(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]))


@pytest.fixture
def triangle():
    return Simplex(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))


@pytest.fixture
def unit_segment():
    return Segment(np.array([0.0, 0.0]), np.array([1.0, 0.0]))


@pytest.fixture
def disk_cone():
    return DiskCone()


@pytest.fixture
def golden_dir():
    return GOLDEN_DIR
