import numpy as np
import pytest

from visicone.bodies import Polytope
from visicone.errors import BudgetExceeded, InputError, VNotInBody
from visicone.oracle import grid_error_bound, grid_project, hull_diameter, lattice_size, scan_lambda
from visicone.projection import project_simplex
from visicone.suites.instances import random_simplex
from visicone.visibility import lambda_max


def test_lattice_size():
    assert lattice_size(2, 2) == 3
    assert lattice_size(3, 1000) == 501501


def test_grid_project_segment_resolution_two(unit_segment):
    result = grid_project(unit_segment, [0.6, 1.0], 2)
    np.testing.assert_allclose(result.point, [0.5, 0.0])
    np.testing.assert_allclose(result.weights, [0.5, 0.5])


def test_grid_project_triangle(triangle):
    result = grid_project(triangle, [1.0, 1.0], 1000)
    assert np.linalg.norm(result.point - np.array([0.5, 0.5])) <= 2e-3


def test_grid_project_vertex_is_exact(triangle):
    result = grid_project(triangle, [0.0, 1.0], 50)
    np.testing.assert_array_equal(result.point, [0.0, 1.0])
    assert result.distance == 0.0


def test_grid_project_budget(triangle):
    with pytest.raises(BudgetExceeded):
        grid_project(triangle, [1.0, 1.0], 1000, budget=1000)


def test_grid_project_rejects_low_resolution(triangle):
    with pytest.raises(InputError):
        grid_project(triangle, [1.0, 1.0], 1)


def test_grid_distance_brackets_the_exact_distance(rng):
    for _ in range(20):
        s = random_simplex(rng, max_n=3, max_d=4)
        x = rng.uniform(-2.0, 2.0, size=s.dim)
        exact = project_simplex(s, x)
        grid = grid_project(s, x, 40)
        bound = grid_error_bound(s.vertices, 40)
        assert grid.distance >= exact.distance - 1e-9
        assert grid.distance <= exact.distance + bound + 1e-9


def test_hull_diameter(unit_square):
    assert hull_diameter(unit_square.vertices) == pytest.approx(np.sqrt(2.0))
    assert hull_diameter(np.array([[1.0, 2.0]])) == 0.0


def test_scan_lambda_examples(disk_cone, unit_square):
    assert scan_lambda(disk_cone, np.zeros(3), [2.0, 0.0, 0.0], 10 ** 6) == pytest.approx(0.5, abs=1e-6)
    assert scan_lambda(unit_square, [2.0, 0.5], [1.0, 0.5], 1000) == 0.0
    v = np.array([0.5, 0.5])
    assert scan_lambda(unit_square, v, v, 10) == 1.0


def test_scan_lambda_tracks_bisection(unit_square):
    pentagon = Polytope(np.array([[0.0, 0.0], [2.0, 0.0], [2.5, 1.0], [1.0, 2.0], [-0.5, 1.0]]))
    for body, x, v in [
        (unit_square, [2.0, 0.5], [0.0, 0.5]),
        (unit_square, [1.5, 1.5], [0.2, 0.1]),
        (pentagon, [3.0, 3.0], [1.0, 0.5]),
    ]:
        steps = 2000
        assert abs(scan_lambda(body, x, v, steps) - lambda_max(body, x, v)) <= 1.0 / steps + 1e-9


def test_scan_lambda_requires_member(unit_square):
    with pytest.raises(VNotInBody):
        scan_lambda(unit_square, [0.0, 0.0], [3.0, 3.0], 10)
    with pytest.raises(InputError):
        scan_lambda(unit_square, [0.0, 0.0], [0.5, 0.5], 0)
