import math

import numpy as np
import pytest

from visicone.bodies import AffineFlat, Ball, DiskCone, Polytope, Segment, Simplex
from visicone.errors import SubsetBudgetExceeded, UnsupportedBody
from visicone.projection import (
    caratheodory_reduce,
    min_norm_oracle,
    project,
    project_affine,
    project_ball,
    project_polytope,
    project_segment,
    project_simplex,
    subset_count,
)
from visicone.suites.instances import instance_rng, random_polytope, random_simplex
from visicone.vectorspace import is_affinely_independent


@pytest.mark.parametrize("x, point, distance", [
    ((0.0, 0.0), (0.0, 0.0), 0.0),
    ((2.0, 5.0), (1.0, 0.0), math.sqrt(26.0)),
    ((0.3, 7.0), (0.3, 0.0), 7.0),
])
def test_project_segment_examples(unit_segment, x, point, distance):
    result = project_segment(unit_segment, x)
    np.testing.assert_allclose(result.point, point, atol=1e-12)
    assert result.distance == pytest.approx(distance, rel=1e-12)
    np.testing.assert_allclose(result.recombine(), result.point, atol=1e-12)


def test_project_affine_onto_axis():
    axis = AffineFlat(np.zeros(2), np.array([[1.0, 0.0]]))
    result = project_affine(axis, [2.0, 3.0])
    np.testing.assert_allclose(result.point, [2.0, 0.0], atol=1e-12)
    assert result.distance == pytest.approx(3.0)


def test_project_affine_is_idempotent_on_the_flat():
    flat = AffineFlat(np.array([1.0, 0.0, 2.0]), np.array([[1.0, 1.0, 0.0], [0.0, 1.0, 1.0]]))
    x = flat.base + 0.7 * flat.directions[0] - 1.3 * flat.directions[1]
    result = project_affine(flat, x)
    np.testing.assert_allclose(result.point, x, atol=1e-10)
    assert result.distance <= 1e-10


def test_project_affine_point_flat():
    flat = AffineFlat(np.array([4.0, -2.0]))
    result = project_affine(flat, [0.0, 0.0])
    np.testing.assert_array_equal(result.point, [4.0, -2.0])


@pytest.mark.parametrize("x, point, distance", [
    ((0.2, 0.2), (0.2, 0.2), 0.0),
    ((1.0, 1.0), (0.5, 0.5), math.sqrt(2.0) / 2.0),
    ((-1.0, -1.0), (0.0, 0.0), math.sqrt(2.0)),
])
def test_project_simplex_examples(triangle, x, point, distance):
    result = project_simplex(triangle, x)
    np.testing.assert_allclose(result.point, point, atol=1e-12)
    assert result.distance == pytest.approx(distance, abs=1e-12)
    assert result.weights.sum() == pytest.approx(1.0)
    assert np.all(result.weights >= 0)


def test_project_simplex_records_the_facet_chain(triangle):
    # (1, 1) projects onto the hypotenuse, the facet opposite vertex 0
    assert project_simplex(triangle, [1.0, 1.0]).facet_chain == (0,)
    assert project_simplex(triangle, [0.2, 0.2]).facet_chain == ()


def test_project_simplex_of_a_segment_uses_the_closed_form(unit_segment):
    result = project_simplex(unit_segment, [0.5, -2.0])
    np.testing.assert_allclose(result.point, [0.5, 0.0])


def test_project_simplex_distance_matches_point(rng):
    for _ in range(50):
        s = random_simplex(rng)
        x = rng.uniform(-2.0, 2.0, size=s.dim)
        result = project_simplex(s, x)
        assert result.distance == pytest.approx(np.linalg.norm(x - result.point), rel=1e-9, abs=1e-12)
        np.testing.assert_allclose(result.recombine(), result.point, atol=1e-9)


def test_project_simplex_agrees_with_oracle(rng):
    for _ in range(100):
        s = random_simplex(rng)
        x = rng.uniform(-2.0, 2.0, size=s.dim)
        exact = project_simplex(s, x)
        ref = min_norm_oracle(Polytope(s.vertices), x)
        assert np.linalg.norm(exact.point - ref.point) <= 1e-6


def test_project_polytope_square(unit_square):
    result = project_polytope(unit_square, [2.0, 0.5])
    np.testing.assert_allclose(result.point, [1.0, 0.5], atol=1e-12)
    assert result.distance == pytest.approx(1.0)


def test_project_polytope_on_simplex_vertices(triangle):
    as_polytope = Polytope(triangle.vertices)
    for x in ([1.0, 1.0], [-1.0, -1.0], [0.2, 0.2], [0.5, -3.0]):
        a = project_polytope(as_polytope, x)
        b = project_simplex(triangle, x)
        np.testing.assert_allclose(a.point, b.point, atol=1e-12)


def test_project_polytope_seventeen_gon(rng):
    angles = 2.0 * np.pi * np.arange(17) / 17
    gon = Polytope(np.column_stack((np.cos(angles), np.sin(angles))))
    for x in rng.uniform(-2.0, 2.0, size=(20, 2)):
        a = project_polytope(gon, x)
        b = min_norm_oracle(gon, x)
        assert np.linalg.norm(a.point - b.point) <= 1e-6


def test_project_polytope_subset_budget(unit_square):
    assert subset_count(4, 2) == 4 + 6 + 4
    with pytest.raises(SubsetBudgetExceeded):
        project_polytope(unit_square, [2.0, 0.5], max_subsets=10)


def test_min_norm_oracle_examples(unit_square, triangle):
    single = Polytope(np.array([[1.0, 1.0]]))
    result = min_norm_oracle(single, [4.0, 5.0])
    np.testing.assert_allclose(result.point, [1.0, 1.0])
    assert result.distance == pytest.approx(5.0)

    inside = min_norm_oracle(unit_square, [0.3, 0.6])
    np.testing.assert_allclose(inside.point, [0.3, 0.6], atol=1e-10)
    assert inside.distance <= 1e-10

    hyp = min_norm_oracle(Polytope(triangle.vertices), [1.0, 1.0])
    np.testing.assert_allclose(hyp.point, [0.5, 0.5], atol=1e-9)


def test_caratheodory_reduce_keeps_the_point(rng):
    vertices = rng.normal(size=(8, 2))
    weights = rng.dirichlet(np.ones(8))
    reduced = caratheodory_reduce(vertices, weights)
    np.testing.assert_allclose(reduced @ vertices, weights @ vertices, atol=1e-9)
    assert reduced.sum() == pytest.approx(1.0)
    assert np.all(reduced >= 0)
    support = reduced > 0
    assert support.sum() <= 3
    assert is_affinely_independent(vertices[support])


def test_project_ball():
    ball = Ball(np.array([0.0, 1.0]), 1.0)
    outside = project_ball(ball, [0.0, 4.0])
    np.testing.assert_allclose(outside.point, [0.0, 2.0])
    assert outside.distance == pytest.approx(2.0)
    inside = project_ball(ball, [0.1, 1.0])
    np.testing.assert_array_equal(inside.point, [0.1, 1.0])
    assert inside.distance == 0.0


def test_project_dispatch(unit_segment, triangle, unit_square):
    assert isinstance(project(unit_segment, [0.5, 1.0]).distance, float)
    assert project(triangle, [1.0, 1.0]).distance == pytest.approx(math.sqrt(0.5))
    assert project(unit_square, [2.0, 0.5]).distance == pytest.approx(1.0)
    with pytest.raises(UnsupportedBody):
        project(DiskCone(), [0.0, 0.0, 0.0])


def test_simplex_projection_in_higher_codimension():
    # a triangle in the z = 1 plane of R^3
    s = Simplex(np.array([[0.0, 0.0, 1.0], [1.0, 0.0, 1.0], [0.0, 1.0, 1.0]]))
    result = project_simplex(s, [1.0, 1.0, 3.0])
    np.testing.assert_allclose(result.point, [0.5, 0.5, 1.0], atol=1e-12)
    assert result.distance == pytest.approx(math.sqrt(0.5 + 4.0))


def test_segment_body_rejects_wrong_dimension():
    s = Segment(np.zeros(3), np.ones(3))
    with pytest.raises(ValueError):
        project_segment(s, [1.0, 2.0])


def test_min_norm_oracle_satisfies_the_variational_inequality():
    for index in range(60):
        rng = instance_rng(0, index)
        s = random_simplex(rng)
        x = rng.uniform(-2.0, 2.0, size=s.dim)
        ref = min_norm_oracle(Polytope(s.vertices), x)
        slack = (s.vertices - ref.point) @ (x - ref.point)
        assert np.all(slack <= 1e-9), index
        assert ref.distance == pytest.approx(project_simplex(s, x).distance, abs=1e-6), index


def test_triangle_projection_from_its_plane_is_the_best_edge(rng):
    for _ in range(30):
        verts = rng.uniform(-1.0, 1.0, size=(3, 3))
        tri = Simplex(verts)
        weights = rng.uniform(-1.0, 2.0, size=3)
        weights[int(rng.integers(3))] = -rng.uniform(0.1, 1.0)
        if weights.sum() < 0.5:
            continue
        weights /= weights.sum()
        if np.all(weights >= 0):
            continue
        x = weights @ verts
        edges = [project_segment(Segment(verts[i], verts[j]), x).distance
                 for i, j in ((0, 1), (0, 2), (1, 2))]
        assert project_simplex(tri, x).distance == pytest.approx(min(edges), abs=1e-9)


def test_projection_is_non_expansive(rng):
    for _ in range(40):
        s = random_simplex(rng)
        p = random_polytope(rng, max_d=3, extra=2)
        for body, proj in ((s, project_simplex), (p, project_polytope)):
            x, y = rng.uniform(-2.0, 2.0, size=(2, body.dim))
            gap = np.linalg.norm(proj(body, x).point - proj(body, y).point)
            assert gap <= np.linalg.norm(x - y) + 1e-9


def test_projection_is_idempotent(rng):
    for _ in range(40):
        s = random_simplex(rng)
        p = random_polytope(rng, max_d=3, extra=2)
        for body, proj in ((s, project_simplex), (p, project_polytope)):
            first = proj(body, rng.uniform(-2.0, 2.0, size=body.dim)).point
            again = proj(body, first)
            np.testing.assert_allclose(again.point, first, atol=1e-9)
            assert again.distance <= 1e-9
