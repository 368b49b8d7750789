"""
Best approximation (metric projection) onto the bodies.

project_simplex implements the recursive facet descent: reduce onto the
affine hull, stop if the reduced point has nonnegative barycentric weights,
otherwise recurse over the facets and keep the closest candidate.
Distances are accumulated with the Pythagorean identity
d^2(x, C) = d^2(x, aff C) + d^2(P_aff(x), C).
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from visicone.bodies import (
    AffineFlat,
    Ball,
    ConvexBody,
    Polytope,
    Segment,
    Simplex,
    nnls_hull,
)
from visicone.config import BUDGETS, TOLERANCES
from visicone.errors import DegenerateFlat, NotPositiveDefinite, SubsetBudgetExceeded, UnsupportedBody
from visicone.vectorspace import affine_foot, is_affinely_independent

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ProjectionResult:
    """Nearest point of a body, its distance, and the weights that produce it"""
    point: np.ndarray
    distance: float
    weights: np.ndarray
    support: np.ndarray = field(repr=False)
    facet_chain: Tuple[int, ...] = ()

    def recombine(self) -> np.ndarray:
        if self.support.shape[0] == 0:
            return self.point
        return self.weights @ self.support

    def support_indices(self, threshold: float = 0.0):
        return [i for i, w in enumerate(self.weights) if w > threshold]


def _segment_formula(e0, e1, x):
    """Truncated projection parameter onto [e0, e1]"""
    edge = e1 - e0
    alpha = float((x - e0) @ edge) / float(edge @ edge)
    t = min(max(alpha, 0.0), 1.0)
    point = e0 + t * edge
    return point, float(np.linalg.norm(x - point)), np.array([1.0 - t, t])


def project_segment(s: Segment, x) -> ProjectionResult:
    x = s._point(x)
    point, distance, weights = _segment_formula(s.e0, s.e1, x)
    return ProjectionResult(point, distance, weights, s.vertices)


def project_affine(f: AffineFlat, x) -> ProjectionResult:
    x = f._point(x)
    try:
        alpha, point = f.foot(x)
    except NotPositiveDefinite as e:
        raise DegenerateFlat(f"flat directions are dependent: {e}", e.pivot_index)
    support = np.vstack((f.base, f.base + f.directions))
    weights = np.concatenate(([1.0 - alpha.sum()], alpha))
    return ProjectionResult(point, float(np.linalg.norm(x - point)), weights, support)


def project_ball(b: Ball, x) -> ProjectionResult:
    x = b._point(x)
    offset = x - b.center
    dist = float(np.linalg.norm(offset))
    if dist <= b.radius:
        point = x
    else:
        point = b.center + (b.radius / dist) * offset
    return ProjectionResult(point, max(dist - b.radius, 0.0), np.zeros(0), np.zeros((0, b.dim)))


def _descend(vertices: np.ndarray, x: np.ndarray, bary_tol: float, depth: int = 0):
    """
    Facet descent on an affinely independent vertex array.

    Returns (point, distance from x, weights over vertices, facet chain).
    """
    m = vertices.shape[0]
    if m == 1:
        return vertices[0], float(np.linalg.norm(x - vertices[0])), np.ones(1), ()
    if m == 2:
        point, distance, weights = _segment_formula(vertices[0], vertices[1], x)
        return point, distance, weights, ()

    try:
        alpha, reduced = affine_foot(vertices[0], vertices[1:] - vertices[0], x)
    except NotPositiveDefinite as e:
        raise DegenerateFlat(f"simplex vertices are affinely dependent: {e}", e.pivot_index)
    aff_sq = float(np.sum((x - reduced) ** 2))
    weights = np.concatenate(([1.0 - alpha.sum()], alpha))

    if np.all(weights >= -bary_tol):
        clamped = np.maximum(weights, 0.0)
        return reduced, math.sqrt(aff_sq), clamped / clamped.sum(), ()

    best = None
    for j in range(m):
        facet = np.delete(vertices, j, axis=0)
        candidate = _descend(facet, reduced, bary_tol, depth + 1)
        if best is None or candidate[1] < best[1][1]:
            best = (j, candidate)

    j, (point, facet_dist, facet_weights, chain) = best
    logger.debug(f"Facet descent depth {depth}: {m} vertices, dropped vertex {j}")
    full_weights = np.insert(facet_weights, j, 0.0)
    mapped = tuple(k if k < j else k + 1 for k in chain)
    return point, math.sqrt(aff_sq + facet_dist ** 2), full_weights, (j,) + mapped


def project_simplex(s, x, bary_tol: Optional[float] = None) -> ProjectionResult:
    """Nearest point of a simplex (segments use the closed form)"""
    if isinstance(s, Segment):
        return project_segment(s, x)
    x = s._point(x)
    if s.n == 1:
        return project_segment(Segment(s.vertices[0], s.vertices[1]), x)
    if bary_tol is None:
        bary_tol = TOLERANCES['bary']
    point, distance, weights, chain = _descend(s.vertices, x, bary_tol)
    return ProjectionResult(point, distance, weights, s.vertices, chain)


def subset_count(m: int, d: int) -> int:
    return sum(math.comb(m, k) for k in range(1, min(m, d + 1) + 1))


def project_polytope(p: Polytope, x, max_subsets: Optional[int] = None,
                     bary_tol: Optional[float] = None) -> ProjectionResult:
    """
    Nearest point of conv(vertices) as the best simplex projection over all
    affinely independent vertex subsets.
    """
    x = p._point(x)
    if max_subsets is None:
        max_subsets = BUDGETS['max_subsets']
    if bary_tol is None:
        bary_tol = TOLERANCES['bary']
    verts = p.vertices
    m, d = verts.shape
    total = subset_count(m, d)
    if total > max_subsets:
        raise SubsetBudgetExceeded(f"{total} vertex subsets exceed the budget of {max_subsets}")
    logger.debug(f"Projecting onto polytope with {m} vertices through {total} subsets")

    best = None
    for k in range(1, min(m, d + 1) + 1):
        for subset in itertools.combinations(range(m), k):
            sub = verts[list(subset)]
            if k > 1 and not is_affinely_independent(sub):
                continue
            candidate = _descend(sub, x, bary_tol)
            if best is None or candidate[1] < best[1][1]:
                best = (subset, candidate)

    subset, (point, distance, sub_weights, chain) = best
    weights = np.zeros(m)
    weights[list(subset)] = sub_weights
    mapped = tuple(subset[k] for k in chain)
    return ProjectionResult(point, distance, weights, verts, mapped)


def caratheodory_reduce(vertices: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """
    Hull weights for the same point whose support is affinely independent.

    Moves along an affine dependence of the current support until one weight
    vanishes, and repeats.
    """
    weights = np.array(weights, dtype=float)
    while True:
        support = np.flatnonzero(weights > 0.0)
        pts = vertices[support]
        if support.size <= 1 or is_affinely_independent(pts):
            return weights
        lifted = np.vstack((pts.T, np.ones(support.size)))
        _, _, vh = np.linalg.svd(lifted)
        dependence = vh[-1]
        if not np.any(dependence > 0):
            dependence = -dependence
        positive = dependence > 0
        ratios = np.full(support.size, np.inf)
        ratios[positive] = weights[support][positive] / dependence[positive]
        leaving = int(np.argmin(ratios))
        weights[support] = np.maximum(weights[support] - ratios[leaving] * dependence, 0.0)
        weights[support[leaving]] = 0.0
        weights /= weights.sum()


def min_norm_oracle(p: Polytope, x) -> ProjectionResult:
    """Independent reference projection through the hull NNLS solve"""
    x = p._point(x)
    weights, _ = nnls_hull(p, x)
    weights = caratheodory_reduce(p.vertices, weights)
    point = weights @ p.vertices
    return ProjectionResult(point, float(np.linalg.norm(x - point)), weights, p.vertices)


def project(body: ConvexBody, x) -> ProjectionResult:
    """Dispatch to the projection routine for the body type"""
    if isinstance(body, Segment):
        return project_segment(body, x)
    if isinstance(body, Simplex):
        return project_simplex(body, x)
    if isinstance(body, Polytope):
        return project_polytope(body, x)
    if isinstance(body, AffineFlat):
        return project_affine(body, x)
    if isinstance(body, Ball):
        return project_ball(body, x)
    raise UnsupportedBody(f"no projection routine for {body.tag}")
