"""
Slow brute-force references for the projection and visibility routines.

Both oracles trade speed for independence: grid_project only ever evaluates
hull points on a barycentric lattice, scan_lambda only ever asks the
membership oracle.
"""

import itertools
import logging
import math
from typing import Optional

import numpy as np
from scipy.spatial.distance import pdist

from visicone.bodies import ConvexBody, Polytope, Segment, Simplex
from visicone.config import BUDGETS, TOLERANCES
from visicone.errors import BudgetExceeded, InputError, UnsupportedBody, VNotInBody
from visicone.projection import ProjectionResult

logger = logging.getLogger(__name__)

CHUNK_SIZE = 65536


def lattice_size(m: int, resolution: int) -> int:
    """Number of weight vectors k / resolution with k in N^m summing to resolution"""
    return math.comb(resolution + m - 1, m - 1)


def hull_diameter(vertices: np.ndarray) -> float:
    if vertices.shape[0] < 2:
        return 0.0
    return float(np.max(pdist(vertices)))


def grid_error_bound(vertices: np.ndarray, resolution: int) -> float:
    """
    Bound on how much farther the best lattice point can be than the true
    projection. Rounding the optimal weights to the lattice moves at most
    m / 4 units of mass.
    """
    m = vertices.shape[0]
    return hull_diameter(vertices) * max(1.0, m / 4.0) / resolution


def _lattice_chunks(m: int, resolution: int):
    """Yield integer weight arrays (rows sum to resolution) in lexicographic bar order"""
    if m == 1:
        yield np.array([[resolution]])
        return
    bars = itertools.combinations(range(resolution + m - 1), m - 1)
    while True:
        chunk = np.array(list(itertools.islice(bars, CHUNK_SIZE)), dtype=np.int64)
        if chunk.size == 0:
            return
        padded = np.hstack((
            np.full((chunk.shape[0], 1), -1),
            chunk,
            np.full((chunk.shape[0], 1), resolution + m - 1),
        ))
        yield np.diff(padded, axis=1) - 1


def grid_project(body, x, resolution: int, budget: Optional[int] = None) -> ProjectionResult:
    """Closest point of the barycentric lattice of the given resolution"""
    if not isinstance(body, (Segment, Simplex, Polytope)):
        raise UnsupportedBody(f"grid projection needs a vertex body, got {body.tag}")
    if resolution < 2:
        raise InputError(f"resolution must be at least 2, got {resolution}")
    x = body._point(x)
    budget = BUDGETS['lattice_points'] if budget is None else budget
    verts = body.vertices
    m = verts.shape[0]
    size = lattice_size(m, resolution)
    if size > budget:
        raise BudgetExceeded(f"lattice of {size} points exceeds the budget of {budget}")
    logger.debug(f"Scanning {size} lattice points over {m} vertices")

    best_sq, best_counts = math.inf, None
    for counts in _lattice_chunks(m, resolution):
        points = (counts / resolution) @ verts
        dist_sq = np.sum((points - x) ** 2, axis=1)
        i = int(np.argmin(dist_sq))
        # strict comparison keeps the first lattice index on ties
        if dist_sq[i] < best_sq:
            best_sq, best_counts = float(dist_sq[i]), counts[i]

    weights = best_counts / resolution
    point = weights @ verts
    return ProjectionResult(point, float(np.linalg.norm(x - point)), weights, verts)


def scan_lambda(body: ConvexBody, x, v, steps: int, tol: Optional[float] = None) -> float:
    """Largest k / steps with k x / steps + (1 - k / steps) v in the body"""
    if steps < 1:
        raise InputError(f"steps must be at least 1, got {steps}")
    x = body._point(x, 'x')
    v = body._point(v, 'v')
    tol = TOLERANCES['membership'] if tol is None else tol
    if not body.contains(v, 1e-8):
        raise VNotInBody(f"v does not belong to the {body.tag}")

    # feasible parameters form an interval starting at 0, so scan from the top
    top = steps
    while top >= 0:
        ks = np.arange(top, max(top - CHUNK_SIZE, -1), -1)
        lam = ks / steps
        points = lam[:, np.newaxis] * x + (1.0 - lam[:, np.newaxis]) * v
        hits = np.flatnonzero(body.contains_many(points, tol))
        if hits.size:
            return float(ks[hits[0]] / steps)
        top -= CHUNK_SIZE
    return 0.0
