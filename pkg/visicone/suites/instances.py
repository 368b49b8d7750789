"""Seeded random instances for the property suites and the tests"""

import logging

import numpy as np

from visicone.bodies import AffineFlat, Polytope, Simplex, nnls_hull
from visicone.config import BUDGETS
from visicone.errors import BudgetExceeded
from visicone.vectorspace import affine_rank, is_affinely_independent

logger = logging.getLogger(__name__)

# Outside query points keep at least this distance from the body
OUTSIDE_MARGIN = 0.05


def instance_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream per (seed, instance index)"""
    return np.random.default_rng([seed, index])


def _attempts():
    return range(BUDGETS['sample_attempts'])


def random_simplex(rng, max_n: int = 6, max_d: int = 8, full: bool = False) -> Simplex:
    """Simplex with n <= max_n, d <= max_d, vertices uniform in [-1, 1]^d"""
    for _ in _attempts():
        if full:
            d = int(rng.integers(2, min(max_n, max_d) + 1))
            n = d
        else:
            d = int(rng.integers(1, max_d + 1))
            n = int(rng.integers(1, min(max_n, d) + 1))
        verts = rng.uniform(-1.0, 1.0, size=(n + 1, d))
        if is_affinely_independent(verts):
            return Simplex(verts)
    raise BudgetExceeded("could not draw an affinely independent vertex set")


def random_polytope(rng, min_d: int = 2, max_d: int = 5, extra: int = 4) -> Polytope:
    """Full-dimensional polytope with between d + 1 and d + 1 + extra vertices"""
    for _ in _attempts():
        d = int(rng.integers(min_d, max_d + 1))
        m = int(rng.integers(d + 1, d + 2 + extra))
        verts = rng.uniform(-1.0, 1.0, size=(m, d))
        if affine_rank(verts) == d:
            return Polytope(verts)
    raise BudgetExceeded("could not draw a full-dimensional polytope")


def random_flat(rng, max_d: int = 5, max_k: int = 3) -> AffineFlat:
    """Flat of dimension 1..max_k in an ambient space of dimension at most max_d"""
    for _ in _attempts():
        k = int(rng.integers(1, max_k + 1))
        d = int(rng.integers(k + 1, max_d + 1))
        dirs = rng.normal(size=(k, d))
        if affine_rank(np.vstack((np.zeros(d), dirs))) == k:
            return AffineFlat(rng.uniform(-1.0, 1.0, size=d), dirs)
    raise BudgetExceeded("could not draw independent flat directions")


def hull_distance(vertices: np.ndarray, x: np.ndarray) -> float:
    _, residual = nnls_hull(Polytope(vertices), x)
    return residual


def outside_point(rng, vertices: np.ndarray, margin: float = OUTSIDE_MARGIN) -> np.ndarray:
    """Point of [-2, 2]^d at distance at least margin from conv(vertices)"""
    d = vertices.shape[1]
    for _ in _attempts():
        x = rng.uniform(-2.0, 2.0, size=d)
        if hull_distance(vertices, x) >= margin:
            return x
    raise BudgetExceeded("could not draw a point outside the hull")


def query_point(rng, vertices: np.ndarray, margin: float = OUTSIDE_MARGIN) -> np.ndarray:
    """Point that is either in conv(vertices) or at least margin away from it"""
    d = vertices.shape[1]
    for _ in _attempts():
        x = rng.uniform(-1.5, 1.5, size=d)
        dist = hull_distance(vertices, x)
        if dist <= 1e-12 or dist >= margin:
            return x
    raise BudgetExceeded("could not draw a well-separated query point")


def off_flat_point(rng, flat: AffineFlat, margin: float = OUTSIDE_MARGIN) -> np.ndarray:
    for _ in _attempts():
        x = flat.base + rng.normal(size=flat.dim)
        _, foot = flat.foot(x)
        if np.linalg.norm(x - foot) >= margin:
            return x
    raise BudgetExceeded("could not draw a point off the flat")


def hull_sample(rng, vertices: np.ndarray) -> np.ndarray:
    return rng.dirichlet(np.ones(vertices.shape[0])) @ vertices
