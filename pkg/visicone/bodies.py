"""
Convex bodies behind one membership-oracle contract.

Every body is an immutable dataclass exposing `dim`, `contains(x, tol)`,
`translate(t)` and `sample(rng, count)`. Module-level functions mirror the
methods so callers can stay body-agnostic.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional, Tuple

import numpy as np

from visicone.config import BUDGETS, TOLERANCES
from visicone.errors import (
    InvalidBody,
    NotInAffineHull,
    NumericalError,
    Unsupported,
    UnsupportedBody,
)
from visicone.vectorspace import (
    affine_foot,
    affine_rank,
    as_points,
    as_vector,
    check_dim,
    is_affinely_independent,
    nnls_active_set,
)

logger = logging.getLogger(__name__)


class ConvexBody:
    """Base class for the membership-oracle contract"""

    tag = 'body'

    @property
    def dim(self) -> int:
        raise NotImplementedError

    def contains(self, x, tol: Optional[float] = None) -> bool:
        raise NotImplementedError

    def contains_many(self, points: np.ndarray, tol: Optional[float] = None) -> np.ndarray:
        """Membership of each row; bodies with a closed form override this"""
        return np.array([self.contains(p, tol) for p in points], dtype=bool)

    def translate(self, t) -> 'ConvexBody':
        raise Unsupported(f"{self.tag} cannot be translated")

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        raise UnsupportedBody(f"{self.tag} does not support point sampling")

    def _point(self, x, name='x') -> np.ndarray:
        vec = x if isinstance(x, np.ndarray) else as_vector(x, name=name)
        check_dim(vec, self.dim, name)
        return vec


def _tol(tol):
    return TOLERANCES['membership'] if tol is None else tol


@dataclass(frozen=True, eq=False)
class BarycentricCoords:
    """Affine weights of a point with respect to the vertices of a simplex"""
    weights: np.ndarray
    vertices: np.ndarray = field(repr=False)

    def point(self) -> np.ndarray:
        return self.weights @ self.vertices

    def is_nonnegative(self, tol: float) -> bool:
        return bool(np.all(self.weights >= -tol))


class _VertexBody(ConvexBody):
    """Shared behaviour of bodies given by an affinely independent vertex list"""

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def n(self) -> int:
        return self.vertices.shape[0] - 1

    @cached_property
    def edges(self) -> np.ndarray:
        return self.vertices[1:] - self.vertices[0]

    def affine_coords(self, x: np.ndarray) -> Tuple[np.ndarray, float]:
        """Barycentric weights of the foot of x on aff(body), and the distance to it"""
        alpha, foot = affine_foot(self.vertices[0], self.edges, x)
        weights = np.concatenate(([1.0 - alpha.sum()], alpha))
        return weights, float(np.linalg.norm(x - foot))

    def contains(self, x, tol=None) -> bool:
        tol = _tol(tol)
        x = self._point(x)
        weights, residual = self.affine_coords(x)
        return residual <= tol and bool(np.all(weights >= -tol))

    def sample(self, rng, count):
        weights = rng.dirichlet(np.ones(self.vertices.shape[0]), size=count)
        return weights @ self.vertices


@dataclass(frozen=True, eq=False)
class Segment(_VertexBody):
    e0: np.ndarray
    e1: np.ndarray

    tag = 'segment'

    def __post_init__(self):
        e0 = as_vector(self.e0, name='e0')
        e1 = as_vector(self.e1, dim=e0.size, name='e1')
        if np.linalg.norm(e1 - e0) <= TOLERANCES['same_point']:
            raise InvalidBody("segment endpoints must differ")
        object.__setattr__(self, 'e0', e0)
        object.__setattr__(self, 'e1', e1)

    @cached_property
    def vertices(self) -> np.ndarray:
        return np.vstack((self.e0, self.e1))

    def translate(self, t):
        t = self._point(t, 't')
        return Segment(self.e0 + t, self.e1 + t)


@dataclass(frozen=True, eq=False)
class Simplex(_VertexBody):
    vertices: np.ndarray

    tag = 'simplex'

    def __post_init__(self):
        verts = as_points(self.vertices, name='vertices')
        if verts.shape[0] < 2:
            raise InvalidBody("a simplex needs at least two vertices")
        if not is_affinely_independent(verts):
            raise InvalidBody("simplex vertices must be affinely independent")
        object.__setattr__(self, 'vertices', verts)

    def facet(self, j: int) -> np.ndarray:
        """Vertex list with vertex j dropped"""
        return np.delete(self.vertices, j, axis=0)

    def translate(self, t):
        t = self._point(t, 't')
        return Simplex(self.vertices + t)


@dataclass(frozen=True, eq=False)
class Polytope(ConvexBody):
    vertices: np.ndarray

    tag = 'polytope'

    def __post_init__(self):
        verts = as_points(self.vertices, name='vertices')
        seen = set()
        keep = []
        for i, row in enumerate(verts):
            key = tuple(row.tolist())
            if key not in seen:
                seen.add(key)
                keep.append(i)
        if len(keep) < verts.shape[0]:
            logger.warning(f"Dropped {verts.shape[0] - len(keep)} duplicate polytope vertices")
            verts = verts[keep]
            verts.setflags(write=False)
        object.__setattr__(self, 'vertices', verts)

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @cached_property
    def affine_dim(self) -> int:
        return affine_rank(self.vertices)

    def contains(self, x, tol=None) -> bool:
        tol = _tol(tol)
        _, residual = nnls_hull(self, self._point(x))
        return residual <= tol

    def translate(self, t):
        t = self._point(t, 't')
        return Polytope(self.vertices + t)

    def sample(self, rng, count):
        weights = rng.dirichlet(np.ones(self.vertices.shape[0]), size=count)
        return weights @ self.vertices


@dataclass(frozen=True, eq=False)
class AffineFlat(ConvexBody):
    base: np.ndarray
    directions: np.ndarray = None

    tag = 'flat'

    def __post_init__(self):
        base = as_vector(self.base, name='base')
        if self.directions is None or len(self.directions) == 0:
            dirs = np.zeros((0, base.size))
            dirs.setflags(write=False)
        else:
            dirs = as_points(self.directions, dim=base.size, name='directions')
            if affine_rank(np.vstack((np.zeros(base.size), dirs))) < dirs.shape[0]:
                raise InvalidBody("flat directions must be linearly independent")
        object.__setattr__(self, 'base', base)
        object.__setattr__(self, 'directions', dirs)

    @property
    def dim(self) -> int:
        return self.base.size

    @property
    def flat_dim(self) -> int:
        return self.directions.shape[0]

    def foot(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return affine_foot(self.base, self.directions, x)

    def contains(self, x, tol=None) -> bool:
        tol = _tol(tol)
        x = self._point(x)
        _, foot = self.foot(x)
        return float(np.linalg.norm(x - foot)) <= tol

    def translate(self, t):
        t = self._point(t, 't')
        return AffineFlat(self.base + t, self.directions)

    def sample(self, rng, count):
        coeffs = rng.normal(size=(count, self.flat_dim))
        return self.base + coeffs @ self.directions


@dataclass(frozen=True, eq=False)
class DiskCone(ConvexBody):
    """The fixed set (1,0,0) + cone{(1, a, b) : a^2 + (b - 1)^2 <= 1} in dimension 3"""

    tag = 'disk_cone'

    @property
    def dim(self) -> int:
        return 3

    def contains(self, x, tol=None) -> bool:
        x = self._point(x)
        return bool(self.contains_many(x[np.newaxis, :], tol)[0])

    def contains_many(self, points, tol=None):
        tol = _tol(tol)
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        rho = pts[:, 0] - 1.0
        x2, x3 = pts[:, 1], pts[:, 2]
        inside = np.zeros(pts.shape[0], dtype=bool)

        apex = np.abs(rho) <= tol
        inside[apex] = x2[apex] ** 2 + x3[apex] ** 2 <= tol ** 2

        ahead = rho > tol
        r = rho[ahead]
        inside[ahead] = (x2[ahead] / r) ** 2 + (x3[ahead] / r - 1.0) ** 2 <= 1.0 + tol
        return inside

    def chord_lambda(self, x: np.ndarray, v: np.ndarray) -> float:
        # The body is {rho >= 0, x2^2 + x3^2 - 2 rho x3 <= 0} with rho = x1 - 1.
        delta = x - v
        rho_v = v[0] - 1.0
        a = delta[1] ** 2 + delta[2] ** 2 - 2.0 * delta[0] * delta[2]
        b = 2.0 * (v[1] * delta[1] + v[2] * delta[2]) - 2.0 * (rho_v * delta[2] + delta[0] * v[2])
        c = v[1] ** 2 + v[2] ** 2 - 2.0 * rho_v * v[2]

        lo, hi = 0.0, 1.0
        if delta[0] > 0:
            lo = max(lo, -rho_v / delta[0])
        elif delta[0] < 0:
            hi = min(hi, -rho_v / delta[0])
        elif rho_v < 0:
            return 0.0
        if lo > hi:
            return 0.0
        top = _sublevel_max(a, b, c, lo, hi)
        return 0.0 if top is None else top

    def sample(self, rng, count):
        rho = rng.uniform(0.0, 2.0, size=count)
        radius = np.sqrt(rng.uniform(0.0, 1.0, size=count))
        angle = rng.uniform(0.0, 2.0 * np.pi, size=count)
        alpha = radius * np.cos(angle)
        beta = 1.0 + radius * np.sin(angle)
        return np.column_stack((1.0 + rho, rho * alpha, rho * beta))


@dataclass(frozen=True, eq=False)
class Ball(ConvexBody):
    center: np.ndarray
    radius: float

    tag = 'ball'

    def __post_init__(self):
        center = as_vector(self.center, name='center')
        radius = float(self.radius)
        if not np.isfinite(radius) or radius <= 0:
            raise InvalidBody("ball radius must be positive")
        object.__setattr__(self, 'center', center)
        object.__setattr__(self, 'radius', radius)

    @property
    def dim(self) -> int:
        return self.center.size

    def contains(self, x, tol=None) -> bool:
        tol = _tol(tol)
        x = self._point(x)
        return float(np.linalg.norm(x - self.center)) <= self.radius + tol

    def contains_many(self, points, tol=None):
        tol = _tol(tol)
        dist = np.linalg.norm(np.atleast_2d(points) - self.center, axis=1)
        return dist <= self.radius + tol

    def chord_lambda(self, x: np.ndarray, v: np.ndarray) -> float:
        delta = x - v
        offset = v - self.center
        a = float(delta @ delta)
        b = 2.0 * float(offset @ delta)
        c = float(offset @ offset) - self.radius ** 2
        top = _sublevel_max(a, b, c, 0.0, 1.0)
        return 0.0 if top is None else top

    def translate(self, t):
        t = self._point(t, 't')
        return Ball(self.center + t, self.radius)

    def sample(self, rng, count):
        direction = rng.normal(size=(count, self.dim))
        direction /= np.linalg.norm(direction, axis=1, keepdims=True)
        scale = self.radius * rng.uniform(0.0, 1.0, size=(count, 1)) ** (1.0 / self.dim)
        return self.center + scale * direction


def _sublevel_max(a: float, b: float, c: float, lo: float, hi: float) -> Optional[float]:
    """Largest lam in [lo, hi] with a lam^2 + b lam + c <= 0, or None"""
    if a * hi * hi + b * hi + c <= 0:
        return hi
    roots = []
    if a == 0:
        if b != 0:
            roots.append(-c / b)
    else:
        disc = b * b - 4.0 * a * c
        if disc >= 0:
            q = -0.5 * (b + np.copysign(np.sqrt(disc), b))
            if q != 0:
                roots.extend((q / a, c / q))
            else:
                roots.append(0.0)
    inside = [r for r in roots if lo <= r <= hi]
    return max(inside) if inside else None


# Module-level mirrors of the body methods
def contains(body: ConvexBody, x, tol: Optional[float] = None) -> bool:
    if tol is not None and tol <= 0:
        raise ValueError("membership tolerance must be positive")
    return body.contains(x, tol)


def translate(body: ConvexBody, t) -> ConvexBody:
    return body.translate(t)


def chord_lambda(body: ConvexBody, x: np.ndarray, v: np.ndarray) -> float:
    if not hasattr(body, 'chord_lambda'):
        raise UnsupportedBody(f"{body.tag} has no closed-form chord")
    return body.chord_lambda(x, v)


def barycentric_coords(s: _VertexBody, x) -> BarycentricCoords:
    """Unique affine weights of x (which must lie in aff(s)) over the vertices of s"""
    x = s._point(x)
    weights, residual = s.affine_coords(x)
    in_aff_tol = TOLERANCES['in_aff_rel'] * (1.0 + float(np.linalg.norm(x)))
    if residual > in_aff_tol:
        raise NotInAffineHull(f"point is {residual:.3e} away from the affine hull (limit {in_aff_tol:.3e})")
    weights.setflags(write=False)
    return BarycentricCoords(weights, s.vertices)


def nnls_hull(p: Polytope, x) -> Tuple[np.ndarray, float]:
    """
    Closest point of conv(p.vertices) to x by active-set nonnegative least squares.

    The shifted vertices v_i - x get an extra homogenizing row of weight mu;
    the NNLS solution u rescaled to sum one is exactly the optimal hull weight
    vector (the KKT conditions of the lifted problem reduce to those of the
    min-norm problem). Returns (weights, Euclidean residual).
    """
    x = p._point(x)
    shifted = p.vertices - x
    m = shifted.shape[0]
    mu = max(1.0, float(np.max(np.linalg.norm(shifted, axis=1))))
    lifted = np.vstack((shifted.T, np.full((1, m), mu)))
    rhs = np.zeros(p.dim + 1)
    rhs[-1] = mu

    u = nnls_active_set(lifted, rhs, maxiter=BUDGETS['nnls_iterations_per_vertex'] * m).solution

    total = float(u.sum())
    if total <= 0.0:
        raise NumericalError("hull NNLS returned the zero vector")
    weights = u / total
    residual = float(np.linalg.norm(weights @ p.vertices - x))
    logger.debug(f"nnls_hull: {m} vertices, support {np.count_nonzero(weights)}, residual {residual:.3e}")
    return weights, residual


def extreme_points(p: Polytope, tol: Optional[float] = None) -> List[int]:
    """Indices of vertices that are not in the hull of the remaining vertices"""
    tol = _tol(tol)
    m = p.vertices.shape[0]
    if m == 1:
        return [0]
    extreme = []
    for i in range(m):
        others = Polytope(np.delete(p.vertices, i, axis=0))
        _, residual = nnls_hull(others, p.vertices[i])
        if residual > tol:
            extreme.append(i)
    return extreme
