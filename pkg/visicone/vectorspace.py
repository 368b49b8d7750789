"""
Dense real linear algebra shared by every other module.

Vectors are read-only 1-D float64 numpy arrays; symmetric matrices are 2-D
float64 arrays stored exactly symmetric. Rank decisions (solve_spd and
is_affinely_independent) go through the same pivoted Cholesky factorization
so the two can never disagree.
"""

import logging
from typing import NamedTuple, Optional, Sequence

import numpy as np
from scipy.linalg import solve_triangular

from visicone.config import TOLERANCES
from visicone.errors import DimensionMismatch, InputError, MaxIterationsExceeded, NotPositiveDefinite

logger = logging.getLogger(__name__)


def as_vector(coords, dim: Optional[int] = None, name: str = 'vector') -> np.ndarray:
    """Validate coordinates and return them as an immutable float64 vector"""
    try:
        vec = np.array(coords, dtype=float)
    except (TypeError, ValueError) as e:
        raise InputError(f"{name}: not a list of real numbers ({e})")
    if vec.ndim != 1 or vec.size == 0:
        raise InputError(f"{name}: expected a nonempty flat coordinate list")
    if not np.all(np.isfinite(vec)):
        raise InputError(f"{name}: coordinates must be finite")
    if dim is not None and vec.size != dim:
        raise DimensionMismatch(f"{name}: expected dimension {dim}, got {vec.size}")
    vec.setflags(write=False)
    return vec


def as_points(points, dim: Optional[int] = None, name: str = 'points') -> np.ndarray:
    """Stack a nonempty list of equal-length vectors into an immutable (m, d) array"""
    rows = [as_vector(p, dim, f"{name}[{i}]") for i, p in enumerate(points)]
    if not rows:
        raise InputError(f"{name}: at least one point is required")
    width = rows[0].size
    for i, row in enumerate(rows):
        if row.size != width:
            raise DimensionMismatch(f"{name}[{i}]: expected dimension {width}, got {row.size}")
    arr = np.vstack(rows)
    arr.setflags(write=False)
    return arr


def check_dim(x: np.ndarray, dim: int, name: str = 'x'):
    if x.shape[-1] != dim:
        raise DimensionMismatch(f"{name}: expected dimension {dim}, got {x.shape[-1]}")


def gram_matrix(vectors) -> np.ndarray:
    """Matrix of pairwise inner products, exactly symmetric as stored"""
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        vecs = vectors.astype(float, copy=False)
    else:
        vecs = as_points(vectors)
    if vecs.shape[0] == 0:
        raise InputError("gram_matrix needs at least one vector")
    g = vecs @ vecs.T
    # mirror the upper triangle so entries[i][j] == entries[j][i] bit for bit
    upper = np.triu(g)
    return upper + np.triu(g, 1).T


class PivotedCholesky(NamedTuple):
    """P^T M P = L L^T restricted to the first `rank` pivots"""
    lower: np.ndarray
    perm: np.ndarray
    rank: int
    threshold: float


def pivoted_cholesky(m: np.ndarray, pivot_rel: Optional[float] = None) -> PivotedCholesky:
    """
    Diagonal-pivoted Cholesky factorization of a symmetric positive
    semidefinite matrix. Stops at the first pivot not above
    pivot_rel * (largest diagonal entry).
    """
    if pivot_rel is None:
        pivot_rel = TOLERANCES['pivot_rel']
    a = np.array(m, dtype=float, copy=True)
    n = a.shape[0]
    perm = np.arange(n)
    lower = np.zeros((n, n))
    scale = float(np.max(np.diag(a))) if n else 0.0
    threshold = pivot_rel * max(scale, 0.0)

    for k in range(n):
        residual = np.diag(a)[k:] - np.sum(lower[k:, :k] ** 2, axis=1)
        q = k + int(np.argmax(residual))
        pivot = residual[q - k]
        if pivot <= threshold:
            logger.debug(f"Pivoted Cholesky stopped at rank {k} (pivot {pivot:.3e} <= {threshold:.3e})")
            return PivotedCholesky(lower[:, :k], perm, k, threshold)
        if q != k:
            a[[k, q], :] = a[[q, k], :]
            a[:, [k, q]] = a[:, [q, k]]
            lower[[k, q], :] = lower[[q, k], :]
            perm[[k, q]] = perm[[q, k]]
        lower[k, k] = np.sqrt(pivot)
        if k + 1 < n:
            lower[k + 1:, k] = (a[k + 1:, k] - lower[k + 1:, :k] @ lower[k, :k]) / lower[k, k]

    return PivotedCholesky(lower, perm, n, threshold)


def solve_spd(m: np.ndarray, rhs, pivot_rel: Optional[float] = None) -> np.ndarray:
    """Solve m @ alpha = rhs for a symmetric positive definite m"""
    m = np.asarray(m, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputError(f"solve_spd needs a square matrix, got shape {m.shape}")
    if not np.array_equal(m, m.T):
        raise InputError("solve_spd needs a symmetric matrix")
    if rhs.shape != (m.shape[0],):
        raise DimensionMismatch(f"rhs: expected length {m.shape[0]}, got {rhs.shape}")

    factor = pivoted_cholesky(m, pivot_rel)
    n = m.shape[0]
    if factor.rank < n:
        raise NotPositiveDefinite(
            f"matrix is not positive definite: pivot {factor.rank} fell below {factor.threshold:.3e}",
            pivot_index=factor.rank,
        )
    if n == 0:
        return np.zeros(0)

    y = solve_triangular(factor.lower, rhs[factor.perm], lower=True)
    z = solve_triangular(factor.lower.T, y, lower=False)
    alpha = np.empty(n)
    alpha[factor.perm] = z
    return alpha


def affine_foot(base: np.ndarray, directions: np.ndarray, x: np.ndarray,
                pivot_rel: Optional[float] = None):
    """
    Least-squares foot of x on the flat base + span(directions).

    Returns (alpha, foot) with Gram(directions) @ alpha = directions @ (x - base)
    and foot = base + directions.T @ alpha.
    """
    if directions.shape[0] == 0:
        return np.zeros(0), np.array(base, dtype=float)
    rhs = directions @ (x - base)
    alpha = solve_spd(gram_matrix(directions), rhs, pivot_rel)
    return alpha, base + directions.T @ alpha


def affine_rank(points: Sequence, pivot_rel: Optional[float] = None) -> int:
    """Dimension of the affine hull of the points"""
    pts = points if isinstance(points, np.ndarray) else as_points(points)
    if pts.shape[0] == 1:
        return 0
    diffs = pts[1:] - pts[0]
    return pivoted_cholesky(gram_matrix(diffs), pivot_rel).rank


def is_affinely_independent(points: Sequence, pivot_rel: Optional[float] = None) -> bool:
    """True iff the differences from points[0] are linearly independent"""
    pts = points if isinstance(points, np.ndarray) else as_points(points)
    if pts.shape[0] - 1 > pts.shape[1]:
        return False
    return affine_rank(pts, pivot_rel) == pts.shape[0] - 1


class NNLSResult(NamedTuple):
    solution: np.ndarray
    residual: float
    iterations: int


def nnls_active_set(a: np.ndarray, b: np.ndarray, maxiter: Optional[int] = None,
                    tol: Optional[float] = None) -> NNLSResult:
    """
    Lawson-Hanson active set solution of min |a u - b| subject to u >= 0.

    Stops once the dual vector a^T (b - a u) is at most tol on every zero
    coordinate, which together with u >= 0 on the passive set is the KKT
    condition. The reported residual is recomputed from the solution.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or b.shape != (a.shape[0],):
        raise DimensionMismatch(f"nnls: matrix {a.shape} does not match right-hand side {b.shape}")
    m, n = a.shape
    maxiter = 3 * n if maxiter is None else maxiter
    if tol is None:
        scale = float(np.abs(a).sum(axis=0).max()) if n else 0.0
        tol = 10.0 * max(m, n) * np.finfo(float).eps * scale * max(1.0, float(np.linalg.norm(b)))

    u = np.zeros(n)
    passive = np.zeros(n, dtype=bool)
    # coordinates whose trial solve came back nonpositive right after entering
    blocked = np.zeros(n, dtype=bool)
    iterations = 0

    while True:
        dual = a.T @ (b - a @ u)
        free = ~passive & ~blocked
        if not free.any():
            break
        j = int(np.argmax(np.where(free, dual, -np.inf)))
        if dual[j] <= tol:
            break

        passive[j] = True
        trial = _passive_solve(a, b, passive)
        iterations += 1
        if trial[j] <= 0.0:
            passive[j] = False
            blocked[j] = True
            continue

        while not np.all(trial[passive] > 0.0):
            iterations += 1
            if iterations > maxiter:
                raise MaxIterationsExceeded(f"nnls did not converge within {maxiter} iterations")
            leaving = np.flatnonzero(passive & (trial <= 0.0))
            ratios = u[leaving] / (u[leaving] - trial[leaving])
            u = u + float(ratios.min()) * (trial - u)
            # the coordinate that set the step leaves exactly
            u[leaving[np.argmin(ratios)]] = 0.0
            passive &= u > 0.0
            u[~passive] = 0.0
            trial = _passive_solve(a, b, passive)
        u = trial
        blocked[:] = False
        if iterations > maxiter:
            raise MaxIterationsExceeded(f"nnls did not converge within {maxiter} iterations")

    residual = float(np.linalg.norm(a @ u - b))
    logger.debug(f"nnls: {n} columns, {np.count_nonzero(passive)} passive, {iterations} iterations")
    return NNLSResult(u, residual, iterations)


def _passive_solve(a: np.ndarray, b: np.ndarray, passive: np.ndarray) -> np.ndarray:
    trial = np.zeros(a.shape[1])
    if passive.any():
        trial[passive] = np.linalg.lstsq(a[:, passive], b, rcond=None)[0]
    return trial
