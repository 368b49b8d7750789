"""
Visible points of a convex body seen from an external point.

A point v of C is visible from x when the half-open segment [x, v[ misses C,
equivalently when lambda* = max{lam in [0,1] : lam x + (1 - lam) v in C} is 0,
equivalently when x lies outside the translated cone cone(C - v) + v.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from visicone.bodies import ConvexBody, Polytope, Simplex, Segment, extreme_points
from visicone.config import BUDGETS, TOLERANCES
from visicone.errors import (
    CertificateInvalid,
    InputError,
    NotDisjoint,
    UnsupportedBody,
    VNotInBody,
)
from visicone.projection import min_norm_oracle
from visicone.vectorspace import nnls_active_set

logger = logging.getLogger(__name__)

# Candidate membership is checked more loosely than the bisection queries
CANDIDATE_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class VisibilityCertificate:
    visible: bool
    lambda_star: float
    blocker: Optional[np.ndarray] = None
    method: str = 'lambda-scan'
    in_cone: Optional[bool] = None

    def to_dict(self):
        return {
            'visible': self.visible,
            'lambda_star': self.lambda_star,
            'blocker': None if self.blocker is None else self.blocker.tolist(),
            'method': self.method,
            'in_cone': self.in_cone,
        }


@dataclass(frozen=True, eq=False)
class SeparationCertificate:
    """Functional `normal` with sup over the segment < offset < inf over the body"""
    normal: np.ndarray
    offset: float
    gap: float
    segment_point: np.ndarray = field(repr=False, default=None)
    body_point: np.ndarray = field(repr=False, default=None)

    def to_dict(self):
        return {
            'normal': self.normal.tolist(),
            'offset': self.offset,
            'gap': self.gap,
            'segment_point': self.segment_point.tolist(),
            'body_point': self.body_point.tolist(),
        }


def _as_polytope(body) -> Polytope:
    if isinstance(body, Polytope):
        return body
    if isinstance(body, (Simplex, Segment)):
        return Polytope(body.vertices)
    raise UnsupportedBody(f"{body.tag} is not a polytope")


def _require_member(body: ConvexBody, v: np.ndarray, name: str = 'v'):
    if not body.contains(v, CANDIDATE_TOL):
        raise VNotInBody(f"{name} does not belong to the {body.tag}")


def lambda_max(body: ConvexBody, x, v, tol: Optional[float] = None,
               steps: Optional[int] = None) -> float:
    """
    Largest lam in [0, 1] with lam x + (1 - lam) v in the body.

    Bodies with a closed-form chord answer exactly; the rest are bisected.
    The feasible set is an interval containing 0 because v is in the body.
    """
    x = body._point(x, 'x')
    v = body._point(v, 'v')
    tol = TOLERANCES['membership'] if tol is None else tol
    steps = BUDGETS['bisection_steps'] if steps is None else steps
    _require_member(body, v)

    if hasattr(body, 'chord_lambda'):
        return float(body.chord_lambda(x, v))
    if body.contains(x, tol):
        return 1.0
    lo, hi = 0.0, 1.0
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if body.contains(mid * x + (1.0 - mid) * v, tol):
            lo = mid
        else:
            hi = mid
    return lo


def in_translated_cone(p, v, x, rel_tol: Optional[float] = None) -> bool:
    """True iff x - v lies in the conic hull of {v_i - v}"""
    p = _as_polytope(p)
    x = p._point(x, 'x')
    v = p._point(v, 'v')
    rel_tol = TOLERANCES['cone_rel'] if rel_tol is None else rel_tol
    _require_member(p, v)

    generators = (p.vertices - v).T
    target = x - v
    cap = BUDGETS['nnls_iterations_per_vertex'] * p.vertices.shape[0]
    residual = nnls_active_set(generators, target, maxiter=cap).residual
    return bool(residual <= rel_tol * (1.0 + float(np.linalg.norm(target))))


def is_visible(body: ConvexBody, x, v, vis_tol: Optional[float] = None,
               tol: Optional[float] = None) -> VisibilityCertificate:
    x = body._point(x, 'x')
    v = body._point(v, 'v')
    vis_tol = TOLERANCES['visibility'] if vis_tol is None else vis_tol
    tol = TOLERANCES['membership'] if tol is None else tol
    _require_member(body, v)

    # [x, v[ is empty when the two points coincide
    if np.linalg.norm(x - v) <= tol:
        return VisibilityCertificate(True, 0.0)

    lam = lambda_max(body, x, v, tol)
    visible = lam <= vis_tol
    blocker = None if visible else lam * x + (1.0 - lam) * v

    in_cone = None
    if isinstance(body, Polytope):
        in_cone = in_translated_cone(body, v, x)
        if in_cone == visible:
            logger.warning(
                f"Visibility verdicts disagree: lambda scan says visible={visible} "
                f"(lambda*={lam:.3e}) but translated-cone test says in_cone={in_cone}"
            )
    return VisibilityCertificate(visible, float(lam), blocker, 'lambda-scan', in_cone)


def raycast_visible(body: ConvexBody, x, y, tol: Optional[float] = None) -> np.ndarray:
    """First point of the body met when walking from x toward y"""
    x = body._point(x, 'x')
    y = body._point(y, 'y')
    tol = TOLERANCES['membership'] if tol is None else tol
    _require_member(body, y, 'y')
    if body.contains(x, tol):
        return x
    lam0 = lambda_max(body, x, y, tol)
    return lam0 * x + (1.0 - lam0) * y


def translated_cone_contains(body: ConvexBody, v, x) -> bool:
    """Membership of x in cone(C - v) + v for any body"""
    if isinstance(body, (Polytope, Simplex, Segment)):
        return in_translated_cone(body, v, x)
    x = body._point(x, 'x')
    if body.contains(x):
        return True
    return not is_visible(body, x, v).visible


def member_by_cone_intersection(p, x, extreme_only: bool = False) -> bool:
    """Membership of x in the intersection of the translated cones at the vertices"""
    p = _as_polytope(p)
    x = p._point(x, 'x')
    indices = extreme_points(p) if extreme_only else range(p.vertices.shape[0])
    return all(in_translated_cone(p, p.vertices[i], x) for i in indices)


def sample_visible(body: ConvexBody, x, count: int, seed: int) -> List[np.ndarray]:
    """Ray-cast `count` seeded body points back toward x"""
    if count < 0:
        raise InputError("count must be nonnegative")
    x = body._point(x, 'x')
    if count == 0:
        return []
    rng = np.random.default_rng(seed)
    targets = body.sample(rng, count)
    return [raycast_visible(body, x, y) for y in targets]


def _closest_on_segment(x, y, q):
    edge = y - x
    length_sq = float(edge @ edge)
    if length_sq == 0.0:
        return x
    t = min(max(float((q - x) @ edge) / length_sq, 0.0), 1.0)
    return x + t * edge


def separate_segment(p, x, y, rounds: Optional[int] = None) -> SeparationCertificate:
    """
    Strongly separate [x, y] from the polytope using the closest pair found by
    alternating projections between the two sets.
    """
    p = _as_polytope(p)
    x = p._point(x, 'x')
    y = p._point(y, 'y')
    rounds = BUDGETS['separation_rounds'] if rounds is None else rounds
    if rounds < 1:
        raise InputError(f"separation needs at least one round, got {rounds}")
    stall = TOLERANCES['separation_stall']

    q = min_norm_oracle(p, 0.5 * (x + y)).point
    s = _closest_on_segment(x, y, q)
    gap = float(np.sum((q - s) ** 2))
    for step in range(rounds):
        q = min_norm_oracle(p, s).point
        s = _closest_on_segment(x, y, q)
        new_gap = float(np.sum((q - s) ** 2))
        if gap - new_gap < stall:
            gap = new_gap
            break
        gap = new_gap
    else:
        logger.warning(f"Alternating projections used all {rounds} rounds (gap {gap:.3e})")
    logger.debug(f"Closest pair found after {step + 1} rounds, squared gap {gap:.3e}")

    if gap <= TOLERANCES['separation_gap']:
        raise NotDisjoint(f"segment and polytope are not disjoint (squared gap {gap:.3e})")

    normal = q - s
    offset = float(normal @ s) + 0.5 * gap
    seg_sup = max(float(normal @ x), float(normal @ y))
    body_inf = float(np.min(p.vertices @ normal))
    if not (seg_sup < offset < body_inf):
        raise CertificateInvalid(
            f"separation check failed: sup {seg_sup:.6e}, offset {offset:.6e}, inf {body_inf:.6e}"
        )
    return SeparationCertificate(normal, offset, gap, s, q)


def argmax_on_segment(cert: SeparationCertificate, x, y, rel_tol: float = 1e-12) -> str:
    """Endpoint of [x, y] where the certificate's functional is largest: 'x', 'y' or 'both'"""
    fx = float(cert.normal @ np.asarray(x, dtype=float))
    fy = float(cert.normal @ np.asarray(y, dtype=float))
    if abs(fx - fy) <= rel_tol * (1.0 + abs(fx) + abs(fy)):
        return 'both'
    return 'y' if fy > fx else 'x'
