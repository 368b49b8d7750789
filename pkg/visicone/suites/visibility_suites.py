import logging

import numpy as np

from visicone.bodies import barycentric_coords
from visicone.config import TOLERANCES
from visicone.projection import min_norm_oracle
from visicone.suites.base_suite import PropertySuite, SkipInstance
from visicone.suites.instances import (
    hull_distance,
    hull_sample,
    off_flat_point,
    outside_point,
    query_point,
    random_flat,
    random_polytope,
    random_simplex,
)
from visicone.visibility import (
    argmax_on_segment,
    is_visible,
    lambda_max,
    member_by_cone_intersection,
    raycast_visible,
    sample_visible,
    separate_segment,
)

logger = logging.getLogger(__name__)


def _candidate(rng, p, x):
    """A hull sample, or with probability one half its ray-cast visible point"""
    y = hull_sample(rng, p.vertices)
    if rng.random() < 0.5 and not p.contains(x):
        return raycast_visible(p, x, y)
    return y


class ConeVisibilitySuite(PropertySuite):
    name = 'cone-visibility-agreement'
    description = 'lambda-scan visibility agrees with translated-cone non-membership'
    triples = 10

    def check_instance(self, index, rng):
        p = random_polytope(rng)
        for k in range(self.triples):
            x = query_point(rng, p.vertices)
            v = _candidate(rng, p, x)
            cert = is_visible(p, x, v)
            if cert.visible == cert.in_cone:
                return f"triple {k}: visible={cert.visible} but in_cone={cert.in_cone}"
        return None


class ConeIntersectionSuite(PropertySuite):
    name = 'cone-intersection-membership'
    description = 'C equals the intersection of its translated vertex cones'
    points = 20
    boundary_band = (1e-10, 1e-6)

    def check_instance(self, index, rng):
        p = random_polytope(rng)
        lo, hi = self.boundary_band
        checked = 0
        while checked < self.points:
            x = rng.uniform(-1.5, 1.5, size=p.dim)
            dist = hull_distance(p.vertices, x)
            if lo < dist < hi:
                continue
            checked += 1
            by_cones = member_by_cone_intersection(p, x)
            direct = p.contains(x, 1e-8)
            if by_cones != direct:
                return f"point at distance {dist:.3e}: cones say {by_cones}, membership says {direct}"
        return None


class TranslationInvarianceSuite(PropertySuite):
    name = 'translation-invariance'
    description = 'visibility verdicts and lambda* survive a common translation'

    def check_instance(self, index, rng):
        p = random_polytope(rng)
        x = query_point(rng, p.vertices)
        v = _candidate(rng, p, x)
        t = rng.uniform(-1.0, 1.0, size=p.dim)
        before = is_visible(p, x, v)
        after = is_visible(p.translate(t), x + t, v + t)
        if before.visible != after.visible:
            return f"verdict changed under translation ({before.visible} -> {after.visible})"
        drift = abs(before.lambda_star - after.lambda_star)
        if drift > 1e-9:
            return f"lambda* moved by {drift:.3e}"
        return None


class SegmentSeparationSuite(PropertySuite):
    name = 'segment-separation'
    description = 'segments toward a visible point separate, with the functional largest at y'

    def check_instance(self, index, rng):
        p = random_polytope(rng)
        x = outside_point(rng, p.vertices)
        v = raycast_visible(p, x, hull_sample(rng, p.vertices))
        y = x + rng.uniform(0.1, 0.9) * (v - x)
        if hull_distance(p.vertices, y) ** 2 <= 10 * TOLERANCES['separation_gap']:
            raise SkipInstance("y is too close to the body for a certified gap")
        cert = separate_segment(p, x, y)
        if cert.gap <= 0:
            return f"nonpositive gap {cert.gap:.3e}"
        if argmax_on_segment(cert, x, y) == 'x':
            return "separating functional is largest at x"
        return None


class RaycastBoundarySuite(PropertySuite):
    name = 'raycast-boundary'
    description = 'ray-cast points are visible members at the edge of the feasible ray'
    step = TOLERANCES['boundary_probe']

    def check_instance(self, index, rng):
        p = random_polytope(rng)
        x = outside_point(rng, p.vertices)
        y = hull_sample(rng, p.vertices)
        v0 = raycast_visible(p, x, y)
        if not p.contains(v0, 1e-8):
            return "ray-cast point is not a member"
        cert = is_visible(p, x, v0)
        if not cert.visible:
            return f"ray-cast point blocked with lambda* {cert.lambda_star:.3e}"
        lam0 = lambda_max(p, x, y)
        beyond = lam0 + self.step
        if p.contains(beyond * x + (1.0 - beyond) * y):
            return f"membership does not flip within {self.step:.0e} of lambda0"

        first = sample_visible(p, x, 4, index)
        second = sample_visible(p, x, 4, index)
        if not all(np.array_equal(a, b) for a, b in zip(first, second)):
            return "sample_visible is not deterministic for a fixed seed"
        return None


class VisibleDistanceSuite(PropertySuite):
    name = 'visible-distance'
    description = 'no sampled visible point is nearer than the projection'
    samples = 10

    def check_instance(self, index, rng):
        p = random_polytope(rng)
        x = outside_point(rng, p.vertices)
        nearest = min_norm_oracle(p, x)
        for v in sample_visible(p, x, self.samples, index):
            dist = float(np.linalg.norm(x - v))
            if dist < nearest.distance - 1e-9:
                return f"visible point at {dist:.9f} is nearer than d(x, C) = {nearest.distance:.9f}"
        if not is_visible(p, x, nearest.point).visible:
            return "nearest point is not visible"
        return None


class AffineFlatSuite(PropertySuite):
    name = 'affine-flat-visibility'
    description = 'every point of an affine flat is visible from outside'
    samples = 20

    def check_instance(self, index, rng):
        flat = random_flat(rng)
        x = off_flat_point(rng, flat)
        for k, y in enumerate(flat.sample(rng, self.samples)):
            lam0 = lambda_max(flat, x, y)
            if lam0 > TOLERANCES['visibility']:
                return f"sample {k}: lambda0 {lam0:.3e}"
        return None


class ConvexCombinationSuite(PropertySuite):
    name = 'convex-combination-visibility'
    description = 'points of a face combining to a visible point are visible'

    def check_instance(self, index, rng):
        s = random_simplex(rng, full=True)
        x = outside_point(rng, s.vertices)
        x0 = raycast_visible(s, x, hull_sample(rng, s.vertices))
        # the ray stops at the tolerance-inflated boundary, so snap x0 onto its face
        weights = np.clip(barycentric_coords(s, x0).weights, 0.0, None)
        weights = weights / weights.sum()
        x0 = weights @ s.vertices
        usable = [i for i, w in enumerate(weights) if 0.05 < w < 0.95]
        if not usable:
            raise SkipInstance("visible point sits too close to a vertex of its face")
        j = int(rng.choice(usable))
        w = float(weights[j])
        # x0 = w e_j + (1 - w) rest, with rest in the face carrying x0
        others = weights.copy()
        others[j] = 0.0
        rest = (others / (1.0 - w)) @ s.vertices
        for label, c in (('vertex', s.vertices[j]), ('complement', rest)):
            cert = is_visible(s, x, c)
            if not cert.visible:
                return f"{label} point blocked with lambda* {cert.lambda_star:.3e}"
        return None
