"""
Deterministic witnesses: the disk cone whose visible set from the origin is
not closed, a ball whose translated cone is not closed, and small
counterexamples showing visibility is neither affine-only nor convex.
"""

import logging

import numpy as np

from visicone.bodies import Ball, DiskCone, Segment, Simplex
from visicone.oracle import scan_lambda
from visicone.suites.base_suite import FixedChecksSuite
from visicone.visibility import (
    is_visible,
    lambda_max,
    sample_visible,
    translated_cone_contains,
)

logger = logging.getLogger(__name__)

ORIGIN3 = np.zeros(3)
BLOCKED_APEX_RAY = np.array([2.0, 0.0, 0.0])


def disk_cone_point(t: float) -> np.ndarray:
    return np.array([2.0, np.sin(t), 1.0 + np.cos(t)])


def _expect(condition: bool, detail: str):
    return None if condition else detail


class DiskConeSuite(FixedChecksSuite):
    name = 'disk-cone'
    description = 'the visible set of the disk cone from the origin is not closed'
    grid = 100
    scan_steps = 10 ** 6

    def checks(self):
        body = DiskCone()
        for k in range(1, self.grid + 1):
            t = k * np.pi / (self.grid + 1)

            def visible_at(t=t):
                cert = is_visible(body, ORIGIN3, disk_cone_point(t))
                return _expect(cert.visible, f"lambda* {cert.lambda_star:.3e}")
            yield f"v(t) visible at t={t:.4f}", visible_at

        def limit_blocked():
            cert = is_visible(body, ORIGIN3, BLOCKED_APEX_RAY)
            return _expect(not cert.visible, "(2,0,0) reported visible")
        yield "(2,0,0) not visible", limit_blocked

        def bisection_half():
            lam = lambda_max(body, ORIGIN3, BLOCKED_APEX_RAY)
            return _expect(abs(lam - 0.5) <= 1e-6, f"lambda_max = {lam:.9f}")
        yield "lambda_max at (2,0,0) is 1/2", bisection_half

        def scan_half():
            lam = scan_lambda(body, ORIGIN3, BLOCKED_APEX_RAY, self.scan_steps)
            return _expect(abs(lam - 0.5) <= 1e-6, f"scan_lambda = {lam:.9f}")
        yield "scan_lambda at (2,0,0) is 1/2", scan_half

        yield "(1.5,0,0) in C", lambda: _expect(body.contains([1.5, 0.0, 0.0]), "not a member")
        yield "(0.5,0,0) not in C", lambda: _expect(not body.contains([0.5, 0.0, 0.0]), "reported a member")

        def sampled():
            points = sample_visible(body, ORIGIN3, 64, 7)
            if len(points) != 64:
                return f"{len(points)} points returned"
            for i, v in enumerate(points):
                if v[0] < 1.0 - 1e-8:
                    return f"point {i} has first coordinate {v[0]:.9f}"
                if not is_visible(body, ORIGIN3, v).visible:
                    return f"point {i} is not visible"
            return None
        yield "64 sampled visible points", sampled


class TangentConeSuite(FixedChecksSuite):
    name = 'tangent-cone-not-closed'
    description = 'the translated cone of a disk at a boundary point is not closed'

    def checks(self):
        disk = Ball(np.array([0.0, 1.0]), 1.0)
        origin = np.zeros(2)
        cases = [
            ((1.0, 0.0), True),
            ((1.0, -0.1), True),
            ((1.0, 0.1), False),
        ]
        for x, expected in cases:
            def verdict(x=x, expected=expected):
                cert = is_visible(disk, np.array(x), origin)
                return _expect(cert.visible == expected, f"visible={cert.visible}, lambda* {cert.lambda_star:.3e}")
            yield f"origin visible from {x}: {expected}", verdict

        yield "(1, 1e-3) in the cone at the origin", \
            lambda: _expect(translated_cone_contains(disk, origin, np.array([1.0, 1e-3])), "not in the cone")
        yield "(1, 0) outside the cone at the origin", \
            lambda: _expect(not translated_cone_contains(disk, origin, np.array([1.0, 0.0])), "in the cone")


class NonAffineWitnessSuite(FixedChecksSuite):
    name = 'non-affine-witnesses'
    description = 'bodies that are not flats hide some of their points'

    def checks(self):
        segment = Segment(np.array([0.0, 0.0]), np.array([1.0, 0.0]))

        def far_endpoint():
            cert = is_visible(segment, np.array([2.0, 0.0]), segment.e0)
            return _expect(not cert.visible, "far endpoint reported visible")
        yield "far endpoint of a segment is hidden from its line", far_endpoint

        triangle = Simplex(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))
        x = np.array([2.0, -0.1])

        def all_vertices():
            hidden = [i for i, e in enumerate(triangle.vertices) if not is_visible(triangle, x, e).visible]
            return _expect(not hidden, f"vertices {hidden} hidden")
        yield "every triangle vertex visible from (2,-0.1)", all_vertices

        def centroid():
            cert = is_visible(triangle, x, triangle.vertices.mean(axis=0))
            return _expect(not cert.visible, "centroid reported visible")
        yield "centroid of visible vertices is hidden", centroid
