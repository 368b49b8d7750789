import logging

import numpy as np

from visicone.bodies import AffineFlat, Polytope, extreme_points
from visicone.config import TOLERANCES
from visicone.oracle import grid_error_bound, grid_project, lattice_size
from visicone.projection import min_norm_oracle, project_affine, project_polytope, project_simplex
from visicone.suites.base_suite import PropertySuite
from visicone.suites.instances import outside_point, random_polytope, random_simplex
from visicone.visibility import is_visible

logger = logging.getLogger(__name__)

# Largest lattice scanned per instance; the resolution drops below 300 to fit
GRID_POINTS = 200000
GRID_RESOLUTION = 300


def suite_resolution(m: int, cap: int = GRID_POINTS) -> int:
    resolution = GRID_RESOLUTION
    while resolution >= 2 and lattice_size(m, resolution) > cap:
        resolution -= 1
    return resolution


class ProjectionOracleSuite(PropertySuite):
    name = 'projection-matches-oracle'
    description = 'facet descent agrees with the NNLS reference and the lattice scan'

    def check_instance(self, index, rng):
        s = random_simplex(rng)
        x = rng.uniform(-2.0, 2.0, size=s.dim)
        exact = project_simplex(s, x)
        ref = min_norm_oracle(Polytope(s.vertices), x)
        gap = float(np.linalg.norm(exact.point - ref.point))
        if gap > 1e-6:
            return f"descent and NNLS points differ by {gap:.3e}"

        resolution = suite_resolution(s.vertices.shape[0])
        if resolution < 2:
            return None
        grid = grid_project(s, x, resolution)
        bound = grid_error_bound(s.vertices, resolution)
        if grid.distance < exact.distance - 1e-9:
            return f"lattice point is closer than the projection ({grid.distance:.9f} < {exact.distance:.9f})"
        if grid.distance > exact.distance + bound + 1e-9:
            return f"lattice distance {grid.distance:.6f} exceeds {exact.distance:.6f} + {bound:.3e}"
        return None


class VariationalInequalitySuite(PropertySuite):
    name = 'variational-inequality'
    description = '<x - p, e_i - p> <= 0 for every vertex e_i'

    def check_instance(self, index, rng):
        s = random_simplex(rng)
        x = rng.uniform(-2.0, 2.0, size=s.dim)
        p = project_simplex(s, x).point
        limit = 1e-8 * (1.0 + float(x @ x))
        worst = float(np.max((s.vertices - p) @ (x - p)))
        if worst > limit:
            return f"variational inequality violated by {worst:.3e} (limit {limit:.3e})"
        return None


class ReductionIdentitySuite(PropertySuite):
    name = 'reduction-identity'
    description = 'd^2(x, C) = d^2(x, aff C) + d^2(P_aff(x), C)'

    def check_instance(self, index, rng):
        s = random_simplex(rng)
        x = rng.uniform(-2.0, 2.0, size=s.dim)
        hull = AffineFlat(s.vertices[0], s.edges)
        to_flat = project_affine(hull, x)
        d_c = project_simplex(s, x).distance
        d_rest = project_simplex(s, to_flat.point).distance
        defect = abs(d_c ** 2 - to_flat.distance ** 2 - d_rest ** 2)
        if defect > 1e-8 * (1.0 + d_c ** 2):
            return f"Pythagorean defect {defect:.3e}"
        return None


class ProjectionVisibleSuite(PropertySuite):
    name = 'projection-is-visible'
    description = 'the nearest point is visible from x'

    def check_instance(self, index, rng):
        s = random_simplex(rng)
        x = outside_point(rng, s.vertices)
        p = project_simplex(s, x).point
        cert = is_visible(s, x, p)
        if not cert.visible:
            return f"projection blocked with lambda* {cert.lambda_star:.3e}"
        return None


class VisibleSupportSuite(PropertySuite):
    name = 'visible-support'
    description = 'simplex vertices carrying projection weight are visible'

    def check_instance(self, index, rng):
        s = random_simplex(rng)
        x = outside_point(rng, s.vertices)
        result = project_simplex(s, x)
        for i in result.support_indices(TOLERANCES['support_weight']):
            cert = is_visible(s, x, s.vertices[i])
            if not cert.visible:
                return f"vertex {i} (weight {result.weights[i]:.3e}) blocked, lambda* {cert.lambda_star:.3e}"
        return None


class PolytopeSupportSuite(PropertySuite):
    name = 'polytope-support'
    description = 'projection support has at most d + 1 extreme, visible vertices'

    def check_instance(self, index, rng):
        p = random_polytope(rng, max_d=4, extra=3)
        x = outside_point(rng, p.vertices)
        result = project_polytope(p, x)
        support = result.support_indices(TOLERANCES['support_weight'])
        if len(support) > p.dim + 1:
            return f"support of {len(support)} vertices in dimension {p.dim}"
        reduced = min_norm_oracle(p, x).support_indices(0.0)
        if len(reduced) > p.dim + 1:
            return f"reduced NNLS support of {len(reduced)} vertices in dimension {p.dim}"
        extreme = set(extreme_points(p))
        for i in support:
            if i not in extreme:
                return f"support vertex {i} is not extreme"
            if not is_visible(p, x, p.vertices[i]).visible:
                return f"support vertex {i} is blocked"
        return None
