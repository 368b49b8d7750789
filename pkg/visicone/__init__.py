"""Visible points and best approximation for convex bodies in Euclidean space"""

from visicone.bodies import AffineFlat, Ball, DiskCone, Polytope, Segment, Simplex
from visicone.projection import ProjectionResult, min_norm_oracle, project, project_polytope, project_simplex
from visicone.visibility import (
    SeparationCertificate,
    VisibilityCertificate,
    in_translated_cone,
    is_visible,
    lambda_max,
    member_by_cone_intersection,
    raycast_visible,
    sample_visible,
    separate_segment,
)

__version__ = '0.1.0'

__all__ = [
    'AffineFlat',
    'Ball',
    'DiskCone',
    'Polytope',
    'ProjectionResult',
    'Segment',
    'SeparationCertificate',
    'Simplex',
    'VisibilityCertificate',
    'in_translated_cone',
    'is_visible',
    'lambda_max',
    'member_by_cone_intersection',
    'min_norm_oracle',
    'project',
    'project_polytope',
    'project_simplex',
    'raycast_visible',
    'sample_visible',
    'separate_segment',
]
