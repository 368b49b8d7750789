from visicone.errors import InputError
from visicone.suites.base_suite import (
    CheckResult,
    FixedChecksSuite,
    PropertySuite,
    SkipInstance,
    SuiteReport,
    run_suites,
)
from visicone.suites.projection_suites import (
    PolytopeSupportSuite,
    ProjectionOracleSuite,
    ProjectionVisibleSuite,
    ReductionIdentitySuite,
    VariationalInequalitySuite,
    VisibleSupportSuite,
)
from visicone.suites.visibility_suites import (
    AffineFlatSuite,
    ConeIntersectionSuite,
    ConeVisibilitySuite,
    ConvexCombinationSuite,
    RaycastBoundarySuite,
    SegmentSeparationSuite,
    TranslationInvarianceSuite,
    VisibleDistanceSuite,
)
from visicone.suites.witness_suites import DiskConeSuite, NonAffineWitnessSuite, TangentConeSuite

# Order in which `verify` runs and reports the suites
ALL_SUITES = [
    DiskConeSuite,
    ProjectionOracleSuite,
    VariationalInequalitySuite,
    ReductionIdentitySuite,
    ProjectionVisibleSuite,
    ConeVisibilitySuite,
    ConeIntersectionSuite,
    TranslationInvarianceSuite,
    SegmentSeparationSuite,
    VisibleSupportSuite,
    ConvexCombinationSuite,
    AffineFlatSuite,
    RaycastBoundarySuite,
    VisibleDistanceSuite,
    PolytopeSupportSuite,
    TangentConeSuite,
    NonAffineWitnessSuite,
]


def build_suites(instances=None, seed=None, names=None):
    """Instantiate the registered suites, optionally restricted to the given names"""
    selected = ALL_SUITES
    if names:
        known = {cls.name: cls for cls in ALL_SUITES}
        unknown = [n for n in names if n not in known]
        if unknown:
            raise InputError(f"unknown suites: {', '.join(unknown)}")
        selected = [known[n] for n in names]
    return [cls(instances=instances, seed=seed) for cls in selected]


__all__ = [
    'ALL_SUITES',
    'CheckResult',
    'FixedChecksSuite',
    'PropertySuite',
    'SkipInstance',
    'SuiteReport',
    'build_suites',
    'run_suites',
]
