import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, List, Optional, Tuple

from visicone.config import CLI_DEFAULTS
from visicone.errors import VisiconeError
from visicone.suites.instances import instance_rng

logger = logging.getLogger(__name__)


class SkipInstance(Exception):
    """Raised by a check whose random instance does not meet the suite's preconditions"""


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ''


@dataclass
class SuiteReport:
    name: str
    results: List[CheckResult] = field(default_factory=list)
    skipped: int = 0
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> List[CheckResult]:
        return [r for r in self.results if not r.passed]

    def summary(self) -> str:
        status = 'PASS' if self.passed else 'FAIL'
        ok = len(self.results) - len(self.failures)
        return (f"[{status}] {self.name}: {ok}/{len(self.results)} checks passed, "
                f"{self.skipped} skipped ({self.elapsed:.2f}s)")


class PropertySuite:
    """Base class for property suites run by `verify`"""

    name = 'property'
    description = ''

    def __init__(self, instances: Optional[int] = None, seed: Optional[int] = None):
        self.instances = CLI_DEFAULTS['instances'] if instances is None else instances
        self.seed = CLI_DEFAULTS['seed'] if seed is None else seed

    def cases(self) -> Iterator[Tuple[str, Callable[[], Optional[str]]]]:
        """(case name, check) pairs; a check returns None on success or a failure detail"""
        for index in range(self.instances):
            rng = instance_rng(self.seed, index)
            yield f"instance {index}", lambda index=index, rng=rng: self.check_instance(index, rng)

    def check_instance(self, index, rng) -> Optional[str]:
        raise NotImplementedError

    def run(self) -> SuiteReport:
        logger.info(f"Running suite {self.name} ({self.instances} instances, seed {self.seed})")
        report = SuiteReport(self.name)
        start = time.perf_counter()
        for case_name, check in self.cases():
            try:
                detail = check()
            except SkipInstance as e:
                logger.debug(f"{self.name} {case_name} skipped: {e}")
                report.skipped += 1
                continue
            except VisiconeError as e:
                detail = f"{type(e).__name__}: {e}"
            if detail is None:
                report.results.append(CheckResult(case_name, True))
            else:
                logger.warning(f"{self.name} {case_name} failed: {detail}")
                report.results.append(CheckResult(case_name, False, detail))
        report.elapsed = time.perf_counter() - start
        logger.info(report.summary())
        return report


class FixedChecksSuite(PropertySuite):
    """Suite made of named deterministic checks instead of random instances"""

    def checks(self):
        raise NotImplementedError

    def cases(self):
        for name, check in self.checks():
            yield name, check


def run_suites(suites: List[PropertySuite], workers: int = 1) -> List[SuiteReport]:
    """Run the suites, concurrently when workers > 1; reports keep the suite order"""
    if workers <= 1:
        return [suite.run() for suite in suites]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda suite: suite.run(), suites))
