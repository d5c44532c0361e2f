from __future__ import annotations

import concurrent.futures
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

from loguru import logger

from prymtools.config import PrymSettings
from prymtools.selftest.checks import CHECKS, BaseCheck, CheckResult


@dataclass(frozen=True)
class SelfTestReport:
    seed: int
    cases: int
    results: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    def as_dict(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "cases": self.cases,
            "checks": [result.as_dict() for result in self.results],
            "passed": self.passed,
        }


class SelfTestRunner:
    """
    Runs the fixture checks and the randomized suites.

    Attributes:
        settings: seed, case count and worker count for the run.
        checks: the check instances, run in this order.
    """

    def __init__(self, settings: PrymSettings, checks: Sequence[type[BaseCheck]] = CHECKS) -> None:
        self.settings = settings
        self.checks = [
            check(seed=settings.seed, cases=settings.cases, max_path_length=settings.max_path_length)
            for check in checks
        ]

    def run(self) -> SelfTestReport:
        """
        Run every check on a thread pool and merge the results in check order.

        Returns:
            The report with one result per check.
        """
        logger.info(f"Begin selftest ... seed={self.settings.seed} cases={self.settings.cases}")
        with concurrent.futures.ThreadPoolExecutor(max_workers=self.settings.workers) as executor:
            it = executor.map(lambda check: check.run(), self.checks)
            results = tuple(it)

        logger.info("Check results")
        logger.info({result.name: result.passed for result in results})
        report = SelfTestReport(self.settings.seed, self.settings.cases, results)
        if not report.passed:
            logger.error("Selftest failed")
        return report
