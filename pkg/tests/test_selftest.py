import pytest

from prymtools.config import PrymSettings
from prymtools.errors import DomainError, NonGenericTargetError
from prymtools.prym.abel import FiberSolver
from prymtools.selftest.checks import (
    BaseCheck,
    DoubleCoverOneCheck,
    DumbbellVolumeCheck,
    ExampleBigCheck,
    GlobalDegreeSuiteCheck,
    HarmonicitySuiteCheck,
    InvarianceSuiteCheck,
    IrregularFiberCheck,
    ZetaSuiteCheck,
)
from prymtools.selftest.runner import SelfTestRunner
from prymtools.selftest.suite import random_cover, random_covers
import numpy as np


@pytest.mark.parametrize("check", [DoubleCoverOneCheck, DumbbellVolumeCheck, ExampleBigCheck, IrregularFiberCheck])
def test_fixture_checks(check):
    result = check(seed=0).run()
    assert result.passed, result.as_dict()


@pytest.mark.parametrize(
    "check", [ZetaSuiteCheck, HarmonicitySuiteCheck, GlobalDegreeSuiteCheck, InvarianceSuiteCheck]
)
def test_suites_with_few_cases(check):
    result = check(seed=1, cases=2).run()
    assert result.passed, result.as_dict()


class Broken(BaseCheck):
    name = "broken"

    def evaluate(self):
        raise DomainError("nothing to see")


def test_errors_fail_the_check():
    result = Broken().run()
    assert not result.passed
    assert result.error == "domain: nothing to see"


def test_runner_keeps_check_order():
    settings = PrymSettings(seed=2, cases=1, workers=2)
    report = SelfTestRunner(settings, checks=(DoubleCoverOneCheck, Broken)).run()
    assert [r.name for r in report.results] == ["doublecover1", "broken"]
    assert not report.passed
    assert report.as_dict()["seed"] == 2


def test_random_covers_are_seeded():
    first = random_covers(seed=9, count=3)
    second = random_covers(seed=9, count=3)
    assert [c.base for c in first] == [c.base for c in second]
    assert [c.flips for c in first] == [c.flips for c in second]


def test_random_cover_shape():
    cov = random_cover(np.random.default_rng(4), max_vertices=4, max_genus=3, min_genus=2)
    assert 2 <= cov.genus <= 3
    assert cov.flips


def test_irregular_fiber_check_sees_the_whole_fiber():
    result = IrregularFiberCheck().run()
    assert result.passed
    fiber = result.details["fiber"]
    assert sorted(point.local_degree for point in fiber) == [1, 1, 2]


def test_non_generic_irregular_target_fails(monkeypatch):
    def boundary(self, target):
        raise NonGenericTargetError()

    monkeypatch.setattr(FiberSolver, "fiber", boundary)
    result = IrregularFiberCheck().run()
    assert not result.passed
    assert result.details["fiber"].startswith("non-generic")
