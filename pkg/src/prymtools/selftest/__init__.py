from prymtools.selftest.checks import CHECKS, BaseCheck, CheckResult
from prymtools.selftest.fixtures import FIXTURE_NAMES, load_fixture
from prymtools.selftest.runner import SelfTestReport, SelfTestRunner

__all__ = [
    "CHECKS",
    "FIXTURE_NAMES",
    "BaseCheck",
    "CheckResult",
    "SelfTestReport",
    "SelfTestRunner",
    "load_fixture",
]
