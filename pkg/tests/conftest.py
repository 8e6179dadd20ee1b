import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from partialsp.core import unit_setting

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "repo", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def s3():
    return unit_setting(3)


@pytest.fixture
def s4():
    return unit_setting(4)


@pytest.fixture
def ivan_path():
    return FIXTURES / "ivan.json"


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[key])
