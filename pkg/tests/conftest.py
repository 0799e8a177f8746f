import warnings

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("casimir", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("casimir")

ACCEPTANCE_LINES = []


@pytest.fixture(autouse=True)
def _no_runtime_warnings():
    # numerical warnings inside the engines would hide silent precision loss
    with warnings.catch_warnings():
        warnings.simplefilter("error", RuntimeWarning)
        yield


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
