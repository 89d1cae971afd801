import numpy as np
import pytest

SIGMA = np.array([13.0, 8.0, 5.0, 3.0, 2.0, 1.0]) / 32.0


@pytest.fixture
def sigma():
    return SIGMA.copy()


@pytest.fixture
def S0():
    return np.diag(SIGMA)


@pytest.fixture
def acceptance_log(request):
    lines = request.config.stash.setdefault(_LOG_KEY, [])
    return lines


_LOG_KEY = pytest.StashKey[list]()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LOG_KEY, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(lines):
        terminalreporter.write_line(line)
