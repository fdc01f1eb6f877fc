import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hl2lab import make_complete, make_cycle, make_petersen, make_random_regular  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def k4():
    return make_complete(4)


@pytest.fixture(scope="session")
def petersen():
    return make_petersen()


def regular_zoo():
    """Connected regular graphs used for lift-rule and connectivity checks."""
    out = [make_complete(4), make_complete(5), make_cycle(4), make_cycle(5), make_cycle(6), make_petersen()]
    out += [make_random_regular(n, d, s) for n, d, s in [(10, 3, 1), (12, 3, 2), (14, 4, 3), (16, 3, 4), (12, 5, 5)]]
    return out


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
