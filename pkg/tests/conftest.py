import numpy as np
import pytest

from qwolct.grid import GridSpec, QField

# (criterion, verdict, summary) lines collected by the acceptance module
ACCEPTANCE_LINES: list[tuple[int, bool, str]] = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def grid32():
    return GridSpec.symmetric(32, 0.5)


@pytest.fixture
def smooth(grid32, rng):
    t1, t2 = grid32.coords()
    env = np.exp(-(t1**2 + t2**2) / 6.0)[..., None]
    return QField(grid32, rng.standard_normal(grid32.shape + (4,)) * env)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for num, ok, text in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {text}")
