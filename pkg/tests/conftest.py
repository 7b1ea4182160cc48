import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def four_rows():
    """Rows {(1,1),(1,1),(1,0),(0,0)}."""
    return np.array([[1, 1], [1, 1], [1, 0], [0, 0]], dtype=np.uint8)


@pytest.fixture
def product_rows():
    """Each of the four 2-bit patterns once: an exactly factorising joint law."""
    return np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=np.uint8)


_VERDICTS = []


@pytest.fixture
def verdict(capsys):
    """Record and print a one-line PASS/FAIL result for an acceptance criterion."""
    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        _VERDICTS.append(line)
        with capsys.disabled():
            print("\n" + line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_VERDICTS, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
