from __future__ import annotations

import numpy as np
import pytest

from rsrepair.field import build_tower


@pytest.fixture(scope="session")
def gf8():
    return build_tower(2, 1, 3)


@pytest.fixture(scope="session")
def gf4():
    return build_tower(2, 1, 2)


@pytest.fixture(scope="session")
def gf16():
    return build_tower(2, 1, 4)


@pytest.fixture(scope="session")
def gf27():
    return build_tower(3, 1, 3)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_CRITERIA: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Record the one-line verdict of an acceptance criterion for the end-of-run summary."""

    def record(number: int, ok: bool, detail: str, seconds: float) -> str:
        line = f"CRITERION {number} {'PASS' if ok else 'FAIL'}  ({seconds:.1f}s)  {detail}"
        _CRITERIA[number] = line
        print(line)
        return line

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[number])
