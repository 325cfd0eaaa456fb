from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from multireg.ring import Polynomial, SpaceShape

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

P = 32003


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def var(shape: SpaceShape, i: int, j: int, p: int = P) -> Polynomial:
    return Polynomial.variable(shape.var(i, j), shape.nvars, p)


_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def record_acceptance():
    """Store one summary line per acceptance criterion."""

    def record(number: int, title: str, ok: bool, detail: str = ""):
        status = "PASS" if ok else "FAIL"
        line = f"[{number:2d}] {status}  {title}"
        if detail:
            line += f"  ({detail})"
        _ACCEPTANCE[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[number])
