import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from overrelax import BoundaryClosure, LatticeState, ProblemSetup, SchemeConfig, linear_flux  # noqa: E402

ACCEPTANCE_LINES = []


def record(criterion: str, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def periodic():
    return BoundaryClosure.periodic()


@pytest.fixture
def flux1():
    return linear_flux(1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def make_state(w, z, dt=0.0):
    return LatticeState(w=np.asarray(w, float), z=np.asarray(z, float), quarters=0, quarter_dt=dt / 4)


@pytest.fixture
def fig2():
    return ProblemSetup()


@pytest.fixture
def fig1():
    return ProblemSetup(c=1.0, A=80.0, alpha=0.25, beta=0.75, B=0.5, t_max=0.33)


@pytest.fixture
def cfg7():
    return SchemeConfig.from_exponent(7)
