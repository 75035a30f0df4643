import numpy as np
import pytest

from curlfree.boundary import BoundarySpec
from curlfree.eos import EosSpec
from curlfree.grid import StaggeredGrid
from curlfree.model import Phases


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def ideal_pair():
    return Phases(EosSpec.ideal(1.4), EosSpec.ideal(2.0))


@pytest.fixture
def same_pair():
    return Phases(EosSpec.ideal(1.4), EosSpec.ideal(1.4))


@pytest.fixture
def unit_grid():
    return StaggeredGrid(16, 12, 1.0, 0.75)


@pytest.fixture
def periodic():
    return BoundarySpec.from_axes("periodic", "periodic")


_ACCEPTANCE = []


@pytest.fixture
def report(capsys):
    """Record and print one PASS/FAIL line for an acceptance criterion."""
    def _report(number: int, title: str, ok: bool, detail: str) -> bool:
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
        _ACCEPTANCE.append(line)
        with capsys.disabled():
            print("\n" + line)
        return ok
    return _report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE):
            terminalreporter.write_line(line)
