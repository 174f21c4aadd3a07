import numpy as np
import pytest

from ars3d.ars import Distribution, make_ars
from ars3d.group import Theta
from ars3d.scenario import bundled
from ars3d.symmetry import LinearField


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def ex43():
    return bundled("example_4_3").build()


@pytest.fixture(scope="session")
def ex44():
    return bundled("example_4_4").build()


@pytest.fixture(scope="session")
def rank_one():
    return bundled("diagonal_rank_one").build()


@pytest.fixture(scope="session")
def rotation_linear():
    return bundled("rotation_linear").build()


def build(theta, xi, A, rows, gram=None):
    return make_ars(theta, LinearField(theta, xi, A), Distribution.from_rows(rows, gram))


@pytest.fixture
def make():
    return build


@pytest.fixture
def rot():
    return Theta.complex(0.0)


_VERDICTS = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for the acceptance summary."""
    def record(name, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} {name}: {detail}"
        _VERDICTS.append(line)
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)
