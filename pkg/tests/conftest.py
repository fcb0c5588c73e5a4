import sys
from pathlib import Path

import pytest
from hypothesis import settings

from weilkit import GF, QQ, EtaleAlgebra, AffineScheme

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=40, deadline=None, derandomize=True)
settings.load_profile("default")

CORPUS = Path(__file__).resolve().parents[1] / "corpus"


@pytest.fixture
def F4():
    return EtaleAlgebra(GF(2), [1, 1, 1])


@pytest.fixture
def F25():
    return EtaleAlgebra(GF(5), [3, 0, 1])


@pytest.fixture
def Qi():
    return EtaleAlgebra(QQ, [1, 0, 1])


@pytest.fixture
def Gm(F4):
    return AffineScheme(F4, ["x", "y"], ["x*y - 1"])


@pytest.fixture
def circle(F25):
    return AffineScheme(F25, ["x", "y"], ["x^2 + y^2 - 1"])


@pytest.fixture
def circle_bundle(circle):
    from weilkit import make_bundle
    return make_bundle(circle, [["3 + 3*x", "3*y"], ["3*y", "3 - 3*x"]], 1)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
