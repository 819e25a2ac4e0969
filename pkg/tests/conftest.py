import math
import sys

import numpy as np
import pytest
from hypothesis import settings

from relcert import OrthonormalBasis, SymmetricOperator

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture
def t02():
    """H = diag(1, 3) and U spanned by (cos 0.2, sin 0.2)."""
    t = 0.2
    return SymmetricOperator.diag([1.0, 3.0]), OrthonormalBasis([[math.cos(t)], [math.sin(t)]])


@pytest.fixture
def invariant3():
    return SymmetricOperator.diag([-1.0, 1.0, 2.0]), OrthonormalBasis.standard(3, [1, 2])


@pytest.fixture
def flip2():
    return SymmetricOperator.diag([-1.0, 1.0]), OrthonormalBasis(np.array([[1.0], [1.0]]) / math.sqrt(2))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.line(number, *mod.RESULTS[number]))
