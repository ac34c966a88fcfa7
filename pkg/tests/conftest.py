import sys

import pytest

from qcg.grass import GrassSpec
from qcg.qring import quantum_model


@pytest.fixture(scope="session")
def g24():
    return quantum_model(GrassSpec(2, 4))


@pytest.fixture(scope="session")
def part24():
    from qcg.schubert import parse_partition

    spec = GrassSpec(2, 4)
    return lambda text: parse_partition(text, spec)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
