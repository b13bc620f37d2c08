import pytest

from qprefix import CodeSet, QVector

from helpers import R


@pytest.fixture
def leaky_pair():
    """psi = (|1> + |01>)/sqrt2, phi = (|10> - |010>)/sqrt2."""
    psi = QVector({"1": R, "01": R})
    phi = QVector({"10": R, "010": -R})
    return psi, phi


@pytest.fixture
def kraft_code(leaky_pair):
    psi, phi = leaky_pair
    return CodeSet((psi, phi, QVector.ket("00")))


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE_LINES

    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
