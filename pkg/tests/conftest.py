import pytest

from zvseq.seqgen import ElGamalParams, elgamal_sequence

_criterion_lines: list[str] = []


@pytest.fixture(scope="session")
def elgamal_13_2_2():
    return elgamal_sequence(ElGamalParams(13, 2, 2))


@pytest.fixture
def report_criterion():
    """Collects acceptance lines so they show up in the terminal summary."""
    return _criterion_lines.append


def pytest_terminal_summary(terminalreporter):
    if _criterion_lines:
        terminalreporter.section("acceptance criteria")
        for line in _criterion_lines:
            terminalreporter.write_line(line)
