import numpy as np
import pytest

from sigma_forge.catalog import build
from sigma_forge.subgroups import generated


@pytest.fixture(scope="session")
def s3():
    return build("S(3)")


def element(G, images):
    return int(G.lookup(np.array([images]))[0])


def sub(G, *images):
    """Subgroup of G generated by the given permutation image lists."""
    return generated(G, [element(G, im) for im in images])


# one line per acceptance criterion, shown in the terminal summary even under capture
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
