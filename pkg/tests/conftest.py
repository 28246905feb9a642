from itertools import combinations

import pytest
from hypothesis import strategies as st

from coxsplit.coxeter import CoxeterSystem


def cox(matrix, labels=None):
    return CoxeterSystem.from_matrix(matrix, labels)


def path(*labels):
    """Linear diagram with the given consecutive edge labels."""
    n = len(labels) + 1
    m = [[1 if i == j else 2 for j in range(n)] for i in range(n)]
    for i, lab in enumerate(labels):
        m[i][i + 1] = m[i + 1][i] = lab
    return cox(m)


def dihedral(m):
    return cox([[1, m], [m, 1]], ["s", "t"])


def universal(n):
    return cox([[1 if i == j else 0 for j in range(n)] for i in range(n)])


SYSTEMS = {
    "A1": lambda: cox([[1]]),
    "A2": lambda: dihedral(3),
    "A3": lambda: path(3, 3),
    "B3": lambda: path(4, 3),
    "H3": lambda: path(5, 3),
    "F4": lambda: path(3, 4, 3),
    "A2~": lambda: cox([[1, 3, 3], [3, 1, 3], [3, 3, 1]]),
    "B2~": lambda: path(4, 4),
    "Dinf": lambda: dihedral(0),
    "W3": lambda: universal(3),
}


# off-diagonal orders; 0 encodes infinity
ENTRY = st.sampled_from([2, 3, 4, 5, 6, 0])


@st.composite
def systems(draw, max_rank=5):
    n = draw(st.integers(1, max_rank))
    m = [[1] * n for _ in range(n)]
    for i, j in combinations(range(n), 2):
        m[i][j] = m[j][i] = draw(ENTRY)
    return cox(m)


@pytest.fixture
def system():
    return lambda name: SYSTEMS[name]()


# -- acceptance summary ------------------------------------------------------

_acceptance = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n, title): acceptance criterion n")


def pytest_runtest_logreport(report):
    crit = getattr(report, "_acceptance", None)
    if crit is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        prev = _acceptance.get(crit, "passed")
        _acceptance[crit] = report.outcome if prev == "passed" else prev


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("acceptance")
    if marker is not None:
        outcome.get_result()._acceptance = tuple(marker.args)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for (n, title), outcome in sorted(_acceptance.items()):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{verdict}] criterion {n}: {title}")
