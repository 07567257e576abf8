from pathlib import Path

import numpy as np
import pytest

from promisetrust import TrustEdge, PromiseBody, build_matrix

FIXTURES = Path(__file__).parent / "fixtures"

# (truster, trustee, value) for promise type "pay"
COMMUNITY_EDGES = [
    ("1", "6", 0.2), ("2", "6", 0.3), ("3", "7", 0.1), ("4", "7", 0.1),
    ("5", "7", 0.1), ("6", "7", 0.6), ("7", "6", 0.5), ("6", "8", 0.8),
    ("8", "6", 0.2), ("7", "8", 0.8), ("8", "7", 0.3),
]
ROSTER8 = [str(i) for i in range(1, 9)]

S8 = [0.21, 0.31, 0.10, 0.10, 0.10, 1.00, 0.94, 0.50]
W8 = [0, 0, 0, 0, 0, 0.55, 0.65, 1.00]
S7 = [0.37, 0.55, 0.17, 0.17, 0.17, 1.00, 0.92]
W7 = [0, 0, 0, 0, 0, 0.91, 1.00]

# the printed 8x8 trust matrix, rows are trusters
PRINTED_T8 = np.array([
    [0, 0, 0, 0, 0, 0.2, 0, 0],
    [0, 0, 0, 0, 0, 0.3, 0, 0],
    [0, 0, 0, 0, 0, 0, 0.1, 0],
    [0, 0, 0, 0, 0, 0, 0.1, 0],
    [0, 0, 0, 0, 0, 0, 0.1, 0],
    [0, 0, 0, 0, 0, 0, 0.6, 0.8],
    [0, 0, 0, 0, 0, 0.5, 0, 0.8],
    [0, 0, 0, 0, 0, 0.2, 0.3, 0],
])


def community_edges():
    pay = PromiseBody("pay")
    return [TrustEdge(a, b, pay, v) for a, b, v in COMMUNITY_EDGES]


@pytest.fixture
def matrix8():
    return build_matrix(community_edges(), ROSTER8, "pay")


def fixture_files():
    return sorted(FIXTURES.glob("*.ptg"))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
