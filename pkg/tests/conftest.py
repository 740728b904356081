from fractions import Fraction

import numpy as np
import pytest
from hypothesis import strategies as st

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


words = st.lists(st.integers(1, 3), min_size=0, max_size=8).map(tuple)
rationals = st.fractions(min_value=-2, max_value=3, max_denominator=10**6)


ORACLE_DEPTH = 12


@pytest.fixture(scope="session")
def atoms12():
    """Depth-12 atoms S_w(1/2) in lexicographic word order (which is also increasing order)."""
    locs = np.array([0.5])
    for _ in range(ORACLE_DEPTH):
        # prepend a digit: S_j(S_w(1/2)) for j = 1, 2, 3 keeps lexicographic order
        locs = np.concatenate([locs / 5 + 2 * (j - 1) / 5 for j in (1, 2, 3)])
    return locs


def word_range(word, depth=ORACLE_DEPTH):
    """Index range of depth-``depth`` atoms lying in J_word."""
    start = 0
    for d in word:
        start = start * 3 + (d - 1)
    span = 3 ** (depth - len(word))
    start *= span
    return start, start + span


def atomic_integral(locs, words, x0, depth=ORACLE_DEPTH):
    total = 0.0
    for w in words:
        a, b = word_range(w, depth)
        total += np.sum((locs[a:b] - float(x0)) ** 2)
    return total / 3**depth


def frac(s: str) -> Fraction:
    return Fraction(s)
