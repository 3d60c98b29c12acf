import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from nlcslab.f2linalg import BinaryMatrix
from nlcslab.pauli import PauliOperator

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def binary_matrices(draw, max_rows=8, max_cols=8, min_rows=0, min_cols=0):
    rows = draw(st.integers(min_rows, max_rows))
    cols = draw(st.integers(min_cols, max_cols))
    data = draw(st.lists(st.integers(0, (1 << cols) - 1), min_size=rows, max_size=rows))
    return BinaryMatrix(rows, cols, tuple(data))


@st.composite
def paulis(draw, n=None, max_n=4, hermitian=False):
    if n is None:
        n = draw(st.integers(1, max_n))
    x = draw(st.integers(0, (1 << n) - 1))
    z = draw(st.integers(0, (1 << n) - 1))
    if hermitian:
        phase = (x & z).bit_count() + 2 * draw(st.integers(0, 1))
    else:
        phase = draw(st.integers(0, 3))
    return PauliOperator(n, x, z, phase)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# (criterion number, short name, passed, detail) collected by test_acceptance
ACCEPTANCE: list[tuple[int, str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, name, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {num:2d} {name}: {detail}")
