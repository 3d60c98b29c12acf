import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nlcslab import dense
from nlcslab.f2linalg import FormatError
from nlcslab.pauli import (
    CNOT,
    CliffordCircuit,
    Gate,
    H,
    PauliOperator,
    S,
    all_paulis,
    commutes,
    conjugate,
    multiply,
)
from nlcslab.stabilizer import random_clifford_circuit

from conftest import paulis

P = PauliOperator.from_label
Y2 = np.array([[0, -1j], [1j, 0]])


def test_y_representation():
    y = P("Y")
    assert (y.x, y.z, y.phase) == (1, 1, 1)
    assert np.allclose(y.to_matrix(), Y2)


def test_x_times_z_is_minus_i_y():
    xz = multiply(P("X"), P("Z"))
    assert np.allclose(xz.to_matrix(), -1j * Y2)
    assert xz == P("-iY")


def test_identity_and_involution():
    p = P("-XYZ")
    assert p * PauliOperator.identity(3) == p
    assert p * p == PauliOperator.identity(3)
    q = P("iXY")
    assert q * q == -PauliOperator.identity(2)


def test_commutation_examples():
    assert not commutes(P("X"), P("Z"))
    assert commutes(P("XX"), P("ZZ"))
    assert not commutes(P("YZ"), P("ZI"))
    with pytest.raises(ValueError):
        commutes(P("X"), P("XX"))


def test_conjugation_examples():
    c = CliffordCircuit(1, (H(0),))
    assert conjugate(c, P("X")) == P("Z")
    assert conjugate(c, P("Y")) == P("-Y")
    assert conjugate(CliffordCircuit(2, (CNOT(0, 1),)), P("XI")) == P("XX")


def test_label_round_trip_and_errors():
    for label in ("XYZ", "-XYZ", "+iIZ", "-iY", "I"):
        assert str(P(label)) == label
    assert P("+XZ") == P("XZ")
    assert P("−XYZ") == P("-XYZ")
    for bad in ("-XHZ", "", "--X", "iiX"):
        with pytest.raises(ValueError):
            P(bad)


def test_weight_support():
    p = P("XIYZI")
    assert p.weight == 3 and p.support == [0, 2, 3]


def test_hermitian_iff_squares_to_identity():
    for n in (1, 2):
        for x, z, ph in itertools.product(range(1 << n), range(1 << n), range(4)):
            p = PauliOperator(n, x, z, ph)
            m = p.to_matrix()
            assert p.is_hermitian == np.allclose(m, m.conj().T)
            assert p.is_hermitian == np.allclose(m @ m, np.eye(1 << n))


def test_multiply_exhaustive_two_qubits():
    ops = [PauliOperator(2, x, z, ph) for x in range(4) for z in range(4) for ph in (0, 1)]
    for a, b in itertools.product(ops, repeat=2):
        assert np.allclose(multiply(a, b).to_matrix(), a.to_matrix() @ b.to_matrix())


@given(paulis(n=3), paulis(n=3), paulis(n=3))
def test_multiply_associative_and_dense(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert np.allclose((a * b * c).to_matrix(), a.to_matrix() @ b.to_matrix() @ c.to_matrix())


def test_commutes_matches_dense():
    ops = [p for p in all_paulis(3) if p.weight <= 2]
    for a, b in itertools.product(ops, repeat=2):
        ma, mb = a.to_matrix(), b.to_matrix()
        assert commutes(a, b) == np.allclose(ma @ mb, mb @ ma)


@st.composite
def circuits(draw, n):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_clifford_circuit(n, draw(st.integers(0, 12)), np.random.default_rng(seed))


@given(st.data())
def test_conjugate_matches_dense(data):
    n = data.draw(st.integers(1, 3))
    c = data.draw(circuits(n))
    p = data.draw(paulis(n=n, hermitian=True))
    u = dense.circuit_unitary(c)
    assert np.allclose(conjugate(c, p).to_matrix(), u @ p.to_matrix() @ u.conj().T)
    assert conjugate(c.inverse(), conjugate(c, p)) == p


@given(st.data())
def test_conjugate_preserves_commutation(data):
    n = data.draw(st.integers(1, 4))
    c = data.draw(circuits(n))
    a, b = data.draw(paulis(n=n)), data.draw(paulis(n=n))
    assert commutes(a, b) == commutes(conjugate(c, a), conjugate(c, b))


def test_gate_validation():
    with pytest.raises(ValueError):
        Gate("T", (0,))
    with pytest.raises(ValueError):
        CNOT(1, 1)
    with pytest.raises(ValueError):
        CliffordCircuit(2, (H(2),))


def test_circuit_file_round_trip():
    c = CliffordCircuit(3, (H(0), S(2), CNOT(0, 1)))
    assert CliffordCircuit.loads(c.dumps()) == c
    assert CliffordCircuit.loads("# comment\n2\nH 1\n\nCNOT 1 0\n").gates == (H(1), CNOT(1, 0))
    with pytest.raises(FormatError, match="line 3"):
        CliffordCircuit.loads("2\nH 0\nT 1\n")
