import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nlcslab import dense
from nlcslab.checks import random_css_terms
from nlcslab.codes import CssCodePair
from nlcslab.f2linalg import BinaryMatrix, FormatError
from nlcslab.hamiltonian import (
    PI8,
    SIN2_PI8,
    CssHamiltonian,
    CssViolationError,
    NotCssError,
    conjugated_hamiltonian,
    dense_matrix,
    energy_dense,
    energy_density,
    energy_stabilizer,
    from_css_pair,
    local_bound_table,
    min_energy_over_stabilizers,
    nlcs_certificate,
    reverse_lightcone,
    rotated_local_term,
    spectrum_conjugation_check,
    zero_hamiltonian,
)
from nlcslab.pauli import CliffordCircuit, PauliOperator, conjugate
from nlcslab.stabilizer import (
    StabilizerGroup,
    all_pure_states,
    random_clifford_circuit,
    random_stabilizer_group,
    reduced_state,
    to_dense,
    zero_state,
)

P = PauliOperator.from_label
G = StabilizerGroup.from_labels
C8, S8 = math.cos(PI8), math.sin(PI8)


def d_all(n):
    out = np.array([[1.0 + 0j]])
    for _ in range(n):
        out = np.kron(out, dense.y_rotation(PI8))
    return out


def test_from_css_pair_zero_hamiltonian():
    c = CssCodePair(BinaryMatrix.zeros(0, 3), BinaryMatrix.identity(3))
    assert from_css_pair(c).terms == zero_hamiltonian(3).terms


def test_from_css_pair_terms():
    h = from_css_pair(CssCodePair(BinaryMatrix.from_rows([[1, 1, 1]]), BinaryMatrix.zeros(0, 3)))
    assert [str(s) for s in h.terms] == ["XXX"]
    steane = BinaryMatrix.from_rows([[0, 0, 0, 1, 1, 1, 1], [0, 1, 1, 0, 0, 1, 1], [1, 0, 1, 0, 1, 0, 1]])
    h = from_css_pair(CssCodePair(steane, steane))
    assert h.m == 6 and h.locality == 4 and h.is_css()


def test_from_css_pair_rejects_violation():
    bad = CssCodePair(BinaryMatrix.from_rows([[1, 0]]), BinaryMatrix.from_rows([[1, 1]]))
    with pytest.raises(CssViolationError):
        from_css_pair(bad)
    assert from_css_pair(bad, allow_violations=True).m == 2


def test_rotated_single_z_entries():
    # D^dag |1><1| D with D = [[c, -s], [s, c]], so D^dag |1> = (s, c)
    want = np.array([[S8 * S8, S8 * C8], [S8 * C8, C8 * C8]])
    assert np.allclose(rotated_local_term(P("Z")), want, atol=1e-15)


def test_unrotated_term_is_plain_projector():
    s = P("XZY")
    assert np.array_equal(rotated_local_term(s, 0.0), 0.5 * (np.eye(8) - s.to_matrix()))


@pytest.mark.parametrize("k", range(1, 7))
def test_rotated_x_and_z_identities(k):
    hk, flip = np.array([[1.0]]), np.array([[1.0]])
    xhx = -dense.HADAMARD[::-1, ::-1]
    for _ in range(k):
        hk = np.kron(hk, dense.HADAMARD)
        flip = np.kron(flip, xhx)
    eye = np.eye(1 << k)
    full = (1 << k) - 1
    assert np.linalg.norm(rotated_local_term(PauliOperator(k, full, 0)) - (eye - hk) / 2) <= 1e-13
    assert np.linalg.norm(rotated_local_term(PauliOperator(k, 0, full)) - (eye - flip) / 2) <= 1e-13


@given(st.floats(-4, 4), st.integers(1, 3), st.data())
def test_rotated_term_is_projector(theta, n, data):
    x, z = data.draw(st.integers(0, (1 << n) - 1)), data.draw(st.integers(0, (1 << n) - 1))
    if not x | z:
        return
    pi = rotated_local_term(PauliOperator(n, x, z, (x & z).bit_count()), theta)
    assert np.linalg.norm(pi @ pi - pi) < 1e-12
    assert np.allclose(pi, pi.conj().T)


def test_energy_dense_examples():
    n = 3
    h = zero_hamiltonian(n)
    ground = d_all(n).conj().T @ np.eye(1 << n)[0]
    assert abs(energy_dense(ground, h)) < 1e-14
    zero = np.eye(1 << n)[0].astype(complex)
    assert math.isclose(energy_dense(zero, h), SIN2_PI8, rel_tol=0, abs_tol=1e-14)
    h0 = zero_hamiltonian(n, 0.0)
    for x in range(1 << n):
        assert math.isclose(energy_dense(np.eye(1 << n)[x].astype(complex), h0), x.bit_count() / n)
    with pytest.raises(ValueError):
        energy_dense(2 * zero, h)


def test_energy_stabilizer_examples():
    assert math.isclose(energy_stabilizer(zero_state(40), zero_hamiltonian(40)), SIN2_PI8, abs_tol=1e-14)
    yplus = G([f"{'I' * q}Y{'I' * (5 - q)}" for q in range(6)])
    assert math.isclose(energy_stabilizer(yplus, zero_hamiltonian(6)), 0.5, abs_tol=1e-14)
    for k in (2, 4, 6):
        bell_pairs = []
        for j in range(0, k, 2):
            for pair in ("XX", "ZZ"):
                bell_pairs.append("I" * j + pair + "I" * (k - j - 2))
        term = CssHamiltonian(k, (PauliOperator(k, (1 << k) - 1, 0),))
        assert abs(energy_stabilizer(G(bell_pairs), term)) < 1e-14


@given(st.integers(0, 2**32 - 1), st.integers(1, 6))
def test_energy_paths_agree(seed, n):
    rng = np.random.default_rng(seed)
    g = random_stabilizer_group(n, rng)
    h = random_css_terms(n, rng) if n > 1 else zero_hamiltonian(1)
    v = to_dense(g)
    e = energy_stabilizer(g, h)
    assert abs(e - energy_dense(v, h)) < 1e-10
    assert abs(e - float(np.real(np.vdot(v, dense_matrix(h) @ v)))) < 1e-10
    if n > 1:
        a = list(range(n - 1))
        mixed = reduced_state(g, a)
        sub = CssHamiltonian(n - 1, (PauliOperator(n - 1, 1, 0), PauliOperator(n - 1, 0, 1)))
        assert abs(energy_stabilizer(mixed, sub) - energy_density(mixed.density_matrix(), sub)) < 1e-10


def test_min_energy_examples():
    lo, arg = min_energy_over_stabilizers(zero_hamiltonian(2))
    assert math.isclose(lo, SIN2_PI8, abs_tol=1e-12)
    lo, _ = min_energy_over_stabilizers(CssHamiltonian(2, (P("ZZ"),)))
    assert abs(lo) < 1e-12
    lo, arg = min_energy_over_stabilizers(zero_hamiltonian(2, 0.0))
    assert abs(lo) < 1e-12 and arg == zero_state(2)


def test_min_energy_tie_break_is_smallest_key():
    h = CssHamiltonian(2, (P("ZZ"),))
    lo, arg = min_energy_over_stabilizers(h)
    mat = dense_matrix(h)
    ties = [g for g in all_pure_states(2) if np.vdot(to_dense(g), mat @ to_dense(g)).real <= lo + 1e-12]
    assert arg.key == min(g.key for g in ties)


def test_min_energy_cutoff():
    with pytest.raises(dense.ResourceError):
        min_energy_over_stabilizers(zero_hamiltonian(5))


def test_local_bound_table_small():
    rows = {(r.k, r.kind): r for r in local_bound_table(3)}
    for kind in "XZ":
        assert math.isclose(rows[(1, kind)].min_energy, SIN2_PI8, abs_tol=1e-12)
        assert abs(rows[(2, kind)].min_energy) < 1e-12
        assert math.isclose(rows[(3, kind)].min_energy, SIN2_PI8, abs_tol=1e-12)
    assert math.isclose(rows[(1, "X")].hadamard_max, 1 / math.sqrt(2), abs_tol=1e-12)
    assert math.isclose(rows[(3, "X")].hadamard_max, 1 / math.sqrt(2), abs_tol=1e-12)
    # a product of a single qubit and a Bell pair attains the odd-weight floor
    attained = G(["XII", "IXX", "IZZ"])
    term = CssHamiltonian(3, (P("XXX"),))
    assert math.isclose(energy_stabilizer(attained, term), SIN2_PI8, abs_tol=1e-14)


def test_certificate_examples():
    alpha, eps = nlcs_certificate(zero_hamiltonian(3))
    assert alpha == 1 and math.isclose(eps, 0.1464466, abs_tol=1e-7)
    alpha, eps = nlcs_certificate(CssHamiltonian(2, (P("XX"), P("ZZ"))))
    assert alpha == 0 and eps == 0
    alpha, eps = nlcs_certificate(CssHamiltonian(3, (P("XXX"), P("ZZI"))))
    assert alpha == 0.5 and math.isclose(eps, SIN2_PI8 / 2)
    with pytest.raises(NotCssError):
        nlcs_certificate(CssHamiltonian(2, (P("XZ"),)))
    with pytest.raises(ValueError):
        nlcs_certificate(zero_hamiltonian(2, 0.3))


@given(st.integers(0, 2**32 - 1))
def test_certificate_floor_holds_exhaustively(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 5))
    h = random_css_terms(n, rng)
    alpha, eps = nlcs_certificate(h, validate=False)
    lo, _ = min_energy_over_stabilizers(h)
    assert lo >= eps - 1e-12


@given(st.integers(0, 2**32 - 1), st.integers(1, 8), st.sampled_from([1, 3, 5, 7]))
def test_odd_term_floor_random_states(seed, n, w):
    if w > n:
        return
    rng = np.random.default_rng(seed)
    qs = rng.choice(n, size=w, replace=False)
    mask = sum(1 << int(q) for q in qs)
    term = PauliOperator(n, mask, 0) if rng.random() < 0.5 else PauliOperator(n, 0, mask)
    e = energy_stabilizer(random_stabilizer_group(n, rng), CssHamiltonian(n, (term,)))
    assert e >= SIN2_PI8 - 1e-12


def test_spectrum_examples():
    h = from_css_pair(CssCodePair(BinaryMatrix.from_rows([[1, 1, 0]]), BinaryMatrix.from_rows([[1, 1, 1]])))
    assert spectrum_conjugation_check(h, CliffordCircuit(3, ()))
    assert spectrum_conjugation_check(zero_hamiltonian(3, 0.0), d_all(3))
    assert np.allclose(d_all(3).conj().T @ dense_matrix(zero_hamiltonian(3, 0.0)) @ d_all(3),
                       dense_matrix(zero_hamiltonian(3)))
    rng = np.random.default_rng(2)
    c = random_clifford_circuit(2, 10, rng)
    c3 = CliffordCircuit(3, c.gates)
    assert spectrum_conjugation_check(h, c3)


@given(st.integers(0, 2**32 - 1))
def test_conjugated_terms_stay_in_lightcone(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 6))
    c = random_clifford_circuit(n, int(rng.integers(0, 3 * n)), rng)
    h = random_css_terms(n, rng).with_theta(0.0)
    hc = conjugated_hamiltonian(h, c)
    u = dense.circuit_unitary(c)
    assert np.allclose(dense_matrix(hc), u.conj().T @ dense_matrix(h) @ u)
    for s, t in zip(h.terms, hc.terms):
        assert set(t.support) <= reverse_lightcone(c, s.support)
        assert t == conjugate(c.inverse(), s)


def test_hamiltonian_file_round_trip():
    h = CssHamiltonian(3, (P("XXI"), P("-IZZ")), 0.25)
    assert CssHamiltonian.loads(h.dumps()) == h
    with pytest.raises(FormatError, match="line 3"):
        CssHamiltonian.loads("2 0.1\nXX\nXQ\n")
    with pytest.raises(FormatError, match="line 1"):
        CssHamiltonian.loads("2\nXX\n")
