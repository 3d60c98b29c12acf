"""Dense state-vector and density-matrix helpers.

Qubit 0 is the most significant bit of a basis index, matching ``np.kron``
order.  Everything here is brute force and serves as the oracle layer for the
symbolic routines elsewhere in the package.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

import numpy as np

from .pauli import CliffordCircuit, Gate, PauliOperator

DENSE_CUTOFF = 12

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
PHASE = np.diag([1, 1j]).astype(complex)


def y_rotation(theta: float) -> np.ndarray:
    """``exp(-i theta Y)``; at ``theta = pi/8`` this is the rotation D."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=complex)


def check_cutoff(n: int, cutoff: int = DENSE_CUTOFF) -> None:
    if n > cutoff:
        raise ResourceError(f"{n} qubits exceeds dense cutoff {cutoff}")


class ResourceError(RuntimeError):
    """A requested size exceeds a configured enumeration or dense cutoff."""


def _reverse_bits(v: int, n: int) -> int:
    out = 0
    for q in range(n):
        if (v >> q) & 1:
            out |= 1 << (n - 1 - q)
    return out


@lru_cache(maxsize=32)
def _parity_table(n: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    par = np.zeros(1 << n, dtype=np.int64)
    for b in range(n):
        par ^= (idx >> b) & 1
    return par


def apply_pauli(p: PauliOperator, vec: np.ndarray) -> np.ndarray:
    """``p @ vec`` without building the matrix; ``vec`` may be batched on axis 0."""
    n = p.n
    xm = _reverse_bits(p.x, n)
    zm = _reverse_bits(p.z, n)
    idx = np.arange(1 << n, dtype=np.int64)
    src = idx ^ xm
    signs = 1 - 2 * _parity_table(n)[zm & src]
    return (1j ** p.phase) * signs * vec[..., src]


def basis_state(bits: Sequence[int]) -> np.ndarray:
    n = len(bits)
    v = np.zeros(1 << n, dtype=complex)
    v[int("".join(str(int(b)) for b in bits), 2) if n else 0] = 1.0
    return v


def fix_global_phase(vec: np.ndarray, atol: float = 1e-12) -> np.ndarray:
    """Scale so the first non-negligible amplitude is real and positive."""
    k = int(np.argmax(np.abs(vec) > atol))
    a = vec[k]
    return vec * (abs(a) / a)


def single_qubit_operator(u: np.ndarray, q: int, n: int) -> np.ndarray:
    return np.kron(np.kron(np.eye(1 << q), u), np.eye(1 << (n - q - 1)))


def gate_matrix(g: Gate, n: int) -> np.ndarray:
    if g.name == "H":
        return single_qubit_operator(HADAMARD, g.qubits[0], n)
    if g.name == "S":
        return single_qubit_operator(PHASE, g.qubits[0], n)
    c, t = g.qubits
    dim = 1 << n
    idx = np.arange(dim)
    cbit = (idx >> (n - 1 - c)) & 1
    out_idx = idx ^ (cbit << (n - 1 - t))
    m = np.zeros((dim, dim), dtype=complex)
    m[out_idx, idx] = 1.0
    return m


def circuit_unitary(c: CliffordCircuit) -> np.ndarray:
    u = np.eye(1 << c.n, dtype=complex)
    for g in c.gates:
        u = gate_matrix(g, c.n) @ u
    return u


def pauli_rotation(theta: float, p: PauliOperator) -> np.ndarray:
    """``exp(i theta P)`` for Hermitian ``P``."""
    return np.cos(theta) * np.eye(1 << p.n) + 1j * np.sin(theta) * p.to_matrix()


def apply_pauli_rotation(theta: float, p: PauliOperator, vec: np.ndarray) -> np.ndarray:
    return np.cos(theta) * vec + 1j * np.sin(theta) * apply_pauli(p, vec)


def apply_single_qubit_all(u: np.ndarray, vec: np.ndarray, n: int) -> np.ndarray:
    """Apply ``u`` to every qubit; ``vec`` may carry a leading batch axis."""
    batch = vec.shape[:-1]
    t = vec.reshape(batch + (2,) * n)
    off = len(batch)
    for q in range(n):
        t = np.moveaxis(np.tensordot(u, t, axes=([1], [off + q])), 0, off + q)
    return t.reshape(batch + (1 << n,))


def partial_trace(vec: np.ndarray, keep: Sequence[int], n: int) -> np.ndarray:
    """Reduced density matrix of a pure state on ``keep`` (in the given order)."""
    keep = list(keep)
    rest = [q for q in range(n) if q not in keep]
    t = vec.reshape((2,) * n).transpose(keep + rest).reshape(1 << len(keep), 1 << len(rest))
    return t @ t.conj().T


def partial_trace_rho(rho: np.ndarray, keep: Sequence[int], n: int) -> np.ndarray:
    keep = list(keep)
    rest = [q for q in range(n) if q not in keep]
    k, r = len(keep), len(rest)
    t = rho.reshape((2,) * (2 * n))
    t = t.transpose(keep + rest + [n + q for q in keep] + [n + q for q in rest])
    t = t.reshape(1 << k, 1 << r, 1 << k, 1 << r)
    return np.einsum("ajbj->ab", t)


def projector_from_paulis(paulis: Sequence[PauliOperator], n: int) -> np.ndarray:
    """``(1/|G|) sum_g g`` for an explicit list of group elements."""
    acc = np.zeros((1 << n, 1 << n), dtype=complex)
    for g in paulis:
        acc += g.to_matrix()
    return acc / len(paulis)


def embed_operator(op: np.ndarray, qubits: Sequence[int], n: int) -> np.ndarray:
    """``op`` acting on ``qubits`` (in the given order), identity elsewhere."""
    qubits = list(qubits)
    rest = [q for q in range(n) if q not in qubits]
    full = np.kron(op, np.eye(1 << len(rest))).reshape((2,) * (2 * n))
    order = qubits + rest
    inv = [order.index(q) for q in range(n)]
    full = full.transpose(inv + [n + i for i in inv])
    return full.reshape(1 << n, 1 << n)
