"""Stabilizer and CSS Hamiltonians rotated by a single-qubit Y rotation.

For ``D = exp(-i theta Y)`` the rotated Hamiltonian is
``D^dag(n) H D(n)``, so each term is ``D^dag(k) (I - S)/2 D(k)`` on the
support of ``S``.  At ``theta = pi/8`` this sends ``(I - X^k)/2`` to
``(I - H^k)/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from . import dense
from .codes import CssCodePair
from .dense import ResourceError
from .f2linalg import FormatError
from .pauli import CliffordCircuit, PauliOperator, conjugate
from .stabilizer import (
    ENUM_CUTOFF,
    MixedStabilizerState,
    StabilizerGroup,
    all_pure_state_vectors,
    all_pure_states,
    reduced_density,
)

PI8 = math.pi / 8
SIN2_PI8 = math.sin(PI8) ** 2
DEFAULT_MIN_ENUM = 4


class NotCssError(ValueError):
    pass


class CssViolationError(ValueError):
    pass


@dataclass(frozen=True)
class CssHamiltonian:
    """``(1/m) sum_i D^dag (I - S_i)/2 D`` with ``D = exp(-i theta Y)`` on every qubit."""

    n: int
    terms: tuple[PauliOperator, ...]
    theta: float = PI8

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ValueError("a Hamiltonian needs at least one term")
        for s in self.terms:
            if s.n != self.n:
                raise ValueError(f"term {s} is not on {self.n} qubits")
            if not s.is_hermitian:
                raise ValueError(f"term {s} is not Hermitian")

    @property
    def m(self) -> int:
        return len(self.terms)

    @property
    def locality(self) -> int:
        return max(s.weight for s in self.terms)

    def is_css(self) -> bool:
        return all(s.is_x_type() or s.is_z_type() for s in self.terms)

    def with_theta(self, theta: float) -> CssHamiltonian:
        return CssHamiltonian(self.n, self.terms, theta)

    def dumps(self) -> str:
        return f"{self.n} {self.theta!r}\n" + "".join(f"{s}\n" for s in self.terms)

    @classmethod
    def loads(cls, text: str) -> CssHamiltonian:
        lines = text.splitlines()
        head = lines[0].split() if lines else []
        if len(head) != 2:
            raise FormatError("header must be 'n theta'", line=1)
        try:
            n, theta = int(head[0]), float(head[1])
        except ValueError:
            raise FormatError("header must be 'n theta'", line=1) from None
        terms = []
        for k, ln in enumerate(lines[1:], start=2):
            if not ln.strip() or ln.lstrip().startswith("#"):
                continue
            try:
                p = PauliOperator.from_label(ln)
            except ValueError as exc:
                raise FormatError(str(exc), line=k) from None
            if p.n != n:
                raise FormatError(f"term has {p.n} qubits, header says {n}", line=k)
            terms.append(p)
        try:
            return cls(n, tuple(terms), theta)
        except ValueError as exc:
            raise FormatError(str(exc)) from None

    @classmethod
    def load(cls, path: str | Path) -> CssHamiltonian:
        return cls.loads(Path(path).read_text())


def zero_hamiltonian(n: int, theta: float = PI8) -> CssHamiltonian:
    """``(1/n) sum_i |1><1|_i``, rotated by ``theta`` (``theta=0`` is unrotated)."""
    return CssHamiltonian(n, tuple(PauliOperator(n, 0, 1 << q) for q in range(n)), theta)


def from_css_pair(c: CssCodePair, theta: float = PI8, allow_violations: bool = False) -> CssHamiltonian:
    if c.violations and not allow_violations:
        raise CssViolationError(f"H_X H_Z^T has {c.violations} nonzero entries")
    n = c.n
    terms = [PauliOperator(n, r, 0) for r in c.hx.data] + [PauliOperator(n, 0, r) for r in c.hz.data]
    return CssHamiltonian(n, tuple(terms), theta)


# -- local terms -------------------------------------------------------------


@lru_cache(maxsize=4096)
def _rotated_local(local: PauliOperator, theta: float) -> np.ndarray:
    k = local.n
    proj = 0.5 * (np.eye(1 << k) - local.to_matrix())
    d = dense.y_rotation(theta)
    dk = np.array([[1.0 + 0j]])
    for _ in range(k):
        dk = np.kron(dk, d)
    out = dk.conj().T @ proj @ dk
    out.flags.writeable = False
    return out


def rotated_local_term(s: PauliOperator, theta: float = PI8, cutoff: int = dense.DENSE_CUTOFF) -> np.ndarray:
    """Dense rotated projector on the ``wt(S)`` qubits of ``N(S)`` (in index order)."""
    dense.check_cutoff(s.weight, cutoff)
    return _rotated_local(s.restrict(s.support), float(theta))


def term_energy(rho: np.ndarray, s: PauliOperator, theta: float) -> float:
    return float(np.real(np.trace(rho @ rotated_local_term(s, theta))))


def dense_matrix(h: CssHamiltonian) -> np.ndarray:
    dense.check_cutoff(h.n)
    acc = np.zeros((1 << h.n, 1 << h.n), dtype=complex)
    for s in h.terms:
        acc += dense.embed_operator(rotated_local_term(s, h.theta), s.support, h.n)
    return acc / h.m


# -- energies ----------------------------------------------------------------


def energy_dense(state: np.ndarray, h: CssHamiltonian, atol: float = 1e-10) -> float:
    """Energy of a pure state vector, evaluating each term on its reduced state."""
    dense.check_cutoff(h.n)
    state = np.asarray(state, dtype=complex)
    if state.shape != (1 << h.n,):
        raise ValueError(f"state must have {1 << h.n} amplitudes")
    if abs(np.vdot(state, state).real - 1) > atol:
        raise ValueError("state is not normalised")
    vals = [term_energy(dense.partial_trace(state, s.support, h.n), s, h.theta) for s in h.terms]
    return math.fsum(vals) / h.m


def energy_density(rho: np.ndarray, h: CssHamiltonian) -> float:
    dense.check_cutoff(h.n)
    vals = [term_energy(dense.partial_trace_rho(rho, s.support, h.n), s, h.theta) for s in h.terms]
    return math.fsum(vals) / h.m


StabilizerLike = Union[StabilizerGroup, MixedStabilizerState]


def energy_stabilizer(state: StabilizerLike, h: CssHamiltonian, cutoff: int = dense.DENSE_CUTOFF) -> float:
    """Energy of a (mixed) stabilizer state; only term supports are densified, so ``n`` is unbounded."""
    for s in h.terms:
        dense.check_cutoff(s.weight, cutoff)
    if isinstance(state, MixedStabilizerState):
        return math.fsum(w * energy_stabilizer(g, h, cutoff) for w, g in state.terms)
    if state.n != h.n:
        raise ValueError("size mismatch")
    vals = [term_energy(reduced_density(state, s.support), s, h.theta) for s in h.terms]
    return math.fsum(vals) / h.m


def _batch_energies(vectors: np.ndarray, op: np.ndarray) -> np.ndarray:
    return np.einsum("si,ij,sj->s", vectors.conj(), op, vectors).real


def _argmin_with_ties(energies: np.ndarray, states: Sequence[StabilizerGroup], tol: float = 1e-12):
    lo = float(energies.min())
    ties = np.flatnonzero(energies <= lo + tol)
    best = min((states[i] for i in ties), key=lambda g: g.key)
    return lo, best


def min_energy_over_stabilizers(h: CssHamiltonian, cutoff: int = DEFAULT_MIN_ENUM) -> tuple[float, StabilizerGroup]:
    """Exact minimum over every pure ``n``-qubit stabilizer state.

    Mixed stabilizer states are convex combinations, so they cannot go lower.
    Ties within 1e-12 go to the lexicographically smallest canonical form.
    """
    if h.n > min(cutoff, ENUM_CUTOFF):
        raise ResourceError(f"n={h.n} exceeds enumeration cutoff {cutoff}")
    energies = _batch_energies(all_pure_state_vectors(h.n), dense_matrix(h))
    return _argmin_with_ties(energies, all_pure_states(h.n))


@dataclass(frozen=True)
class LocalBoundRow:
    k: int
    kind: str
    min_energy: float
    bound: float
    hadamard_max: float
    argmin: StabilizerGroup


def odd_weight_bound(k: int) -> float:
    return SIN2_PI8 if k % 2 else 0.0


def local_bound_table(k_max: int, theta: float = PI8, cutoff: int = DEFAULT_MIN_ENUM) -> list[LocalBoundRow]:
    """Minimum of the rotated X^k and Z^k projectors over all ``k``-qubit stabilizer states.

    ``hadamard_max`` is ``max |<eta|H^k|eta>|`` over the same states.
    """
    if k_max > min(cutoff, ENUM_CUTOFF):
        raise ResourceError(f"k_max={k_max} exceeds enumeration cutoff {cutoff}")
    rows = []
    for k in range(1, k_max + 1):
        vecs = all_pure_state_vectors(k)
        states = all_pure_states(k)
        hk = np.array([[1.0 + 0j]])
        for _ in range(k):
            hk = np.kron(hk, dense.HADAMARD)
        hmax = float(np.abs(np.einsum("si,ij,sj->s", vecs.conj(), hk, vecs)).max())
        full = (1 << k) - 1
        for kind, s in (("X", PauliOperator(k, full, 0)), ("Z", PauliOperator(k, 0, full))):
            energies = _batch_energies(vecs, rotated_local_term(s, theta))
            lo, arg = _argmin_with_ties(energies, states)
            rows.append(LocalBoundRow(k, kind, lo, odd_weight_bound(k), hmax, arg))
    return rows


def nlcs_certificate(
    h: CssHamiltonian, validate: bool = True, cutoff: int = DEFAULT_MIN_ENUM, tol: float = 1e-12
) -> tuple[Fraction, float]:
    """Odd-term fraction ``alpha`` and the stabilizer energy floor ``alpha sin^2(pi/8)``.

    With ``validate`` and ``n`` within the enumeration cutoff, the floor is
    checked against the exhaustive stabilizer minimum.
    """
    if not math.isclose(h.theta, PI8, rel_tol=0, abs_tol=1e-15):
        raise ValueError("certificate only holds at theta = pi/8")
    if not h.is_css():
        raise NotCssError("every term must be X-type or Z-type")
    alpha = Fraction(sum(s.weight % 2 for s in h.terms), h.m)
    eps = float(alpha) * SIN2_PI8
    if validate and h.n <= cutoff:
        lo, _ = min_energy_over_stabilizers(h, cutoff)
        if lo < eps - tol:
            raise AssertionError(f"stabilizer minimum {lo!r} below certified floor {eps!r}")
    return alpha, eps


# -- conjugation -------------------------------------------------------------


def spectrum_deviation(h: CssHamiltonian, c: CliffordCircuit | np.ndarray) -> float:
    """Largest gap between sorted spectra of ``H`` and ``C^dag H C``."""
    mat = dense_matrix(h)
    u = dense.circuit_unitary(c) if isinstance(c, CliffordCircuit) else np.asarray(c)
    if u.shape != mat.shape:
        raise ValueError("unitary dimension mismatch")
    a = np.linalg.eigvalsh(mat)
    b = np.linalg.eigvalsh(u.conj().T @ mat @ u)
    return float(np.max(np.abs(a - b)))


def spectrum_conjugation_check(h: CssHamiltonian, c: CliffordCircuit | np.ndarray, tol: float = 1e-9) -> bool:
    return spectrum_deviation(h, c) <= tol


def conjugated_hamiltonian(h: CssHamiltonian, c: CliffordCircuit) -> CssHamiltonian:
    """Terms ``C^dag S C`` so that the unrotated part equals ``C^dag H_S C``.

    Only meaningful at ``theta = 0``; with a rotation the D layer sits
    outside ``C`` and is kept as is.
    """
    inv = c.inverse()
    return CssHamiltonian(h.n, tuple(conjugate(inv, s) for s in h.terms), h.theta)


def reverse_lightcone(c: CliffordCircuit, qubits: Sequence[int]) -> set[int]:
    """Qubits whose input can influence an output qubit in ``qubits``."""
    cone = set(qubits)
    for g in reversed(c.gates):
        if cone.intersection(g.qubits):
            cone.update(g.qubits)
    return cone
