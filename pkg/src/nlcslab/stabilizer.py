"""Stabilizer groups and stabilizer states.

Symplectic vectors pack a Pauli's letters into one int: bits ``0..n-1`` hold
the X part and bits ``n..2n-1`` the Z part.  Canonical forms are the reduced
row echelon form of these vectors (leftmost pivot first) with each row's sign.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from . import dense
from .dense import ResourceError
from .f2linalg import BinaryMatrix, FormatError, in_row_span, kernel_basis, popcount, solve, span_elements
from .pauli import CNOT, CliffordCircuit, H, PauliOperator, S, commutes, conjugate, multiply

ENUM_CUTOFF = 5


class InvalidGroupError(ValueError):
    pass


def symplectic_vector(p: PauliOperator) -> int:
    return p.x | (p.z << p.n)


def pauli_from_vector(v: int, n: int, sign: int = 0) -> PauliOperator:
    """Hermitian Pauli with letters from ``v``; ``sign`` 0 means +1, 1 means -1."""
    mask = (1 << n) - 1
    x, z = v & mask, v >> n
    return PauliOperator(n, x, z, popcount(x & z) + 2 * sign)


class StabilizerGroup:
    """Group generated by independent, commuting, Hermitian Paulis.

    Equality and hashing use the canonical form, so two generating sets of
    the same group compare equal.
    """

    def __init__(self, generators: Sequence[PauliOperator], n: int | None = None, validate: bool = True):
        gens = tuple(generators)
        if n is None:
            if not gens:
                raise InvalidGroupError("n required for the trivial group")
            n = gens[0].n
        self.n = n
        self.generators = gens
        if validate:
            self._validate()

    def _validate(self) -> None:
        for g in self.generators:
            if g.n != self.n:
                raise InvalidGroupError("generator size mismatch")
            if not g.is_hermitian:
                raise InvalidGroupError(f"generator {g} is not Hermitian")
        for a, b in combinations(self.generators, 2):
            if not commutes(a, b):
                raise InvalidGroupError(f"generators {a} and {b} anticommute")
        if len(self._echelon()[0]) != len(self.generators):
            # dependent generators either repeat an element or produce -I
            raise InvalidGroupError("generators are not independent")

    @classmethod
    def from_labels(cls, labels: Sequence[str]) -> StabilizerGroup:
        return cls([PauliOperator.from_label(s) for s in labels])

    @property
    def k(self) -> int:
        return len(self.generators)

    @property
    def is_full_rank(self) -> bool:
        return self.k == self.n

    def _echelon(self) -> tuple[list[PauliOperator], list[int]]:
        rows = list(self.generators)
        pivots: list[int] = []
        r = 0
        for col in range(2 * self.n):
            bit = 1 << col
            found = next((i for i in range(r, len(rows)) if symplectic_vector(rows[i]) & bit), None)
            if found is None:
                continue
            rows[r], rows[found] = rows[found], rows[r]
            for i in range(len(rows)):
                if i != r and symplectic_vector(rows[i]) & bit:
                    rows[i] = multiply(rows[i], rows[r])
            pivots.append(col)
            r += 1
        return rows[:r], pivots

    @cached_property
    def canonical_generators(self) -> tuple[PauliOperator, ...]:
        return tuple(self._echelon()[0])

    @cached_property
    def key(self) -> tuple[tuple[int, int], ...]:
        """Canonical form as ``((vector, sign_bit), ...)``; orders groups lexicographically."""
        return tuple((symplectic_vector(g), g.sign_exp // 2) for g in self.canonical_generators)

    def canonicalize(self) -> StabilizerGroup:
        return StabilizerGroup(self.canonical_generators, self.n, validate=False)

    def __eq__(self, other) -> bool:
        return isinstance(other, StabilizerGroup) and self.n == other.n and self.key == other.key

    def __hash__(self) -> int:
        return hash((self.n, self.key))

    def __repr__(self) -> str:
        return f"StabilizerGroup({[str(g) for g in self.generators]})"

    def elements(self) -> list[PauliOperator]:
        out = [PauliOperator.identity(self.n)]
        for g in self.generators:
            out += [multiply(e, g) for e in out]
        return out

    def check_matrix(self) -> BinaryMatrix:
        return BinaryMatrix(self.k, 2 * self.n, tuple(symplectic_vector(g) for g in self.generators))

    def decompose(self, p: PauliOperator) -> tuple[int, int] | None:
        """Write ``p`` up to sign as a generator product.

        Returns ``(mask, sign)`` with ``p = (-1)**sign * prod_{i in mask} g_i``,
        or ``None`` if the letters of ``p`` are not in the group.
        """
        m = self.check_matrix().transpose()
        sol, _ = solve(m, symplectic_vector(p))
        if sol is None:
            return None
        prod = self.product(sol)
        if (prod.phase - p.phase) % 4 not in (0, 2):
            raise ValueError(f"{p} differs from a group element by a non-real phase")
        return sol, ((prod.phase - p.phase) % 4) // 2

    def contains(self, p: PauliOperator, up_to_sign: bool = False) -> bool:
        d = self.decompose(p)
        return d is not None and (up_to_sign or d[1] == 0)

    def product(self, mask: int) -> PauliOperator:
        out = PauliOperator.identity(self.n)
        i = 0
        while mask:
            if mask & 1:
                out = multiply(out, self.generators[i])
            mask >>= 1
            i += 1
        return out

    def conjugated(self, c: CliffordCircuit) -> StabilizerGroup:
        return StabilizerGroup([conjugate(c, g) for g in self.generators], self.n, validate=False)

    def dumps(self) -> str:
        return "".join(f"{g}\n" for g in self.generators)

    @classmethod
    def loads(cls, text: str) -> StabilizerGroup:
        gens = []
        for k, ln in enumerate(text.splitlines(), start=1):
            if ln.strip():
                try:
                    gens.append(PauliOperator.from_label(ln))
                except ValueError as exc:
                    raise FormatError(str(exc), line=k) from None
        return cls(gens)

    def to_json(self) -> dict:
        return {"n": self.n, "generators": [str(g) for g in self.canonical_generators]}


def zero_state(n: int) -> StabilizerGroup:
    return StabilizerGroup([PauliOperator(n, 0, 1 << q) for q in range(n)], n, validate=False)


def basis_state_group(bits: Sequence[int]) -> StabilizerGroup:
    n = len(bits)
    return StabilizerGroup([PauliOperator(n, 0, 1 << q, 2 * int(b)) for q, b in enumerate(bits)], n, validate=False)


# -- enumeration -------------------------------------------------------------


@lru_cache(maxsize=None)
def lagrangian_subspaces(n: int) -> tuple[tuple[int, ...], ...]:
    """All maximal isotropic subspaces of GF(2)^{2n} as RREF row tuples."""
    out = []
    cols = 2 * n
    mask = (1 << n) - 1

    def iso(a: int, b: int) -> bool:
        return (popcount((a & mask) & (b >> n)) + popcount((a >> n) & (b & mask))) % 2 == 0

    for pivots in combinations(range(cols), n):
        pivot_mask = sum(1 << p for p in pivots)
        free = []
        for p in pivots:
            free.append([c for c in range(p + 1, cols) if not (pivot_mask >> c) & 1])

        def build(i: int, rows: list[int]) -> None:
            if i == n:
                out.append(tuple(rows))
                return
            fr = free[i]
            for bits in range(1 << len(fr)):
                v = 1 << pivots[i]
                for j, c in enumerate(fr):
                    if (bits >> j) & 1:
                        v |= 1 << c
                if all(iso(v, r) for r in rows):
                    rows.append(v)
                    build(i + 1, rows)
                    rows.pop()

        build(0, [])
    return tuple(out)


def stabilizer_state_count(k: int) -> int:
    out = 2 ** k
    for i in range(1, k + 1):
        out *= 2 ** i + 1
    return out


def enumerate_pure_states(k: int, cutoff: int = ENUM_CUTOFF) -> Iterator[StabilizerGroup]:
    """Every pure ``k``-qubit stabilizer state once, as a canonical group."""
    if k > cutoff:
        raise ResourceError(f"k={k} exceeds enumeration cutoff {cutoff}")
    for rows in lagrangian_subspaces(k):
        for signs in range(1 << k):
            gens = [pauli_from_vector(v, k, (signs >> i) & 1) for i, v in enumerate(rows)]
            yield StabilizerGroup(gens, k, validate=False)


@lru_cache(maxsize=8)
def all_pure_states(k: int) -> tuple[StabilizerGroup, ...]:
    return tuple(enumerate_pure_states(k))


@lru_cache(maxsize=8)
def all_pure_state_vectors(k: int) -> np.ndarray:
    """Row ``i`` is ``to_dense(all_pure_states(k)[i])``."""
    return np.array([to_dense(g) for g in all_pure_states(k)])


# -- dense synthesis ---------------------------------------------------------


@lru_cache(maxsize=32)
def _generic_vector(n: int) -> np.ndarray:
    rng = np.random.default_rng(20240611 + n)
    return rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)


def to_dense(g: StabilizerGroup, cutoff: int = dense.DENSE_CUTOFF) -> np.ndarray:
    """State vector for a full-rank group, otherwise the density matrix ``(1/2^n) sum_g g``.

    Vectors are normalised with the first nonzero amplitude real and positive.
    """
    dense.check_cutoff(g.n, cutoff)
    if g.is_full_rank:
        v = _generic_vector(g.n)
        for s in g.generators:
            v = 0.5 * (v + dense.apply_pauli(s, v))
        v = v / np.linalg.norm(v)
        return dense.fix_global_phase(v)
    rho = dense.projector_from_paulis(g.elements(), g.n)
    return rho / np.trace(rho).real


# -- overlaps ----------------------------------------------------------------


def overlap_exponent(g1: StabilizerGroup, g2: StabilizerGroup) -> int | None:
    """``m`` with ``|<a|b>| = 2**(-m/2)``, or ``None`` when the states are orthogonal."""
    if not (g1.is_full_rank and g2.is_full_rank):
        raise InvalidGroupError("overlap needs full-rank groups")
    if g1.n != g2.n:
        raise ValueError("size mismatch")
    n, k = g1.n, g1.k
    vecs = [symplectic_vector(g) for g in g1.generators + g2.generators]
    combos = kernel_basis(BinaryMatrix(2 * k, 2 * n, tuple(vecs)).transpose())
    for c in combos.data:
        a = g1.product(c & ((1 << k) - 1))
        b = g2.product(c >> k)
        if a.phase != b.phase:
            return None
    return n - combos.rows


def overlap_magnitude(g1: StabilizerGroup, g2: StabilizerGroup) -> float:
    m = overlap_exponent(g1, g2)
    return 0.0 if m is None else 2.0 ** (-m / 2)


# -- restrictions and reduced states -----------------------------------------


def _outside_system(g: StabilizerGroup, qubits: Sequence[int]) -> tuple[BinaryMatrix, list[int]]:
    outside = [q for q in range(g.n) if q not in set(qubits)]
    coords = outside + [g.n + q for q in outside]
    rows = []
    for c in coords:
        r = 0
        for i, s in enumerate(g.generators):
            if (symplectic_vector(s) >> c) & 1:
                r |= 1 << i
        rows.append(r)
    return BinaryMatrix(len(rows), g.k, tuple(rows)), coords


def _coset_masks(g: StabilizerGroup, qubits: Sequence[int], p: PauliOperator | None) -> list[int]:
    m, coords = _outside_system(g, qubits)
    target = 0
    if p is not None:
        pv = symplectic_vector(p)
        for i, c in enumerate(coords):
            if (pv >> c) & 1:
                target |= 1 << i
    x0, ker = solve(m, target)
    if x0 is None:
        return []
    return sorted(x0 ^ e for e in span_elements(ker.data))


def subgroup_on(g: StabilizerGroup, qubits: Sequence[int], p: PauliOperator | None = None) -> list[PauliOperator]:
    """Restrictions to ``qubits`` of the elements equal to ``p`` off ``qubits``.

    Letters are compared off ``qubits``; each returned operator keeps the sign
    of the group element it came from.  ``p=None`` (or identity) gives the
    subgroup supported inside ``qubits``.
    """
    if p is not None and p.n != g.n:
        raise ValueError("size mismatch")
    qubits = list(qubits)
    return [g.product(c).restrict(qubits) for c in _coset_masks(g, qubits, p)]


def local_group(g: StabilizerGroup, qubits: Sequence[int]) -> StabilizerGroup:
    """The subgroup supported in ``qubits``, as a group on ``len(qubits)`` qubits."""
    qubits = list(qubits)
    m, _ = _outside_system(g, qubits)
    ker = kernel_basis(m)
    gens = [g.product(c).restrict(qubits) for c in ker.data]
    return StabilizerGroup(gens, len(qubits), validate=False)


def complete_to_full_rank(h: StabilizerGroup) -> list[PauliOperator]:
    """Extra commuting, independent Hermitian Paulis making ``h`` full rank."""
    n = h.n
    vecs = [symplectic_vector(s) for s in h.generators]
    extra: list[PauliOperator] = []
    mask = (1 << n) - 1
    while len(vecs) < n:
        swapped = [((v & mask) << n) | (v >> n) for v in vecs]
        comp = kernel_basis(BinaryMatrix(len(swapped), 2 * n, tuple(swapped)))
        span = BinaryMatrix(len(vecs), 2 * n, tuple(vecs))
        w = next(c for c in comp.data if not in_row_span(span, c))
        vecs.append(w)
        extra.append(pauli_from_vector(w, n))
    return extra


@dataclass(frozen=True)
class MixedStabilizerState:
    terms: tuple[tuple[float, StabilizerGroup], ...]

    def __post_init__(self):
        total = sum(w for w, _ in self.terms)
        if abs(total - 1) > 1e-12 or any(w < 0 for w, _ in self.terms):
            raise ValueError("weights must be non-negative and sum to 1")
        if any(not s.is_full_rank for _, s in self.terms):
            raise InvalidGroupError("mixture terms must be pure stabilizer states")

    @property
    def n(self) -> int:
        return self.terms[0][1].n

    def density_matrix(self) -> np.ndarray:
        acc = np.zeros((1 << self.n, 1 << self.n), dtype=complex)
        for w, s in self.terms:
            v = to_dense(s)
            acc += w * np.outer(v, v.conj())
        return acc


def reduced_state(g: StabilizerGroup, qubits: Sequence[int]) -> MixedStabilizerState:
    """Marginal of a pure stabilizer state as a uniform mixture of stabilizer states.

    The local subgroup fixes a code; completing it with logical Z operators
    and summing over their signs gives the ``2**r`` equally weighted terms.
    """
    if not g.is_full_rank:
        raise InvalidGroupError("reduced_state needs a pure state")
    loc = local_group(g, qubits)
    extra = complete_to_full_rank(loc)
    r = len(extra)
    terms = []
    for signs in range(1 << r):
        gens = list(loc.generators) + [e if not (signs >> i) & 1 else -e for i, e in enumerate(extra)]
        terms.append((2.0 ** -r, StabilizerGroup(gens, loc.n, validate=False)))
    return MixedStabilizerState(tuple(terms))


def reduced_density(g: StabilizerGroup, qubits: Sequence[int]) -> np.ndarray:
    """``2**-|A| sum_{h in G_A} h`` as a dense matrix on ``qubits``."""
    elems = subgroup_on(g, qubits)
    k = len(qubits)
    acc = np.zeros((1 << k, 1 << k), dtype=complex)
    for e in elems:
        acc += e.to_matrix()
    return acc / (1 << k)


# -- random states -----------------------------------------------------------


def random_clifford_circuit(n: int, num_gates: int, rng: np.random.Generator) -> CliffordCircuit:
    gates = []
    for _ in range(num_gates):
        kind = rng.integers(3) if n > 1 else rng.integers(2)
        if kind == 0:
            gates.append(H(int(rng.integers(n))))
        elif kind == 1:
            gates.append(S(int(rng.integers(n))))
        else:
            c, t = rng.choice(n, size=2, replace=False)
            gates.append(CNOT(int(c), int(t)))
    return CliffordCircuit(n, tuple(gates))


def random_stabilizer_group(n: int, rng: np.random.Generator, num_gates: int | None = None) -> StabilizerGroup:
    """Stabilizer state prepared by a random H/S/CNOT circuit on a random basis state."""
    if num_gates is None:
        num_gates = int(rng.integers(0, 4 * n * n + 4))
    base = basis_state_group([int(b) for b in rng.integers(0, 2, size=n)])
    return base.conjugated(random_clifford_circuit(n, num_gates, rng))


def save_enumeration_json(k: int, path: str | Path) -> None:
    Path(path).write_text(json.dumps([g.to_json() for g in all_pure_states(k)], indent=1))
