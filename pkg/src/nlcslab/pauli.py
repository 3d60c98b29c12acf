"""The n-qubit Pauli group in symplectic form, and Clifford conjugation.

A Pauli operator is stored as ``i**phase * prod_j X_j**x_j Z_j**z_j`` with the
X factor to the left of the Z factor on every qubit.  Since ``XZ = -iY``, a
bare ``Y`` has ``x=z=1`` and ``phase=1``.  Bit ``j`` of ``x`` and ``z`` refers
to qubit ``j``; qubit 0 is the leftmost tensor factor (most significant bit of
a dense basis index).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .f2linalg import FormatError, popcount

_SIGN_TEXT = {0: "", 1: "+i", 2: "-", 3: "-i"}
_SIGN_PARSE = {"": 0, "+": 0, "+i": 1, "i": 1, "-": 2, "-i": 3}

_I2 = np.eye(2, dtype=complex)
_X2 = np.array([[0, 1], [1, 0]], dtype=complex)
_Y2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z2 = np.array([[1, 0], [0, -1]], dtype=complex)
SINGLE_QUBIT = {"I": _I2, "X": _X2, "Y": _Y2, "Z": _Z2}


@dataclass(frozen=True)
class PauliOperator:
    n: int
    x: int
    z: int
    phase: int = 0

    def __post_init__(self):
        if self.x >> self.n or self.z >> self.n or self.x < 0 or self.z < 0:
            raise ValueError(f"bit-vectors do not fit in {self.n} qubits")
        object.__setattr__(self, "phase", self.phase % 4)

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> PauliOperator:
        return cls(n, 0, 0, 0)

    @classmethod
    def from_label(cls, label: str) -> PauliOperator:
        """Parse text form: optional sign in {+, -, +i, -i} then letters over IXYZ."""
        s = label.strip().replace("−", "-")
        i = 0
        while i < len(s) and s[i] in "+-i":
            i += 1
        sign, body = s[:i], s[i:]
        if sign not in _SIGN_PARSE:
            raise ValueError(f"bad sign prefix {sign!r} in {label!r}")
        if not body or set(body) - set("IXYZ"):
            raise ValueError(f"bad Pauli string {label!r}")
        x = z = 0
        ny = 0
        for q, c in enumerate(body):
            if c in "XY":
                x |= 1 << q
            if c in "ZY":
                z |= 1 << q
            ny += c == "Y"
        return cls(len(body), x, z, _SIGN_PARSE[sign] + ny)

    @classmethod
    def single(cls, n: int, qubit: int, kind: str) -> PauliOperator:
        letters = ["I"] * n
        letters[qubit] = kind
        return cls.from_label("".join(letters))

    @classmethod
    def x_type(cls, bits: Sequence[int] | int, n: int | None = None) -> PauliOperator:
        v, n = _as_mask(bits, n)
        return cls(n, v, 0, 0)

    @classmethod
    def z_type(cls, bits: Sequence[int] | int, n: int | None = None) -> PauliOperator:
        v, n = _as_mask(bits, n)
        return cls(n, 0, v, 0)

    # -- basic queries -----------------------------------------------------

    @property
    def support_mask(self) -> int:
        return self.x | self.z

    @property
    def weight(self) -> int:
        return popcount(self.x | self.z)

    @property
    def support(self) -> list[int]:
        return [j for j in range(self.n) if (self.support_mask >> j) & 1]

    @property
    def num_y(self) -> int:
        return popcount(self.x & self.z)

    @property
    def sign_exp(self) -> int:
        """``k`` with operator ``= i**k`` times a tensor of Hermitian letters."""
        return (self.phase - self.num_y) % 4

    @property
    def is_hermitian(self) -> bool:
        return self.sign_exp % 2 == 0

    def letter(self, q: int) -> str:
        return "IXZY"[((self.x >> q) & 1) | (((self.z >> q) & 1) << 1)]

    def letters(self) -> str:
        return "".join(self.letter(q) for q in range(self.n))

    def unsigned(self) -> PauliOperator:
        """Same letters with sign ``+1``."""
        return PauliOperator(self.n, self.x, self.z, self.num_y)

    def is_x_type(self) -> bool:
        return self.z == 0

    def is_z_type(self) -> bool:
        return self.x == 0

    # -- algebra -----------------------------------------------------------

    def __mul__(self, other: PauliOperator) -> PauliOperator:
        return multiply(self, other)

    def __neg__(self) -> PauliOperator:
        return PauliOperator(self.n, self.x, self.z, self.phase + 2)

    def scaled(self, k: int) -> PauliOperator:
        """Multiply by ``i**k``."""
        return PauliOperator(self.n, self.x, self.z, self.phase + k)

    def restrict(self, qubits: Sequence[int]) -> PauliOperator:
        """Letters on ``qubits`` (in the given order), keeping the overall sign."""
        x = z = 0
        for k, q in enumerate(qubits):
            x |= ((self.x >> q) & 1) << k
            z |= ((self.z >> q) & 1) << k
        ny_kept = popcount(x & z)
        return PauliOperator(len(qubits), x, z, self.sign_exp + ny_kept)

    def embed(self, n: int, qubits: Sequence[int]) -> PauliOperator:
        """Place this operator on ``qubits`` of an ``n``-qubit register."""
        if len(qubits) != self.n:
            raise ValueError("qubit list length mismatch")
        x = z = 0
        for k, q in enumerate(qubits):
            x |= ((self.x >> k) & 1) << q
            z |= ((self.z >> k) & 1) << q
        return PauliOperator(n, x, z, self.phase)

    def to_matrix(self) -> np.ndarray:
        return (1j ** self.sign_exp) * _letters_matrix(self.letters())

    def __str__(self) -> str:
        return _SIGN_TEXT[self.sign_exp] + self.letters()

    def __repr__(self) -> str:
        return f"PauliOperator({str(self)!r})"


@lru_cache(maxsize=4096)
def _letters_matrix(letters: str) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for c in letters:
        out = np.kron(out, SINGLE_QUBIT[c])
    out.flags.writeable = False
    return out


def _as_mask(bits, n):
    if isinstance(bits, int):
        if n is None:
            raise ValueError("n required for int masks")
        return bits, n
    bits = list(bits)
    v = 0
    for j, b in enumerate(bits):
        if b:
            v |= 1 << j
    return v, len(bits) if n is None else n


def _check_sizes(p: PauliOperator, q: PauliOperator) -> None:
    if p.n != q.n:
        raise ValueError(f"size mismatch: {p.n} vs {q.n} qubits")


def multiply(p: PauliOperator, q: PauliOperator) -> PauliOperator:
    """Matrix product ``p q`` with the exact power of ``i``."""
    _check_sizes(p, q)
    # Z^{z1} X^{x2} = (-1)^{z1.x2} X^{x2} Z^{z1}
    phase = p.phase + q.phase + 2 * popcount(p.z & q.x)
    return PauliOperator(p.n, p.x ^ q.x, p.z ^ q.z, phase)


def symplectic_product(p: PauliOperator, q: PauliOperator) -> int:
    return (popcount(p.x & q.z) + popcount(p.z & q.x)) & 1


def commutes(p: PauliOperator, q: PauliOperator) -> bool:
    _check_sizes(p, q)
    return symplectic_product(p, q) == 0


def product(paulis: Iterable[PauliOperator], n: int) -> PauliOperator:
    out = PauliOperator.identity(n)
    for p in paulis:
        out = multiply(out, p)
    return out


# -- Clifford circuits -------------------------------------------------------

GATE_ARITY = {"H": 1, "S": 1, "CNOT": 2}


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[int, ...]

    def __post_init__(self):
        if self.name not in GATE_ARITY:
            raise ValueError(f"unknown Clifford gate {self.name!r}")
        if len(self.qubits) != GATE_ARITY[self.name]:
            raise ValueError(f"{self.name} takes {GATE_ARITY[self.name]} qubit(s)")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError("CNOT control and target must differ")

    def __str__(self) -> str:
        return " ".join([self.name, *map(str, self.qubits)])


def H(q: int) -> Gate:
    return Gate("H", (q,))


def S(q: int) -> Gate:
    return Gate("S", (q,))


def CNOT(c: int, t: int) -> Gate:
    return Gate("CNOT", (c, t))


@dataclass(frozen=True)
class CliffordCircuit:
    """Gates listed in application order (``gates[0]`` acts first)."""

    n: int
    gates: tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if any(q < 0 or q >= self.n for q in g.qubits):
                raise ValueError(f"gate {g} out of range for {self.n} qubits")

    def inverse(self) -> CliffordCircuit:
        inv: list[Gate] = []
        for g in reversed(self.gates):
            inv.extend([g] * 3 if g.name == "S" else [g])
        return CliffordCircuit(self.n, tuple(inv))

    def then(self, other: CliffordCircuit) -> CliffordCircuit:
        if other.n != self.n:
            raise ValueError("size mismatch")
        return CliffordCircuit(self.n, self.gates + other.gates)

    def depth(self) -> int:
        level = [0] * self.n
        for g in self.gates:
            d = max(level[q] for q in g.qubits) + 1
            for q in g.qubits:
                level[q] = d
        return max(level, default=0)

    def dumps(self) -> str:
        return f"{self.n}\n" + "".join(f"{g}\n" for g in self.gates)

    @classmethod
    def loads(cls, text: str) -> CliffordCircuit:
        n = None
        gates = []
        for k, ln in enumerate(text.splitlines(), start=1):
            parts = ln.split()
            if not parts or parts[0].startswith("#"):
                continue
            if n is None:
                if len(parts) != 1 or not parts[0].isdigit():
                    raise FormatError("header must be the qubit count", line=k)
                n = int(parts[0])
                continue
            try:
                g = Gate(parts[0].upper(), tuple(int(p) for p in parts[1:]))
            except ValueError as exc:
                raise FormatError(str(exc), line=k) from None
            if any(q >= n for q in g.qubits):
                raise FormatError(f"qubit index out of range for n={n}", line=k)
            gates.append(g)
        if n is None:
            raise FormatError("missing qubit count header", line=1)
        return cls(n, tuple(gates))

    @classmethod
    def load(cls, path: str | Path) -> CliffordCircuit:
        return cls.loads(Path(path).read_text())


def _gate_images(g: Gate, n: int) -> dict[tuple[str, int], PauliOperator]:
    """Images of single-qubit X and Z under ``U . U^dagger`` for the touched qubits."""
    if g.name == "H":
        (q,) = g.qubits
        return {("X", q): PauliOperator(n, 0, 1 << q), ("Z", q): PauliOperator(n, 1 << q, 0)}
    if g.name == "S":
        (q,) = g.qubits
        return {("X", q): PauliOperator(n, 1 << q, 1 << q, 1), ("Z", q): PauliOperator(n, 0, 1 << q)}
    c, t = g.qubits
    return {
        ("X", c): PauliOperator(n, (1 << c) | (1 << t), 0),
        ("Z", c): PauliOperator(n, 0, 1 << c),
        ("X", t): PauliOperator(n, 1 << t, 0),
        ("Z", t): PauliOperator(n, 0, (1 << c) | (1 << t)),
    }


def conjugate_gate(g: Gate, p: PauliOperator) -> PauliOperator:
    """Return ``U p U^dagger`` for a single gate ``U``."""
    images = _gate_images(g, p.n)
    touched = 0
    for q in g.qubits:
        touched |= 1 << q
    # factors on distinct qubits commute, so pull the touched ones to the front
    out = PauliOperator(p.n, 0, 0, p.phase)
    for q in g.qubits:
        if (p.x >> q) & 1:
            out = multiply(out, images[("X", q)])
        if (p.z >> q) & 1:
            out = multiply(out, images[("Z", q)])
    rest = PauliOperator(p.n, p.x & ~touched, p.z & ~touched, 0)
    return multiply(out, rest)


def conjugate(c: CliffordCircuit, p: PauliOperator) -> PauliOperator:
    """Return ``C p C^dagger`` for the whole circuit."""
    if c.n != p.n:
        raise ValueError(f"size mismatch: circuit on {c.n}, Pauli on {p.n} qubits")
    for g in c.gates:
        p = conjugate_gate(g, p)
    return p


def all_paulis(n: int, hermitian_signs: bool = False) -> list[PauliOperator]:
    """Every letter string on ``n`` qubits; with ``hermitian_signs`` both +/- versions."""
    out = []
    for x in range(1 << n):
        for z in range(1 << n):
            p = PauliOperator(n, x, z, popcount(x & z))
            out.append(p)
            if hermitian_signs:
                out.append(-p)
    return out
