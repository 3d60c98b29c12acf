"""Classical linear codes, Tanner lifts, odd-weight parity checks and CSS assembly."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path

import numpy as np

from .f2linalg import (
    BinaryMatrix,
    FormatError,
    bits_to_int,
    in_row_span,
    kernel_basis,
    matrix_tensor,
    parity,
)


class TransformImpossibleError(ValueError):
    """Every row has even weight, so no odd pivot row exists."""


@dataclass(frozen=True)
class LinearCode:
    """The code ``ker H`` for a parity-check matrix ``H`` (rows need not be independent)."""

    parity_check: BinaryMatrix

    @property
    def length(self) -> int:
        return self.parity_check.cols

    @cached_property
    def generator(self) -> BinaryMatrix:
        return kernel_basis(self.parity_check)

    @property
    def dimension(self) -> int:
        return self.generator.rows

    def contains(self, word: int) -> bool:
        return self.parity_check.apply(word) == 0


def dual_parity_check(code: LinearCode) -> BinaryMatrix:
    """A parity-check matrix of the dual code, i.e. a generator matrix of ``code``."""
    return code.generator


def dual_tensor_parity_check(h0: BinaryMatrix, h1: BinaryMatrix) -> BinaryMatrix:
    """``h0 (x) h1``, whose kernel is the dual tensor code ``(C0^perp (x) C1^perp)^perp``."""
    return matrix_tensor(h0, h1)


def odd_weight_transform(h: BinaryMatrix) -> BinaryMatrix:
    """Add the first odd-weight row to every even-weight row.

    The kernel is unchanged and every row of the result has odd weight.
    """
    pivot = next((r for r in h.data if parity(r)), None)
    if pivot is None:
        raise TransformImpossibleError("no odd-weight row to use as pivot")
    return BinaryMatrix(h.rows, h.cols, tuple(r if parity(r) else r ^ pivot for r in h.data))


def odd_row_fraction(h: BinaryMatrix) -> Fraction:
    if h.rows == 0:
        raise ValueError("fraction undefined for a matrix with no rows")
    return Fraction(sum(parity(r) for r in h.data), h.rows)


# -- graphs ------------------------------------------------------------------


@dataclass(frozen=True)
class RegularGraph:
    """A ``degree``-regular graph given by ordered incident-edge lists per vertex."""

    num_vertices: int
    degree: int
    incidence: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "incidence", tuple(tuple(e) for e in self.incidence))
        if len(self.incidence) != self.num_vertices:
            raise ValueError("one incidence list per vertex required")
        counts: dict[int, int] = {}
        for lst in self.incidence:
            if len(lst) != self.degree:
                raise ValueError(f"every vertex needs exactly {self.degree} edges")
            for e in lst:
                counts[e] = counts.get(e, 0) + 1
        if any(c != 2 for c in counts.values()):
            raise ValueError("each edge id must appear in exactly two vertex lists")
        if sorted(counts) != list(range(len(counts))):
            raise ValueError("edge ids must be 0..|E|-1")
        if 2 * len(counts) != self.num_vertices * self.degree:
            raise ValueError("|E| must equal |V| d / 2")

    @property
    def num_edges(self) -> int:
        return self.num_vertices * self.degree // 2

    def endpoints(self) -> list[tuple[int, int]]:
        ends: dict[int, list[int]] = {}
        for v, lst in enumerate(self.incidence):
            for e in lst:
                ends.setdefault(e, []).append(v)
        return [tuple(ends[e]) for e in range(self.num_edges)]

    @classmethod
    def from_edges(cls, num_vertices: int, edges: list[tuple[int, int]]) -> RegularGraph:
        inc: list[list[int]] = [[] for _ in range(num_vertices)]
        for e, (a, b) in enumerate(edges):
            inc[a].append(e)
            inc[b].append(e)
        degrees = {len(x) for x in inc}
        if len(degrees) != 1:
            raise ValueError("graph is not regular")
        return cls(num_vertices, degrees.pop(), tuple(tuple(x) for x in inc))

    def dumps(self) -> str:
        lines = [f"{self.num_vertices} {self.degree}"]
        lines += [" ".join(map(str, lst)) for lst in self.incidence]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> RegularGraph:
        lines = [ln for ln in text.splitlines()]
        while lines and not lines[-1].strip():
            lines.pop()
        if not lines:
            raise FormatError("empty graph file", line=1)
        head = lines[0].split()
        if len(head) != 2 or not all(h.isdigit() for h in head):
            raise FormatError("header must be '<num_vertices> <degree>'", line=1)
        nv, d = int(head[0]), int(head[1])
        if len(lines) - 1 != nv:
            raise FormatError(f"expected {nv} vertex lines, found {len(lines) - 1}", line=len(lines))
        inc = []
        for k, ln in enumerate(lines[1:], start=2):
            parts = ln.split()
            if len(parts) != d or not all(p.isdigit() for p in parts):
                raise FormatError(f"vertex line needs {d} edge ids", line=k)
            inc.append(tuple(int(p) for p in parts))
        try:
            return cls(nv, d, tuple(inc))
        except ValueError as exc:
            raise FormatError(str(exc)) from None

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def load(cls, path: str | Path) -> RegularGraph:
        return cls.loads(Path(path).read_text())


def complete_graph(n: int) -> RegularGraph:
    edges = [(a, b) for a in range(n) for b in range(a + 1, n)]
    return RegularGraph.from_edges(n, edges)


def random_regular_graph(num_vertices: int, degree: int, seed: int, max_tries: int = 10_000) -> RegularGraph:
    """Configuration model, rejecting samples with self-loops or repeated edges."""
    if num_vertices * degree % 2 or degree >= num_vertices:
        raise ValueError("no simple regular graph with these parameters")
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(num_vertices), degree)
    for _ in range(max_tries):
        perm = rng.permutation(stubs).reshape(-1, 2)
        if np.any(perm[:, 0] == perm[:, 1]):
            continue
        pairs = {tuple(sorted(p)) for p in perm.tolist()}
        if len(pairs) != len(perm):
            continue
        return RegularGraph.from_edges(num_vertices, sorted(pairs))
    raise RuntimeError("configuration model kept producing non-simple graphs")


def tanner_lift(g: RegularGraph, h: BinaryMatrix) -> BinaryMatrix:
    """Global parity checks: row ``v*r + j`` places ``h_j`` on the edges of ``v`` in stored order."""
    if h.cols != g.degree:
        raise ValueError(f"local code has {h.cols} columns but graph degree is {g.degree}")
    rows = []
    for edges in g.incidence:
        for hr in h.data:
            acc = 0
            for pos, e in enumerate(edges):
                if (hr >> pos) & 1:
                    acc |= 1 << e
            rows.append(acc)
    return BinaryMatrix(len(rows), g.num_edges, tuple(rows))


def local_view(g: RegularGraph, word: int, vertex: int) -> int:
    """Bits of ``word`` on the edges of ``vertex``, packed in the vertex's edge order."""
    return bits_to_int((word >> e) & 1 for e in g.incidence[vertex])


def in_tanner_code(g: RegularGraph, h: BinaryMatrix, word: int) -> bool:
    return all(h.apply(local_view(g, word, v)) == 0 for v in range(g.num_vertices))


# -- CSS assembly ------------------------------------------------------------


@dataclass(frozen=True)
class CssCodePair:
    hx: BinaryMatrix
    hz: BinaryMatrix
    violations: int = field(default=-1)

    def __post_init__(self):
        if self.hx.cols != self.hz.cols:
            raise ValueError("H_X and H_Z need the same number of columns")
        if self.violations < 0:
            object.__setattr__(self, "violations", css_violations(self.hx, self.hz))

    @property
    def n(self) -> int:
        return self.hx.cols

    @property
    def is_valid(self) -> bool:
        return self.violations == 0


def css_violations(hx: BinaryMatrix, hz: BinaryMatrix) -> int:
    """Number of nonzero entries of ``H_X H_Z^T``."""
    prod = hx.matmul(hz.transpose())
    return sum(r.bit_count() for r in prod.data)


def _odd_or_keep(h: BinaryMatrix) -> BinaryMatrix:
    try:
        return odd_weight_transform(h)
    except TransformImpossibleError:
        return h


@dataclass(frozen=True)
class QuantumTannerLocal:
    h0: BinaryMatrix
    g0: BinaryMatrix
    h1: BinaryMatrix
    g1: BinaryMatrix
    local_x: BinaryMatrix
    local_z: BinaryMatrix


def quantum_tanner_local_codes(h0: BinaryMatrix, h1: BinaryMatrix) -> QuantumTannerLocal:
    """Odd-weight local checks for ``C0 [+] C1`` and ``C0^perp [+] C1^perp``.

    ``h0`` checks ``C0``; ``h1`` generates ``C1``.  Each of ``h0, g1, g0, h1``
    is made all-odd when it has an odd row, then tensored.
    """
    if h0.cols != h1.cols:
        raise ValueError("h0 and h1 must have the same number of columns")
    g0 = dual_parity_check(LinearCode(h0))  # checks C0^perp
    g1 = dual_parity_check(LinearCode(h1))  # checks C1 = rowspace(h1)
    h0o, g0o, h1o, g1o = (_odd_or_keep(m) for m in (h0, g0, h1, g1))
    local_x = _odd_or_keep(dual_tensor_parity_check(h0o, g1o))
    local_z = _odd_or_keep(dual_tensor_parity_check(g0o, h1o))
    return QuantumTannerLocal(h0o, g0o, h1o, g1o, local_x, local_z)


def assemble_quantum_tanner(g: RegularGraph, h0: BinaryMatrix, h1: BinaryMatrix) -> CssCodePair:
    """Lift both dual-tensor local codes over ``g`` (degree must be ``d**2``).

    Generic graphs lack the square-complex structure, so the CSS condition is
    recorded in ``violations`` rather than enforced.
    """
    d = h0.cols
    if g.degree != d * d:
        raise ValueError(f"graph degree {g.degree} must equal d^2 = {d * d}")
    loc = quantum_tanner_local_codes(h0, h1)
    return CssCodePair(tanner_lift(g, loc.local_x), tanner_lift(g, loc.local_z))


# -- random matrices and their odd-row and span frequencies --------------------


def _philox(seed: int, stream: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[seed & (2**64 - 1), stream]))


def sample_random_bits(shape: tuple[int, ...], seed: int, stream: int = 0) -> np.ndarray:
    """i.i.d. uniform bits from the Philox counter-based generator keyed by ``(seed, stream)``."""
    return _philox(seed, stream).integers(0, 2, size=shape, dtype=np.uint8)


def sample_random_matrix(r: int, d: int, seed: int) -> BinaryMatrix:
    if r == 0:
        return BinaryMatrix.zeros(0, d)
    return BinaryMatrix.from_array(sample_random_bits((r, d), seed))


def _pack_rows(bits: np.ndarray) -> list[list[int]]:
    d = bits.shape[-1]
    out = np.zeros(bits.shape[:-1], dtype=object)
    for j in range(d):
        out = out + (bits[..., j].astype(object) << j)
    return out.tolist()


@dataclass
class RandomCodeReport:
    r: int
    d: int
    trials: int
    seed: int
    odd_row_freq: float
    odd_row_prob: float
    all_ones_in_span_freq: float
    all_ones_span_bound: float
    odd_kernel_freq: float

    def sigma(self, p: float) -> float:
        return math.sqrt(max(p * (1 - p), 0.0) / self.trials)

    @property
    def odd_row_ok(self) -> bool:
        return abs(self.odd_row_freq - self.odd_row_prob) <= 3 * self.sigma(self.odd_row_prob) + 1e-15

    @property
    def span_bound_ok(self) -> bool:
        b = min(self.all_ones_span_bound, 1.0)
        return self.all_ones_in_span_freq <= b + 3 * self.sigma(b) + 1e-15


def verify_random_code_lemma(r: int, d: int, trials: int, seed: int) -> RandomCodeReport:
    """Monte Carlo frequencies for the two random-matrix parity events.

    Event 1: some row of a random ``r x d`` matrix has odd weight (probability
    ``1 - 2**-r``).  Event 2: the all-ones vector lies in the row space, which
    is exactly when every kernel vector is even (probability at most
    ``(2**r - 1) / 2**d``).
    """
    if d > 0 and r / d >= 0.5:
        warnings.warn(f"r/d = {r / d:.3f} is not below 1/2", stacklevel=2)
    if r == 0:
        bits = np.zeros((trials, 0, d), dtype=np.uint8)
    else:
        bits = sample_random_bits((trials, r, d), seed)
    odd_any = (bits.sum(axis=2) % 2).any(axis=1) if r else np.zeros(trials, dtype=bool)
    packed = _pack_rows(bits)
    ones = (1 << d) - 1
    in_span = sum(in_row_span(BinaryMatrix(r, d, tuple(rows)), ones) for rows in packed)
    span_freq = in_span / trials
    return RandomCodeReport(
        r=r,
        d=d,
        trials=trials,
        seed=seed,
        odd_row_freq=float(odd_any.mean()) if trials else 0.0,
        odd_row_prob=1 - 0.5**r if r else 0.0,
        all_ones_in_span_freq=span_freq,
        all_ones_span_bound=(2**r - 1) / 2**d,
        odd_kernel_freq=1 - span_freq,
    )


def exact_all_ones_span_probability(r: int, d: int) -> Fraction:
    """Brute force over all ``2**(r d)`` matrices; small sizes only."""
    if r * d > 20:
        raise ValueError("too many matrices to enumerate")
    ones = (1 << d) - 1
    hits = 0
    for code in range(1 << (r * d)):
        rows = tuple((code >> (i * d)) & ones for i in range(r))
        hits += in_row_span(BinaryMatrix(r, d, rows), ones)
    return Fraction(hits, 1 << (r * d))


def has_odd_kernel_vector(h: BinaryMatrix) -> bool:
    return not in_row_span(h, (1 << h.cols) - 1)
