"""States prepared by Clifford gates plus a few Pauli rotations ``exp(i theta P)``.

Every such circuit can be rewritten as ``R_t ... R_1 |phi>`` with ``|phi>`` a
stabilizer state and each ``R_j`` a rotation about a (conjugated) Pauli.
Rotations are stored in application order: ``rotations[0]`` acts first.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

from . import dense
from .f2linalg import popcount
from .hamiltonian import PI8, SIN2_PI8, rotated_local_term
from .pauli import CliffordCircuit, Gate, PauliOperator, conjugate_gate
from .stabilizer import (
    StabilizerGroup,
    all_pure_state_vectors,
    basis_state_group,
    random_stabilizer_group,
    reduced_density,
    subgroup_on,
    to_dense,
    zero_state,
)

ADVERSARIAL_THETAS = (PI8, -PI8, math.pi / 4, -math.pi / 4)


@dataclass(frozen=True)
class Rotation:
    """The gate ``exp(i theta P)``."""

    theta: float
    pauli: PauliOperator

    def __post_init__(self):
        if not self.pauli.is_hermitian:
            raise ValueError(f"rotation axis {self.pauli} is not Hermitian")


CircuitElement = Union[Gate, Rotation]


@dataclass(frozen=True)
class RotatedCliffordState:
    base: StabilizerGroup
    rotations: tuple[Rotation, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rotations", tuple(self.rotations))
        if not self.base.is_full_rank:
            raise ValueError("base must be a pure stabilizer state")
        for r in self.rotations:
            if r.pauli.n != self.base.n:
                raise ValueError("rotation on the wrong number of qubits")

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def t(self) -> int:
        return len(self.rotations)

    def to_dense(self, cutoff: int = dense.DENSE_CUTOFF) -> np.ndarray:
        v = to_dense(self.base, cutoff)
        for r in self.rotations:
            v = dense.apply_pauli_rotation(r.theta, r.pauli, v)
        return v


def normal_form(n: int, gates: Sequence[CircuitElement]) -> RotatedCliffordState:
    """Push every Clifford gate through the rotations before it, onto ``|0^n>``.

    ``U exp(i theta P) = exp(i theta U P U^dag) U``, so each Clifford gate
    conjugates the rotation axes already applied and joins the base circuit.
    """
    base: list[Gate] = []
    rots: list[Rotation] = []
    for g in gates:
        if isinstance(g, Rotation):
            if g.pauli.n != n:
                raise ValueError("rotation on the wrong number of qubits")
            rots.append(g)
        elif isinstance(g, Gate):
            if max(g.qubits) >= n:
                raise ValueError(f"gate {g} out of range for {n} qubits")
            rots = [Rotation(r.theta, conjugate_gate(g, r.pauli)) for r in rots]
            base.append(g)
        else:
            raise TypeError(f"unsupported circuit element {g!r}")
    return RotatedCliffordState(zero_state(n).conjugated(CliffordCircuit(n, tuple(base))), tuple(rots))


def simulate_dense(n: int, gates: Sequence[CircuitElement]) -> np.ndarray:
    """Gate-by-gate state vector simulation of ``gates`` on ``|0^n>``."""
    dense.check_cutoff(n)
    v = np.zeros(1 << n, dtype=complex)
    v[0] = 1.0
    for g in gates:
        if isinstance(g, Rotation):
            v = dense.apply_pauli_rotation(g.theta, g.pauli, v)
        else:
            v = dense.gate_matrix(g, n) @ v
    return v


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    return float(abs(np.vdot(a, b)) ** 2)


def random_rotated_circuit(n: int, num_gates: int, rng: np.random.Generator, p_rot: float = 0.25) -> list[CircuitElement]:
    out: list[CircuitElement] = []
    for _ in range(num_gates):
        u = rng.random()
        if u < p_rot:
            out.append(Rotation(float(rng.uniform(-math.pi, math.pi)), random_hermitian_pauli(n, rng)))
        elif u < p_rot + (1 - p_rot) / 3 or n == 1:
            out.append(Gate(str(rng.choice(["H", "S"])), (int(rng.integers(n)),)))
        else:
            c, t = rng.choice(n, size=2, replace=False)
            out.append(Gate("CNOT", (int(c), int(t))))
    return out


def random_hermitian_pauli(n: int, rng: np.random.Generator, max_weight: int | None = None) -> PauliOperator:
    """Uniform non-identity Hermitian Pauli with a random sign, optionally of bounded weight."""
    while True:
        if max_weight is None:
            x, z = int(rng.integers(1 << n)), int(rng.integers(1 << n))
        else:
            w = int(rng.integers(1, max_weight + 1))
            qs = rng.choice(n, size=min(w, n), replace=False)
            x = z = 0
            for q in qs:
                kind = int(rng.integers(1, 4))
                x |= (kind & 1) << int(q)
                z |= (kind >> 1) << int(q)
        if x | z:
            break
    p = PauliOperator(n, x, z, popcount(x & z))
    return -p if rng.random() < 0.5 else p


# -- one rotation ------------------------------------------------------------


def reduced_state_one_rotation(g: StabilizerGroup, theta: float, p: PauliOperator, qubits: Sequence[int]) -> np.ndarray:
    """Marginal on ``qubits`` of ``exp(i theta P)|phi>`` from the group of ``|phi>``.

    ``2^-|A| [sum_{h in G_A} (c^2 h + s^2 P_A h P_A) + sum_{h in G_{A,P}} i s c (P_A h - h P_A)]``
    """
    if not g.is_full_rank:
        raise ValueError("base must be a pure stabilizer state")
    qubits = list(qubits)
    k = len(qubits)
    dense.check_cutoff(k)
    c, s = math.cos(theta), math.sin(theta)
    pa = p.restrict(qubits).to_matrix()
    acc = np.zeros((1 << k, 1 << k), dtype=complex)
    for h in subgroup_on(g, qubits):
        hm = h.to_matrix()
        acc += c * c * hm + s * s * (pa @ hm @ pa)
    if s * c != 0:
        for h in subgroup_on(g, qubits, p):
            hm = h.to_matrix()
            acc += 1j * s * c * (pa @ hm - hm @ pa)
    return acc / (1 << k)


_Z1 = PauliOperator(1, 0, 1)


def _zero_term() -> np.ndarray:
    return rotated_local_term(_Z1, PI8)


def _energy_from_marginals(marginals: Sequence[np.ndarray]) -> float:
    term = _zero_term()
    return math.fsum(float(np.real(np.trace(m @ term))) for m in marginals) / len(marginals)


def zero_energy_dense(vecs: np.ndarray, n: int) -> np.ndarray:
    """Energy under the rotated ``(1/n) sum_i |1><1|_i`` for a batch of state vectors.

    The rotated Hamiltonian is ``D^dag H_0 D``, so rotate by ``D`` and read off
    the mean Hamming weight.
    """
    rotated = dense.apply_single_qubit_all(dense.y_rotation(PI8), vecs, n)
    weights = np.array([i.bit_count() for i in range(1 << n)], dtype=float) / n
    return (np.abs(rotated) ** 2) @ weights


def energy_zero_rotated(state: RotatedCliffordState, cutoff: int = dense.DENSE_CUTOFF) -> float:
    """Energy under the rotated zero Hamiltonian.

    ``t <= 1`` uses single-qubit marginals from the group; ``t >= 2`` is dense.
    """
    n = state.n
    if state.t == 0:
        return _energy_from_marginals([reduced_density(state.base, [i]) for i in range(n)])
    if state.t == 1:
        r = state.rotations[0]
        return _energy_from_marginals(
            [reduced_state_one_rotation(state.base, r.theta, r.pauli, [i]) for i in range(n)]
        )
    dense.check_cutoff(n, cutoff)
    return float(zero_energy_dense(state.to_dense(cutoff), n))


def one_rotation_bound(n: int) -> float:
    return (1 - 1 / n) * SIN2_PI8


def obstruction_qubits(g: StabilizerGroup, p: PauliOperator) -> list[int]:
    """Qubits ``i`` where ``P_i = Y``, ``+-Z_i`` stabilizes, and some element matches ``P`` off ``i`` with ``Z`` on ``i``.

    Only these qubits can have their rotated local energy driven to zero by
    a single rotation.
    """
    out = []
    for i in range(g.n):
        if p.letter(i) != "Y":
            continue
        if not g.contains(PauliOperator.single(g.n, i, "Z"), up_to_sign=True):
            continue
        if any(h.letter(0) == "Z" for h in subgroup_on(g, [i], p)):
            out.append(i)
    return out


@dataclass
class OneRotationReport:
    n: int
    trials: int
    seed: int
    bound: float
    min_energy: float
    violations: int = 0
    saturated: int = 0
    max_obstructions: int = 0
    dense_checked: int = 0
    max_dense_gap: float = 0.0
    argmin: str = ""

    @property
    def ok(self) -> bool:
        return self.violations == 0 and self.max_obstructions <= 1 and self.max_dense_gap <= 1e-10


def _sample_base(n: int, rng: np.random.Generator) -> StabilizerGroup:
    kind = int(rng.integers(3))
    if kind == 0:
        return basis_state_group([int(b) for b in rng.integers(0, 2, size=n)])
    if kind == 1:
        # product of single-qubit stabilizer states
        gens = []
        for q in range(n):
            letter = "XYZ"[int(rng.integers(3))]
            p = PauliOperator.single(n, q, letter)
            gens.append(-p if rng.random() < 0.5 else p)
        return StabilizerGroup(gens, n, validate=False)
    return random_stabilizer_group(n, rng)


def _sample_theta(rng: np.random.Generator) -> float:
    if rng.random() < 0.5:
        return float(ADVERSARIAL_THETAS[int(rng.integers(len(ADVERSARIAL_THETAS)))])
    return float(rng.uniform(-math.pi, math.pi))


def verify_one_rotation_bound(
    n: int, trials: int, seed: int = 0, dense_every: int = 10, tol: float = 1e-9
) -> OneRotationReport:
    """Sample one-rotation states and check the ``(1 - 1/n) sin^2(pi/8)`` floor.

    Every ``dense_every``-th sample is cross-checked against a dense
    simulation when ``n`` is within the dense cutoff.
    """
    rng = np.random.default_rng([seed, n, 1])
    bound = one_rotation_bound(n)
    rep = OneRotationReport(n, trials, seed, bound, math.inf)
    for i in range(trials):
        g = _sample_base(n, rng)
        p = random_hermitian_pauli(n, rng, max_weight=2 if rng.random() < 0.5 else None)
        theta = _sample_theta(rng)
        st = RotatedCliffordState(g, (Rotation(theta, p),))
        e = energy_zero_rotated(st)
        if e < rep.min_energy:
            rep.min_energy = e
            rep.argmin = f"base={[str(s) for s in g.generators]} P={p} theta={theta!r}"
        if e < bound - tol:
            rep.violations += 1
        if abs(e - bound) <= tol:
            rep.saturated += 1
        rep.max_obstructions = max(rep.max_obstructions, len(obstruction_qubits(g, p)))
        if dense_every and i % dense_every == 0 and n <= dense.DENSE_CUTOFF:
            ed = float(zero_energy_dense(st.to_dense(), n))
            rep.max_dense_gap = max(rep.max_dense_gap, abs(ed - e))
            rep.dense_checked += 1
    return rep


# -- multi-rotation evidence scan -------------------------------------------


THETA_POLICIES = ("uniform", "grid", "unrotate")


@dataclass
class ScanRow:
    n: int
    t: int
    samples: int
    theta_policy: str
    min_energy: float
    bound: float
    margin: float
    violations: int


@dataclass
class ScanConfig:
    n: int
    t: int
    samples: int = 10_000
    seed: int = 0
    policies: tuple[str, ...] = THETA_POLICIES
    pool_size: int = 4096
    tol: float = 1e-9
    batch: int = 2048


def conjectured_bound(n: int, t: int) -> float:
    return max(0.0, 1 - t / n) * SIN2_PI8


_POOLS: dict[tuple[int, int, int], np.ndarray] = {}


def base_pool(n: int, size: int, seed: int) -> np.ndarray:
    """Stabilizer state vectors: every state for ``n <= 4``, else random ones plus products."""
    key = (n, size, seed)
    if key in _POOLS:
        return _POOLS[key]
    if n <= 4:
        pool = all_pure_state_vectors(n)
    else:
        rng = np.random.default_rng([seed, n, 2])
        pool = np.array([to_dense(_sample_base(n, rng)) for _ in range(size)])
    _POOLS[key] = pool
    return pool


def _apply_rotations_batch(vecs: np.ndarray, xs, zs, signs, thetas, n: int) -> np.ndarray:
    """Apply a different rotation ``exp(i theta_s P_s)`` to each row."""
    rev, par = _index_tables(n)
    xm, zm = rev[xs], rev[zs]
    src = np.arange(1 << n)[None, :] ^ xm[:, None]
    zsign = 1 - 2 * par[zm[:, None] & src]
    ny = par_count(np.asarray(xs) & np.asarray(zs), n)
    # P = (-1)^sign i^{#Y} X^x Z^z, and (X^x Z^z v)[i] = (-1)^{z . (i ^ x)} v[i ^ x]
    pref = (1j ** ny) * (1 - 2 * signs)
    pv = pref[:, None] * zsign * np.take_along_axis(vecs, src, axis=1)
    return np.cos(thetas)[:, None] * vecs + 1j * np.sin(thetas)[:, None] * pv


@lru_cache(maxsize=None)
def _index_tables(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Bit-reversal (qubit order to dense index order) and parity of every index."""
    rev = np.array([int(f"{v:0{n}b}"[::-1], 2) for v in range(1 << n)])
    par = np.array([v.bit_count() & 1 for v in range(1 << n)])
    return rev, par


def par_count(v: np.ndarray, n: int) -> np.ndarray:
    return sum((v >> q) & 1 for q in range(n))


def _scan_policy(cfg: ScanConfig, policy: str, pool: np.ndarray) -> ScanRow:
    n, t = cfg.n, cfg.t
    rng = np.random.default_rng([cfg.seed, n, t, THETA_POLICIES.index(policy)])
    bound = conjectured_bound(n, t)
    lo = math.inf
    bad = 0
    done = 0
    while done < cfg.samples:
        b = min(cfg.batch, cfg.samples - done)
        if policy == "unrotate":
            vecs = np.zeros((b, 1 << n), dtype=complex)
            vecs[:, 0] = 1.0
            order = np.argsort(rng.random((b, n)), axis=1)[:, :t]
            for j in range(t):
                xs = 1 << order[:, j]
                vecs = _apply_rotations_batch(vecs, xs, xs, np.zeros(b, dtype=int), np.full(b, PI8), n)
        else:
            vecs = pool[rng.integers(len(pool), size=b)]
            for _ in range(t):
                xs = rng.integers(1 << n, size=b)
                zs = rng.integers(1 << n, size=b)
                zs = np.where((xs | zs) == 0, 1 + rng.integers((1 << n) - 1, size=b), zs)
                signs = rng.integers(2, size=b)
                if policy == "grid":
                    thetas = np.array(ADVERSARIAL_THETAS)[rng.integers(len(ADVERSARIAL_THETAS), size=b)]
                else:
                    thetas = rng.uniform(-math.pi, math.pi, size=b)
                vecs = _apply_rotations_batch(vecs, xs, zs, signs, thetas, n)
        e = zero_energy_dense(vecs, n)
        lo = min(lo, float(e.min()))
        bad += int(np.count_nonzero(e < bound - cfg.tol))
        done += b
    return ScanRow(n, t, cfg.samples, policy, lo, bound, lo - bound, bad)


def conjecture_scan(cfg: ScanConfig) -> list[ScanRow]:
    """Minimum rotated zero-Hamiltonian energy over sampled ``t``-rotation states.

    Violations of ``(1 - t/n) sin^2(pi/8)`` are counted and reported; the
    statement is a conjecture, so nothing here raises on a violation.
    """
    dense.check_cutoff(cfg.n)
    if cfg.t < 0:
        raise ValueError("t must be non-negative")
    for p in cfg.policies:
        if p not in THETA_POLICIES:
            raise ValueError(f"unknown theta policy {p!r}")
    pool = base_pool(cfg.n, cfg.pool_size, cfg.seed)
    rows = []
    for p in cfg.policies:
        if p == "unrotate" and cfg.t > cfg.n:
            continue
        rows.append(_scan_policy(cfg, p, pool))
    return rows


def scan_rows_json(rows: Sequence[ScanRow]) -> str:
    return json.dumps([asdict(r) for r in rows], indent=1)


def scan_rows_csv(rows: Sequence[ScanRow]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(ScanRow.__dataclass_fields__), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(asdict(r))
    return buf.getvalue()
