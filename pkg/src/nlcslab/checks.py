"""The full verification suite behind ``nlcslab verify-all``.

Each check records an observed value, a reference value, a comparison and a
tolerance.  ``perturb`` shifts reference values by name prefix so the harness
itself can be tested.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from . import dense
from .codes import (
    complete_graph,
    odd_row_fraction,
    odd_weight_transform,
    sample_random_matrix,
    tanner_lift,
    verify_random_code_lemma,
)
from .f2linalg import BinaryMatrix, kernel_basis, parity
from .hamiltonian import (
    PI8,
    SIN2_PI8,
    CssHamiltonian,
    energy_dense,
    energy_stabilizer,
    local_bound_table,
    min_energy_over_stabilizers,
    nlcs_certificate,
    rotated_local_term,
    spectrum_deviation,
    zero_hamiltonian,
)
from .pauli import PauliOperator, all_paulis
from .rotstates import (
    fidelity,
    normal_form,
    random_rotated_circuit,
    reduced_state_one_rotation,
    simulate_dense,
    verify_one_rotation_bound,
)
from .stabilizer import (
    all_pure_states,
    overlap_magnitude,
    random_clifford_circuit,
    random_stabilizer_group,
    reduced_density,
    to_dense,
)

COS2_PI8 = math.cos(PI8) ** 2
INV_SQRT2 = 1 / math.sqrt(2)


@dataclass
class CheckResult:
    check: str
    params: dict
    observed: float
    bound: float
    relation: str  # "eq", "ge" (observed >= bound - tol) or "le"
    tol: float

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.observed):
            return False
        if self.relation == "eq":
            return abs(self.observed - self.bound) <= self.tol
        if self.relation == "ge":
            return self.observed >= self.bound - self.tol
        return self.observed <= self.bound + self.tol

    def record(self, digits: int = 12) -> dict:
        return {
            "check": self.check,
            "params": self.params,
            "observed": _sig(self.observed, digits),
            "bound": _sig(self.bound, digits),
            "relation": self.relation,
            "tol": self.tol,
            "pass": self.passed,
        }


def _sig(x: float, digits: int) -> float:
    return float(f"{x:.{digits}g}")


@dataclass
class SuiteConfig:
    seed: int = 0
    dense_cutoff: int = dense.DENSE_CUTOFF
    enum_cutoff: int = 4
    perturb: dict[str, float] = field(default_factory=dict)
    rotation_trials: int = 2000


# -- individual check groups -------------------------------------------------


def single_qubit_energies() -> Iterator[CheckResult]:
    s = 1 / math.sqrt(2)
    states = {
        "0": ([1, 0], SIN2_PI8),
        "1": ([0, 1], COS2_PI8),
        "+": ([s, s], COS2_PI8),
        "-": ([s, -s], SIN2_PI8),
        "y+": ([s, 1j * s], 0.5),
        "y-": ([s, -1j * s], 0.5),
    }
    h = zero_hamiltonian(1)
    for name, (vec, want) in states.items():
        e = energy_dense(np.array(vec, dtype=complex), h)
        yield CheckResult(f"single_qubit_energy[{name}]", {"state": name}, e, want, "eq", 1e-12)


def projector_identities(k_max: int = 6) -> Iterator[CheckResult]:
    for k in range(1, k_max + 1):
        full = (1 << k) - 1
        hk = np.array([[1.0 + 0j]])
        xhx = np.array([[1.0 + 0j]])
        flip = -dense.HADAMARD[::-1, ::-1]  # -X H X
        for _ in range(k):
            hk = np.kron(hk, dense.HADAMARD)
            xhx = np.kron(xhx, flip)
        eye = np.eye(1 << k)
        for kind, s, ref in (
            ("X", PauliOperator(k, full, 0), (eye - hk) / 2),
            ("Z", PauliOperator(k, 0, full), (eye - xhx) / 2),
        ):
            dev = float(np.linalg.norm(rotated_local_term(s, PI8) - ref))
            yield CheckResult(f"projector_identity[k={k},{kind}]", {"k": k, "kind": kind}, dev, 0.0, "le", 1e-13)


def local_bounds(cfg: SuiteConfig) -> Iterator[CheckResult]:
    rows = local_bound_table(min(4, cfg.enum_cutoff), PI8, cfg.enum_cutoff)
    for r in rows:
        yield CheckResult(f"local_bound[k={r.k},{r.kind}]", {"k": r.k, "kind": r.kind}, r.min_energy, r.bound, "eq", 1e-12)
    for r in rows:
        if r.kind != "X":
            continue
        if r.k % 2:
            yield CheckResult(f"hadamard_overlap[k={r.k}]", {"k": r.k}, r.hadamard_max, INV_SQRT2, "le", 1e-12)
        else:
            yield CheckResult(f"hadamard_overlap[k={r.k}]", {"k": r.k}, r.hadamard_max, 1.0, "eq", 1e-12)


def overlap_geometry(n: int = 2) -> Iterator[CheckResult]:
    states = all_pure_states(n)
    allowed = [0.0] + [2.0 ** (-m / 2) for m in range(1, n + 1)]
    worst = 0.0
    off_grid = 0
    for a, b in itertools.product(states, repeat=2):
        v = overlap_magnitude(a, b)
        if v < 1 - 1e-12:
            worst = max(worst, v)
            off_grid += min(abs(v - x) for x in allowed) > 1e-12
    yield CheckResult(f"overlap_max[n={n}]", {"n": n, "pairs": len(states) ** 2}, worst, INV_SQRT2, "le", 1e-12)
    yield CheckResult(f"overlap_values[n={n}]", {"n": n}, float(off_grid), 0.0, "eq", 0.0)


def reduced_state_oracle(k: int = 2) -> tuple[float, int]:
    """Largest Frobenius gap between group-formula marginals and dense partial traces."""
    worst = 0.0
    count = 0
    subsets = [list(c) for r in range(1, k) for c in itertools.combinations(range(k), r)]
    for g in all_pure_states(k):
        v = to_dense(g)
        for a in subsets:
            gap = float(np.linalg.norm(reduced_density(g, a) - dense.partial_trace(v, a, k)))
            worst = max(worst, gap)
            count += 1
    return worst, count


def reduced_states(k: int = 2) -> Iterator[CheckResult]:
    worst, count = reduced_state_oracle(k)
    yield CheckResult(f"reduced_state[k={k}]", {"k": k, "cases": count}, worst, 0.0, "le", 1e-10)


def odd_term_floor(cfg: SuiteConfig) -> Iterator[CheckResult]:
    rng = np.random.default_rng([cfg.seed, 35])
    n = 6
    for w in (1, 3, 5):
        lo = math.inf
        for _ in range(200):
            qs = rng.choice(n, size=w, replace=False)
            mask = sum(1 << int(q) for q in qs)
            term = PauliOperator(n, mask, 0) if rng.random() < 0.5 else PauliOperator(n, 0, mask)
            h = CssHamiltonian(n, (term,))
            lo = min(lo, energy_stabilizer(random_stabilizer_group(n, rng), h))
        yield CheckResult(f"odd_term_floor[w={w}]", {"n": n, "weight": w, "samples": 200}, lo, SIN2_PI8, "ge", 1e-12)


def random_css_terms(n: int, rng: np.random.Generator) -> CssHamiltonian:
    """Commuting X/Z terms: random X checks, Z checks drawn from their orthogonal complement.

    At least one term has odd weight.
    """
    while True:
        rx = int(rng.integers(1, n))
        hx = [int(rng.integers(1, 1 << n)) for _ in range(rx)]
        comp = kernel_basis(BinaryMatrix(rx, n, tuple(hx))).data
        rz = int(rng.integers(1, n + 1))
        hz = []
        for _ in range(rz):
            v = 0
            for b in comp:
                if rng.random() < 0.5:
                    v ^= b
            if v:
                hz.append(v)
        terms = [PauliOperator(n, r, 0) for r in hx] + [PauliOperator(n, 0, r) for r in hz]
        if any(parity(t.x | t.z) for t in terms):
            return CssHamiltonian(n, tuple(terms))


def certificates(cfg: SuiteConfig, trials: int = 5, n: int = 3) -> Iterator[CheckResult]:
    rng = np.random.default_rng([cfg.seed, 31])
    for i in range(trials):
        h = random_css_terms(n, rng)
        alpha, eps = nlcs_certificate(h, validate=False)
        lo, _ = min_energy_over_stabilizers(h, cfg.enum_cutoff)
        params = {"n": n, "trial": i, "terms": [str(s) for s in h.terms], "alpha": str(alpha)}
        yield CheckResult(f"certificate[{i}]", params, lo, eps, "ge", 1e-12)


def odd_transform_kernels(cfg: SuiteConfig, trials: int = 20, d: int = 10) -> Iterator[CheckResult]:
    mismatches = 0
    done = 0
    for i in range(trials):
        h = sample_random_matrix(3, d, seed=cfg.seed * 1000 + i)
        if not any(parity(r) for r in h.data):
            continue
        t = odd_weight_transform(h)
        for v in range(1 << d):
            mismatches += (h.apply(v) == 0) != (t.apply(v) == 0)
        mismatches += sum(1 for r in t.data if not parity(r))
        done += 1
    yield CheckResult("odd_transform_kernel", {"d": d, "matrices": done}, float(mismatches), 0.0, "eq", 0.0)


def tanner_fraction(cfg: SuiteConfig) -> Iterator[CheckResult]:
    g = complete_graph(4)
    worst = 0.0
    for i in range(10):
        h = sample_random_matrix(2, 3, seed=cfg.seed * 100 + i)
        if h.is_zero():
            continue
        worst = max(worst, abs(float(odd_row_fraction(tanner_lift(g, h)) - odd_row_fraction(h))))
    yield CheckResult("tanner_odd_fraction[K4]", {"graph": "K4"}, worst, 0.0, "eq", 0.0)


def random_code_frequencies(cfg: SuiteConfig) -> Iterator[CheckResult]:
    for r, d in ((2, 8), (3, 8)):
        rep = verify_random_code_lemma(r, d, 10_000, cfg.seed)
        p = rep.odd_row_prob
        yield CheckResult(
            f"odd_row_frequency[r={r},d={d}]", {"r": r, "d": d, "trials": rep.trials},
            rep.odd_row_freq, p, "eq", 3 * rep.sigma(p) + 1e-15,
        )
        b = rep.all_ones_span_bound
        yield CheckResult(
            f"all_ones_span_frequency[r={r},d={d}]", {"r": r, "d": d, "trials": rep.trials},
            rep.all_ones_in_span_freq, b, "le", 3 * rep.sigma(b) + 1e-15,
        )


def one_rotation(cfg: SuiteConfig) -> Iterator[CheckResult]:
    for n in (1, 2, 3, 4):
        rep = verify_one_rotation_bound(n, cfg.rotation_trials, cfg.seed)
        params = {"n": n, "trials": rep.trials}
        yield CheckResult(f"one_rotation_bound[n={n}]", params, rep.min_energy, rep.bound, "ge", 1e-9)
        yield CheckResult(f"obstruction_unique[n={n}]", params, float(rep.max_obstructions), 1.0, "le", 0.0)
        yield CheckResult(f"one_rotation_formula[n={n}]", dict(params, dense=rep.dense_checked), rep.max_dense_gap, 0.0, "le", 1e-10)


def one_rotation_marginal_grid(thetas: int = 8) -> float:
    """Exhaustive two-qubit comparison of the one-rotation marginal formula with dense partial traces."""
    paulis = [p for p in all_paulis(2, hermitian_signs=True) if p.weight]
    worst = 0.0
    for g in all_pure_states(2):
        base = to_dense(g)
        for p in paulis:
            for th in np.linspace(-math.pi, math.pi, thetas, endpoint=False):
                v = dense.apply_pauli_rotation(th, p, base)
                for a in ([0], [1]):
                    gap = np.linalg.norm(reduced_state_one_rotation(g, float(th), p, a) - dense.partial_trace(v, a, 2))
                    worst = max(worst, float(gap))
    return worst


def normal_forms(cfg: SuiteConfig, circuits: int = 100) -> Iterator[CheckResult]:
    rng = np.random.default_rng([cfg.seed, 36])
    worst = 1.0
    for _ in range(circuits):
        n = int(rng.integers(1, 7))
        gates = random_rotated_circuit(n, int(rng.integers(0, 21)), rng)
        worst = min(worst, fidelity(normal_form(n, gates).to_dense(), simulate_dense(n, gates)))
    yield CheckResult("normal_form_fidelity", {"circuits": circuits}, worst, 1.0, "ge", 1e-10)


def random_hamiltonian(n: int, rng: np.random.Generator) -> CssHamiltonian:
    m = int(rng.integers(1, 2 * n + 1))
    terms = []
    for _ in range(m):
        x, z = 0, 0
        while not (x | z):
            x, z = int(rng.integers(1 << n)), int(rng.integers(1 << n))
        terms.append(PauliOperator(n, x, z, (x & z).bit_count() + 2 * int(rng.integers(2))))
    return CssHamiltonian(n, tuple(terms), float(rng.choice([0.0, PI8])))


def spectra(cfg: SuiteConfig, pairs: int = 5) -> Iterator[CheckResult]:
    rng = np.random.default_rng([cfg.seed, 22])
    for i in range(pairs):
        n = int(rng.integers(2, 7))
        h = random_hamiltonian(n, rng)
        c = random_clifford_circuit(n, int(rng.integers(1, 4 * n)), rng)
        yield CheckResult(f"spectrum_invariance[{i}]", {"n": n, "gates": len(c.gates)}, spectrum_deviation(h, c), 0.0, "le", 1e-9)
    n = 4
    d_all = np.array([[1.0 + 0j]])
    for _ in range(n):
        d_all = np.kron(d_all, dense.y_rotation(PI8))
    dev = spectrum_deviation(zero_hamiltonian(n, 0.0), d_all)
    yield CheckResult("spectrum_invariance[D]", {"n": n}, dev, 0.0, "le", 1e-9)


GROUPS: dict[str, Callable[[SuiteConfig], Iterator[CheckResult]]] = {
    "single_qubit": lambda cfg: single_qubit_energies(),
    "projector": lambda cfg: projector_identities(min(6, cfg.dense_cutoff)),
    "local_bound": local_bounds,
    "overlap": lambda cfg: overlap_geometry(2),
    "reduced_state": lambda cfg: reduced_states(2),
    "odd_term": odd_term_floor,
    "certificate": certificates,
    "odd_transform": odd_transform_kernels,
    "tanner": tanner_fraction,
    "random_code": random_code_frequencies,
    "one_rotation": one_rotation,
    "one_rotation_grid": lambda cfg: iter(
        [CheckResult("one_rotation_marginal_grid", {"n": 2, "thetas": 4}, one_rotation_marginal_grid(4), 0.0, "le", 1e-10)]
    ),
    "normal_form": normal_forms,
    "spectrum": spectra,
}


def run_suite(cfg: SuiteConfig) -> list[CheckResult]:
    out = []
    for group in GROUPS.values():
        for r in group(cfg):
            for prefix, delta in cfg.perturb.items():
                if r.check.startswith(prefix):
                    r.bound += delta
            out.append(r)
    return out
