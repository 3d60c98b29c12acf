import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nlcslab.codes import (
    CssCodePair,
    LinearCode,
    RegularGraph,
    TransformImpossibleError,
    assemble_quantum_tanner,
    complete_graph,
    dual_parity_check,
    dual_tensor_parity_check,
    exact_all_ones_span_probability,
    has_odd_kernel_vector,
    in_tanner_code,
    local_view,
    odd_row_fraction,
    odd_weight_transform,
    quantum_tanner_local_codes,
    random_regular_graph,
    sample_random_bits,
    sample_random_matrix,
    tanner_lift,
    verify_random_code_lemma,
)
from nlcslab.f2linalg import BinaryMatrix, FormatError, bits_to_int, kernel_basis, parity, span_elements

from conftest import binary_matrices

M = BinaryMatrix.from_rows
EXAMPLE_H = M([[1, 0, 0], [0, 1, 1]])


def kernel_set(h):
    return {v for v in range(1 << h.cols) if h.apply(v) == 0}


def test_dual_parity_check_examples():
    assert dual_parity_check(LinearCode(M([[1, 1]]))) == M([[1, 1]])
    assert dual_parity_check(LinearCode(BinaryMatrix.zeros(0, 3))).rows == 3
    assert dual_parity_check(LinearCode(EXAMPLE_H)) == M([[0, 1, 1]])


def test_generator_is_annihilated():
    c = LinearCode(EXAMPLE_H)
    assert c.parity_check.matmul(c.generator.transpose()).is_zero()
    assert c.dimension == 1 and c.contains(0b110) and not c.contains(0b001)


def test_dual_tensor_examples():
    assert dual_tensor_parity_check(M([[1]]), M([[1]])) == M([[1]])
    assert dual_tensor_parity_check(M([[1, 1]]), M([[1, 1]])) == M([[1, 1, 1, 1]])


@given(binary_matrices(1, 3, 1, 3), binary_matrices(1, 3, 1, 3))
def test_dual_tensor_kernel(h0, h1):
    # ker(h0 (x) h1) = (C0^perp (x) C1^perp)^perp with Ci^perp = rowspace(hi)
    t = dual_tensor_parity_check(h0, h1)
    products = set()
    for a in span_elements(h0.data):
        for b in span_elements(h1.data):
            products.add(dual_tensor_parity_check(BinaryMatrix(1, h0.cols, (a,)), BinaryMatrix(1, h1.cols, (b,))).data[0])
    assert kernel_set(t) == {v for v in range(1 << t.cols) if all(parity(v & p) == 0 for p in products)}


def test_odd_transform_examples():
    assert odd_weight_transform(EXAMPLE_H) == M([[1, 0, 0], [1, 1, 1]])
    eye = BinaryMatrix.identity(3)
    assert odd_weight_transform(eye) == eye
    assert odd_weight_transform(M([[1, 1], [1, 0]])) == M([[0, 1], [1, 0]])
    with pytest.raises(TransformImpossibleError):
        odd_weight_transform(M([[1, 1], [0, 0]]))


@given(binary_matrices(max_rows=6, max_cols=12, min_rows=1))
def test_odd_transform_preserves_kernel(h):
    if not any(parity(r) for r in h.data):
        with pytest.raises(TransformImpossibleError):
            odd_weight_transform(h)
        return
    t = odd_weight_transform(h)
    assert t.rows == h.rows
    assert all(parity(r) for r in t.data)
    assert kernel_set(t) == kernel_set(h)
    assert all(a == b for a, b in zip(h.data, t.data) if parity(a))


def test_odd_row_fraction_examples():
    assert odd_row_fraction(BinaryMatrix.identity(3)) == 1
    assert odd_row_fraction(M([[1, 1], [1, 0]])) == Fraction(1, 2)


def test_k4_lift_is_cycle_space():
    g = complete_graph(4)
    big = tanner_lift(g, M([[1, 1, 1]]))
    assert big.shape == (4, 6)
    assert kernel_basis(big).rows == 3
    assert all(r.bit_count() == 3 for r in big.data)


def test_k4_lift_with_two_row_check():
    g = complete_graph(4)
    big = tanner_lift(g, EXAMPLE_H)
    assert big.shape == (8, 6)
    v = 0
    edges = g.incidence[v]
    word = (1 << edges[1]) | (1 << edges[2])
    assert local_view(g, word, v) == bits_to_int([0, 1, 1])
    assert EXAMPLE_H.apply(local_view(g, word, v)) == 0
    bad = (1 << edges[0]) | (1 << edges[2])
    assert EXAMPLE_H.apply(local_view(g, bad, v)) != 0


def test_lift_of_empty_check():
    big = tanner_lift(complete_graph(4), BinaryMatrix.zeros(0, 3))
    assert big.shape == (0, 6)
    assert kernel_basis(big).rows == 6


def test_lift_shape_mismatch():
    with pytest.raises(ValueError):
        tanner_lift(complete_graph(4), M([[1, 1]]))


@given(st.integers(0, 10**6), binary_matrices(4, 3, 1, 3))
def test_lift_properties(seed, h):
    g = random_regular_graph(6, 3, seed)
    big = tanner_lift(g, h)
    assert big.shape == (h.rows * 6, 9)
    assert odd_row_fraction(big) == odd_row_fraction(h)
    for v in range(6):
        for j, row in enumerate(h.data):
            gr = big.data[v * h.rows + j]
            assert gr & ~sum(1 << e for e in g.incidence[v]) == 0
            assert local_view(g, gr, v) == row
    kernel = kernel_set(big)
    for w in range(1 << 9):
        assert (w in kernel) == in_tanner_code(g, h, w)


def test_random_graph_is_simple_and_regular():
    g = random_regular_graph(10, 4, seed=5)
    ends = g.endpoints()
    assert len(ends) == 20 and all(a != b for a, b in ends)
    assert len({tuple(sorted(e)) for e in ends}) == 20
    assert random_regular_graph(10, 4, seed=5) == g


def test_graph_file_round_trip_and_errors():
    g = complete_graph(4)
    assert RegularGraph.loads(g.dumps()) == g
    with pytest.raises(FormatError, match="line 3"):
        RegularGraph.loads("4 3\n0 1 2\n0 3\n1 3 5\n2 4 5\n")
    with pytest.raises(FormatError):
        RegularGraph.loads("2 1\n0\n1\n")


def test_quantum_tanner_assembly():
    h0 = M([[1, 0, 0], [0, 1, 1]])
    h1 = M([[1, 0, 1], [0, 1, 1]])
    loc = quantum_tanner_local_codes(h0, h1)
    assert all(parity(r) for r in loc.local_x.data)
    g = complete_graph(10)
    pair = assemble_quantum_tanner(g, h0, h1)
    assert isinstance(pair, CssCodePair)
    assert pair.hx.rows == loc.local_x.rows * 10
    assert odd_row_fraction(pair.hx) == odd_row_fraction(loc.local_x)
    assert pair.violations == sum(r.bit_count() for r in pair.hx.matmul(pair.hz.transpose()).data)
    with pytest.raises(ValueError):
        assemble_quantum_tanner(complete_graph(4), h0, h1)


def test_all_odd_local_rows_give_all_odd_global_rows():
    h = M([[1, 0, 0], [1, 1, 1]])
    assert odd_row_fraction(tanner_lift(complete_graph(4), h)) == 1


def test_sampler_determinism_and_mean():
    assert sample_random_matrix(3, 8, 42) == sample_random_matrix(3, 8, 42)
    assert sample_random_matrix(3, 8, 42) != sample_random_matrix(3, 8, 43)
    bits = sample_random_bits((100_000,), seed=9)
    assert abs(bits.mean() - 0.5) <= 3 * math.sqrt(0.25 / 100_000)


def test_random_code_report_r3():
    rep = verify_random_code_lemma(3, 8, 10_000, seed=3)
    assert rep.odd_row_ok and rep.span_bound_ok
    assert abs(rep.odd_row_freq - 0.875) <= 3 * rep.sigma(0.875)


def test_random_code_report_r0():
    rep = verify_random_code_lemma(0, 8, 100, seed=0)
    assert rep.odd_row_freq == 0


def test_exact_span_probability_below_bound():
    for r, d in ((1, 4), (2, 4), (2, 5), (3, 6)):
        assert exact_all_ones_span_probability(r, d) <= Fraction(2**r - 1, 2**d)


@given(binary_matrices(max_rows=4, max_cols=7, min_rows=1, min_cols=1))
def test_odd_kernel_vector_iff_all_ones_outside_rowspace(h):
    odd_in_kernel = any(parity(v) for v in kernel_set(h))
    assert has_odd_kernel_vector(h) == odd_in_kernel
    gen = kernel_basis(h)
    if gen.rows and odd_in_kernel:
        assert all(parity(r) for r in odd_weight_transform(gen).data)
    if gen.rows and not any(parity(r) for r in gen.data):
        assert not odd_in_kernel


def test_css_pair_flags_violations():
    assert CssCodePair(M([[1, 1, 0]]), M([[1, 1, 1]])).violations == 0
    assert CssCodePair(M([[1, 0, 0]]), M([[1, 1, 1]])).violations == 1
