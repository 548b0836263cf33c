import random

import pytest
from hypothesis import given, settings, strategies as st

from daggereq import (
    ConjPolynomial,
    Diagram,
    GaussianInt,
    GaussianIntegerRing,
    ComplexFloatRing,
    Interpretation,
    InterpretationError,
    Monomial,
    ObjectVar,
    Tensor,
    all_boxes_monomial,
    compile_term,
    denote,
    denote_naive,
    find_witness,
    interpretation_to_text,
    iso_count,
    iso_count_semantic,
    m_interpretation,
    mirror,
    parse_interpretation,
    parse_signature,
    parse_term,
    random_interpretation,
)
from daggereq.signature import int_translate

import genutil

A, B, X = ObjectVar("A"), ObjectVar("B"), ObjectVar("X")
gauss = GaussianIntegerRing()


def x(b, conj=False):
    return ConjPolynomial.variable(b, conjugated=conj)


def test_tensor_dagger_swaps_index_blocks_and_conjugates():
    t = Tensor((2,), (3,), {(0, 2): GaussianInt(1, 5), (1, 0): GaussianInt(2, 0)})
    td = t.dagger(gauss)
    assert td.cod_dims == (3,) and td.dom_dims == (2,)
    assert td.entries == {(2, 0): GaussianInt(1, -5), (0, 1): GaussianInt(2, 0)}
    assert td.dagger(gauss).entries == t.entries
    with pytest.raises(InterpretationError):
        Tensor((2,), (), {(5,): GaussianInt(1, 0)}).check()


def test_interpretation_check_verifies_dagger_pairs():
    sig = parse_signature("object A\nmorphism h : A -> A")
    h = sig.morphism("h")
    good = Interpretation(gauss, {A: 1}, {
        h: Tensor((1,), (1,), {(0, 0): GaussianInt(0, 1)}),
        h.dagger(): Tensor((1,), (1,), {(0, 0): GaussianInt(0, -1)}),
    })
    good.check()
    bad = Interpretation(gauss, {A: 1}, {
        h: Tensor((1,), (1,), {(0, 0): GaussianInt(0, 1)}),
        h.dagger(): Tensor((1,), (1,), {(0, 0): GaussianInt(0, 1)}),
    })
    with pytest.raises(InterpretationError):
        bad.check()


def test_m_interpretation_of_the_worked_reference(worked):
    sig, _, tM = worked
    m = compile_term(tM, sig)
    interp = m_interpretation(m)
    assert interp.space == {A: 3, B: 2}
    f = m.box_labels[1]
    g = m.box_labels[0]
    # boxes: b0 = g, b1 = f, b2 = f-dagger; A-wires w1,w2,w3; B-wires w0,w4
    assert interp.matrix[f].entries == {(1, 2, 0): x(1), (1, 2, 1): x(2, True)}
    assert interp.matrix[g].entries == {(0, 0, 0, 1): x(0)}
    assert interp.matrix[f.dagger()].entries == {
        (0, 1, 2): x(1, True), (1, 1, 2): x(2)}
    assert interp.matrix[g.dagger()].entries == {(0, 1, 0, 0): x(0, True)}
    interp.check()


def test_worked_example_coefficient_is_one(worked):
    sig, tN, tM = worked
    n, m = compile_term(tN, sig), compile_term(tM, sig)
    value = denote(n, m_interpretation(m))
    assert value.coefficient(all_boxes_monomial(m)) == 1
    assert iso_count_semantic(n, m) == 1
    assert iso_count_semantic(m, n) == 1


def test_two_disjoint_loops_have_two_automorphisms():
    sig = parse_signature("object A\nmorphism h : A -> A")
    d = compile_term(parse_term("tr[A](h) x tr[A](h)", sig), sig)
    interp = m_interpretation(d)
    assert interp.space == {A: 2}
    value = denote(d, interp)
    x0, x1 = x(0), x(1)
    assert value == (x0 + x1) * (x0 + x1)
    assert value.coefficient(Monomial.of((0, False), (1, False))) == 2
    assert iso_count_semantic(d, d) == 2 == iso_count(d, d)


def test_semantic_count_is_zero_for_foreign_labels(worked):
    sig, tN, _ = worked
    n = compile_term(tN, sig)
    other = parse_signature("object X\nmorphism a : X -> X")
    d = compile_term(parse_term("tr[X](a)", other), other)
    assert iso_count_semantic(n, d) == 0
    assert iso_count_semantic(d, n) == 0
    empty = Diagram((), (), (), ())
    assert iso_count_semantic(empty, empty) == 1
    assert iso_count_semantic(d, empty) == 0
    assert iso_count_semantic(empty, d) == 0


def test_semantic_count_requires_simple_diagrams():
    loop = Diagram((), (), (), (), ((A, 1),))
    with pytest.raises(InterpretationError):
        iso_count_semantic(loop, loop)
    with pytest.raises(InterpretationError):
        m_interpretation(loop)


def test_m_interpretation_merges_parallel_scalar_boxes():
    sig = genutil.gen_signature()
    d = compile_term(parse_term("s ; s", sig), sig)
    interp = m_interpretation(d)
    s = d.box_labels[0]
    assert interp.matrix[s].entries == {(): x(0) + x(1)}
    # the value is (x0 + x1)^2 and the square-free coefficient is 2
    assert iso_count_semantic(d, d) == 2


def test_trivial_cycles_multiply_by_the_dimension():
    sig = parse_signature("object A\nmorphism h : A -> A")
    d = compile_term(parse_term("tr[A](id[A]) ; tr[A](id[A])", sig), sig)
    for dim in (0, 1, 2, 5):
        interp = random_interpretation(sig, {A: dim}, gauss, seed=1)
        assert denote(d, interp) == GaussianInt(dim * dim, 0)
        assert denote_naive(d, interp) == GaussianInt(dim * dim, 0)
    empty = Diagram((), (), (), ())
    interp = random_interpretation(sig, {A: 3}, gauss, seed=1)
    assert denote(empty, interp) == GaussianInt(1, 0)


def test_denote_handles_wires_looping_a_single_box():
    sig = parse_signature("object A\nmorphism h : A -> A")
    d = compile_term(parse_term("tr[A](h)", sig), sig)
    interp = random_interpretation(sig, {A: 3}, gauss, seed=9)
    h = interp.matrix[int_translate(sig)[0].morphism("h")]
    expected = gauss.zero
    for i in range(3):
        expected = gauss.add(expected, h.entries[(i, i)])
    assert denote(d, interp) == expected == denote_naive(d, interp)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 9), st.integers(1, 3))
def test_denote_agrees_with_the_naive_sum(seed, dim):
    rng = random.Random(seed)
    sig = genutil.gen_signature()
    d = genutil.random_simple_diagram(rng, sig, max_boxes=3, max_wires=6)
    interp = random_interpretation(sig, dim, gauss, seed=seed)
    assert denote(d, interp) == denote_naive(d, interp)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_mirror_denotes_the_conjugate(seed):
    rng = random.Random(seed)
    sig = genutil.gen_signature()
    d = genutil.random_simple_diagram(rng, sig)
    interp = random_interpretation(sig, rng.randint(1, 3), gauss, seed=seed)
    assert denote(mirror(d), interp) == denote(d, interp).conjugate()


def test_random_interpretation_is_seed_deterministic():
    sig = genutil.gen_signature()
    a = random_interpretation(sig, {A: 2, B: 3}, gauss, seed=11)
    b = random_interpretation(sig, {A: 2, B: 3}, gauss, seed=11)
    c = random_interpretation(sig, {A: 2, B: 3}, gauss, seed=12)
    f = sig.morphism("f")
    assert a.matrix[f].entries == b.matrix[f].entries
    assert a.matrix[f].entries != c.matrix[f].entries
    a.check()
    with pytest.raises(InterpretationError):
        random_interpretation(sig, {A: 2}, gauss, seed=0)  # B missing
    starred = genutil.starred_signature()
    with pytest.raises(InterpretationError):
        random_interpretation(starred, 2, gauss, seed=0)


def test_find_witness_separates_loop_counts():
    sig = parse_signature("object A")
    one = Diagram((), (), (), (), ((A, 1),))
    empty = Diagram((), (), (), ())
    w = find_witness(one, empty, {A: 2}, gauss, trials=5, seed=0)
    assert w is not None and w.trial == 0
    assert w.value_a == GaussianInt(2, 0)
    assert w.value_b == GaussianInt(1, 0)


def test_find_witness_gives_up_on_equal_diagrams(worked):
    sig, tN, tM = worked
    n, m = compile_term(tN, sig), compile_term(tM, sig)
    assert find_witness(n, m, 2, gauss, trials=5, seed=3) is None


def test_witness_over_floats_uses_relative_comparison(pare):
    sig, t1, t2 = pare
    d1, d2 = compile_term(t1, sig), compile_term(t2, sig)
    ring = ComplexFloatRing()
    w = find_witness(d1, d2, 3, ring, trials=50, seed=0)
    assert w is not None
    assert abs(complex(w.value_a) - complex(w.value_b)) > 1e-6


def test_interpretation_text_round_trip():
    sig = parse_signature("object A\nobject B\nmorphism f : B -> A x A")
    interp = random_interpretation(sig, {A: 2, B: 2}, gauss, seed=4)
    text = interpretation_to_text(interp)
    assert "dim A = 2" in text and "dim B = 2" in text
    again = parse_interpretation(text, sig, gauss)
    assert again.space == interp.space
    f = sig.morphism("f")
    assert again.matrix[f].entries == interp.matrix[f].entries
    assert again.matrix[f.dagger()].entries == interp.matrix[f.dagger()].entries


def test_interpretation_text_round_trip_float():
    sig = parse_signature("object A\nmorphism h : A -> A")
    ring = ComplexFloatRing()
    interp = random_interpretation(sig, {A: 3}, ring, seed=8)
    again = parse_interpretation(interpretation_to_text(interp), sig, ring)
    h = sig.morphism("h")
    assert again.matrix[h].entries == interp.matrix[h].entries


def test_witness_files_replay_to_the_same_values(pare):
    sig, t1, t2 = pare
    d1, d2 = compile_term(t1, sig), compile_term(t2, sig)
    w = find_witness(d1, d2, 3, gauss, trials=100, seed=0)
    assert w is not None
    text = interpretation_to_text(w.interpretation)
    replayed = parse_interpretation(text, int_translate(sig)[0], gauss)
    assert denote(d1, replayed) == w.value_a
    assert denote(d2, replayed) == w.value_b


def test_parse_interpretation_errors():
    sig = parse_signature("object A\nmorphism h : A -> A")
    with pytest.raises(Exception):
        parse_interpretation("h[0|0] = 1+0i", sig, gauss)  # no dim line
    from daggereq import ParseError
    with pytest.raises(ParseError):
        parse_interpretation("dim A = x", sig, gauss)
    with pytest.raises(ParseError):
        parse_interpretation("dim A = 2\nq[0|0] = 1+0i", sig, gauss)
    with pytest.raises(ParseError):
        parse_interpretation("dim A = 2\nh[0;0] = 1+0i", sig, gauss)
    with pytest.raises(ParseError):
        parse_interpretation("dim A = 2\nh[0|0] = banana", sig, gauss)
