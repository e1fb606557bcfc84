from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zestlab.braids import (ColoredBraid, MonomialOperator, braid_generator, build_module, check_calibration,
                            format_braid_word, invariant_suite, link_invariant, load_braid_words,
                            module_cocycle_exponent, parse_braid_word, sample_triples, word_operator)
from zestlab.twisted_double import enumerate_simples, t_matrix

words = st.lists(st.tuples(st.integers(1, 2), st.sampled_from([1, -1])), max_size=6)


def test_parse_expands_powers():
    assert parse_braid_word("s1^-2 s2 s1^-1 s2") == [(1, -1), (1, -1), (2, 1), (1, -1), (2, 1)]
    assert parse_braid_word("s3^2") == [(3, 1), (3, 1)]
    assert format_braid_word(parse_braid_word("s1 s2^-1")) == "s1 s2^-1"


@pytest.mark.parametrize("bad", ["x1", "s0", "s1^0", "s1^a", "s-1"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_braid_word(bad)


def test_module_dims(G37):
    for u in range(3):
        for x in enumerate_simples(G37, u):
            m = build_module(G37, u, x)
            assert m.dim == x.qdim
            for xi, xx in enumerate(G37.elements()):
                # degree g goes to x g x^-1
                for j in range(m.dim):
                    g = m.basis[j][0]
                    assert m.basis[m.perm[xi, j]][0] == G37.conj(xx, g)


def test_untwisted_b_module_has_no_phase_under_a(G37):
    x = next(s for s in enumerate_simples(G37, 0) if s.conj_class.kind == "b" and s.irrep.params[2] == 1)
    m = build_module(G37, 0, x)
    assert m.dim == 7
    a = G37.index((1, 0))
    assert not m.exp[a].any()
    assert sorted(m.perm[a]) == list(range(7))


@pytest.mark.parametrize("u", [1, 2])
def test_module_action_cocycle(G37, u):
    M = G37.conductor
    els = G37.elements()
    for label in enumerate_simples(G37, u)[::3]:
        m = build_module(G37, u, label)
        for x, y in itertools.product(els, repeat=2):
            xi, yi, yx = G37.index(x), G37.index(y), G37.index(G37.mul(y, x))
            for j in range(m.dim):
                j1 = m.perm[xi, j]
                assert m.perm[yi, j1] == m.perm[yx, j]
                e = (m.exp[xi, j] + m.exp[yi, j1] - m.exp[yx, j]) % M
                assert e == module_cocycle_exponent(G37, u, label, y, x, m.basis[j][0]) % M


def test_trivial_colors_give_identity(G37):
    unit = enumerate_simples(G37, 0)[0]
    for i, s in [(1, 1), (2, -1)]:
        assert braid_generator([unit] * 3, i, s, G37, 0).is_identity()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2), st.lists(st.integers(0, 24), min_size=3, max_size=3), st.integers(1, 2))
def test_generator_inverse(u, idx, i):
    from zestlab.group import make_group
    G = make_group(3, 7)
    S = enumerate_simples(G, u)
    cols = [S[k] for k in idx]
    op, _ = word_operator(cols, [(i, 1), (i, -1)], G, u)
    assert op.is_identity()
    op, _ = word_operator(cols, [(i, -1), (i, 1)], G, u)
    assert op.is_identity()


def test_yang_baxter_exhaustive_u2(G37):
    S = enumerate_simples(G37, 2)
    for cols in itertools.product(S, repeat=3):
        a, _ = word_operator(cols, [(1, 1), (2, 1), (1, 1)], G37, 2)
        b, _ = word_operator(cols, [(2, 1), (1, 1), (2, 1)], G37, 2)
        assert a == b


def test_far_commutation(G37):
    rng = np.random.default_rng(3)
    S = enumerate_simples(G37, 1)
    for _ in range(15):
        cols = [S[int(k)] for k in rng.integers(0, 25, size=4)]
        for s1, s3 in itertools.product([1, -1], repeat=2):
            a, _ = word_operator(cols, [(1, s1), (3, s3)], G37, 1)
            b, _ = word_operator(cols, [(3, s3), (1, s1)], G37, 1)
            assert a == b


def test_monomial_operator_algebra():
    rng = np.random.default_rng(0)
    ops = [MonomialOperator(rng.permutation(6), rng.integers(0, 9, 6), 9) for _ in range(3)]
    a, b, c = ops
    assert (a @ b) @ c == a @ (b @ c)
    assert (a @ a.inverse()).is_identity() and (a.inverse() @ a).is_identity()
    assert np.allclose((a @ b).to_dense(), a.to_dense() @ b.to_dense())


@pytest.mark.parametrize("u", [0, 1, 2])
def test_calibration_all_pairs(G37, u):
    out = check_calibration(G37, u)
    assert out == {"unknot": 25, "twist": 25, "hopf": 625}


def test_markov_stabilization(G37):
    rng = np.random.default_rng(7)
    for u in (0, 1, 2):
        S = enumerate_simples(G37, u)
        T = t_matrix(G37, u)
        for _ in range(10):
            X, Y = (S[int(k)] for k in rng.integers(0, 25, size=2))
            hopf = ColoredBraid(2, ((1, 1), (1, 1)), (X, Y))
            for sign in (1, -1):
                stab = ColoredBraid(3, ((1, 1), (1, 1), (2, sign)), (X, Y, Y))
                assert link_invariant(stab, G37, u) == T[Y.index] ** sign * link_invariant(hopf, G37, u)
                z0 = ColoredBraid(3, stab.word, stab.colors, "zero-framed")
                assert link_invariant(z0, G37, u) == link_invariant(hopf, G37, u)


def test_zero_framing_on_kink(G37):
    for x in enumerate_simples(G37, 1):
        b = ColoredBraid(2, ((1, 1),), (x, x), "zero-framed")
        assert link_invariant(b, G37, 1) == x.qdim


def test_incompatible_coloring_rejected(G37):
    S = enumerate_simples(G37, 0)
    with pytest.raises(ValueError):
        ColoredBraid(2, ((1, 1),), (S[0], S[5]))
    with pytest.raises(ValueError):
        ColoredBraid(2, ((2, 1),), (S[0], S[0]))


def test_float_backend_matches_exact(G37):
    S = enumerate_simples(G37, 1)
    b = ColoredBraid.from_text("s1^-2 s2 s1^-1 s2", (S[20], S[9], S[20]))
    assert abs(link_invariant(b, G37, 1, backend="float") - link_invariant(b, G37, 1).to_complex()) < 1e-9


def test_braid_words_config():
    words = load_braid_words()
    assert set(words) >= {"whitehead", "borromean", "five2"}
    assert len(parse_braid_word(words["five2"]["word"])) == 6


def test_invariants_deterministic_across_workers(G37):
    a = invariant_suite(G37, 1, "w", workers=1)
    b = invariant_suite(G37, 1, "w", workers=3)
    assert a.entries == b.entries and np.array_equal(a.hist, b.hist)


def test_trivially_graded_W_unchanged(G37):
    w0 = invariant_suite(G37, 0, "w").as_dict()
    w2 = invariant_suite(G37, 2, "w").as_dict()
    g = [x.grading for x in enumerate_simples(G37, 0)]
    for (x, y), v in w0.items():
        if g[x] == g[y] == 0:
            assert np.array_equal(v, w2[(x, y)])


def test_five2_unit_is_one(G37):
    for u in range(3):
        t = invariant_suite(G37, u, "five2")
        assert t.exact(0) == 1


def test_sample_triples(G37):
    a = sample_triples(G37, 1, 40, seed=5)
    assert a == sample_triples(G37, 1, 40, seed=5)
    assert a[:25] == [(i, i, i) for i in range(25)]
    rest = a[25:]
    assert len(rest) == len(set(rest)) == 40
    graded = {x.index for x in enumerate_simples(G37, 1) if x.grading}
    assert all(set(t) & graded for t in rest)
    assert sample_triples(G37, 1, 40, seed=6) != a


def test_invariant_tensor_json_roundtrip(G37):
    from zestlab.braids import InvariantTensor
    t = invariant_suite(G37, 2, "b", sample=30, seed=1)
    back = InvariantTensor.from_json(t.to_json())
    assert back.entries == t.entries and np.array_equal(back.hist, t.hist)
    assert np.allclose(back.complex(), t.complex())
