import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from loopforge.catalog import catalog, catalog_names
from loopforge.loops import IntegersLoop
from loopforge.terms import (Gen, Node, Op, TermSyntaxError, associator, commutator,
                             count_alphas, deviation, deviation_value, enumerate_alphas,
                             eval_term, generators, parse_term, power, print_term,
                             validate_alphas)

a, b, c, d, y = (Gen(s) for s in "abcdy")


def test_parse_examples():
    assert parse_term("a") == a
    assert parse_term("(a*b)\\c") == Node(Op.LDIV, Node(Op.MUL, a, b), c)
    assert parse_term("com(a,b)") == Node(Op.LDIV, Node(Op.MUL, b, a), Node(Op.MUL, a, b))
    assert parse_term("a/b") == Node(Op.RDIV, a, b)


def test_commutator_and_associator_shape():
    assert commutator(a, b) == Node(Op.LDIV, Node(Op.MUL, b, a), Node(Op.MUL, a, b))
    assert associator(a, b, c) == Node(
        Op.LDIV, Node(Op.MUL, a, Node(Op.MUL, b, c)), Node(Op.MUL, Node(Op.MUL, a, b), c))
    assert parse_term("asc(a,b,c)") == associator(a, b, c)


def test_level_one_deviations_match_displayed_formulas():
    ab, cd = Node(Op.MUL, a, b), Node(Op.MUL, c, d)
    want1 = Node(Op.LDIV, Node(Op.MUL, associator(a, c, d), associator(b, c, d)),
                 associator(ab, c, d))
    want3 = Node(Op.LDIV, Node(Op.MUL, associator(a, b, c), associator(a, b, d)),
                 associator(a, b, cd))
    bc = Node(Op.MUL, b, c)
    want2 = Node(Op.LDIV, Node(Op.MUL, associator(a, b, d), associator(a, c, d)),
                 associator(a, bc, d))
    assert deviation([a, b, c, d], (1,)) == want1
    assert deviation([a, b, c, d], (2,)) == want2
    assert deviation([a, b, c, d], (3,)) == want3


def test_deviation_level_zero_is_associator():
    assert deviation([a, b, c], ()) == associator(a, b, c)
    assert parse_term("dev(a,b,c)") == associator(a, b, c)


def test_dev_sugar_parses():
    assert parse_term("dev(a,b,c,d;1)") == deviation([a, b, c, d], (1,))
    assert parse_term("dev(a,b,c,d,y;2,4)") == deviation([a, b, c, d, y], (2, 4))


@pytest.mark.parametrize("n,count", [(0, 1), (1, 3), (2, 12), (3, 60), (4, 360),
                                     (5, 2520), (6, 20160)])
def test_alpha_census(n, count):
    seqs = enumerate_alphas(n)
    assert len(seqs) == count == math.factorial(n + 2) // 2 == count_alphas(n)
    assert seqs == sorted(seqs)
    assert len(set(seqs)) == count
    assert all(1 <= al <= k + 2 for s in seqs for k, al in enumerate(s, start=1))


def test_alpha_examples():
    assert enumerate_alphas(0) == [()]
    assert enumerate_alphas(1) == [(1,), (2,), (3,)]


@pytest.mark.parametrize("bad", [(0,), (4,), (1, 5), (-1,)])
def test_invalid_alphas(bad):
    with pytest.raises(ValueError):
        validate_alphas(bad)


def test_negative_level_rejected():
    with pytest.raises(ValueError):
        enumerate_alphas(-1)


def test_deviation_arity_mismatch():
    with pytest.raises(ValueError):
        deviation([a, b, c], (1,))


def test_power_is_left_nested():
    assert power(y, 1) == y
    assert power(y, 3) == Node(Op.MUL, Node(Op.MUL, y, y), y)
    assert eval_term(power(y, 5), {"y": 1}, IntegersLoop()) == 5


def test_eval_trivial_examples():
    Q8 = catalog("Q8")
    for x in range(8):
        assert eval_term(parse_term("a\\a"), {"a": x}, Q8) == Q8.identity
    assert eval_term(commutator(y, y), {"y": 7}, IntegersLoop()) == 0


def test_unbound_generator():
    with pytest.raises(KeyError):
        eval_term(parse_term("a*b"), {"a": 0}, catalog("Z_2"))


def test_q8_commutator_i_j():
    Q8 = catalog("Q8")
    v = eval_term(commutator(a, b), {"a": Q8.element("i"), "b": Q8.element("j")}, Q8)
    assert Q8.names[v] == "-1"


def test_o16_associator_basis_units():
    O = catalog("O16")
    env = {"a": O.element("e1"), "b": O.element("e2"), "c": O.element("e3")}
    assert O.names[eval_term(associator(a, b, c), env, O)] == "-1"


@pytest.mark.parametrize("name", ["Z_4", "V4", "S3", "D4", "Q8", "Z_6"])
def test_group_commutator_oracle(name):
    L = catalog(name)
    t = oracles.table_of(L)
    for x in range(L.order):
        for z in range(L.order):
            assert eval_term(commutator(a, b), {"a": x, "b": z}, L) == \
                oracles.group_commutator(t, x, z)


@pytest.mark.parametrize("name", ["Z_4", "V4", "S3", "D4", "Q8"])
@pytest.mark.parametrize("level", [0, 1, 2])
def test_deviations_vanish_in_groups(name, level):
    L = catalog(name)
    n = level + 3
    grids = [g.ravel() for g in np.meshgrid(*[np.arange(L.order)] * n, indexing="ij")]
    for al in enumerate_alphas(level):
        assert (deviation_value(L, grids, al) == L.identity).all()


@pytest.mark.parametrize("name", ["LS5", "O16", "M(S3,2)", "S3"])
@pytest.mark.parametrize("level", [1, 2])
def test_vectorized_deviation_matches_term_evaluation(name, level):
    L = catalog(name)
    rng = np.random.default_rng(level)
    gens = [Gen(f"x{k}") for k in range(level + 3)]
    for al in enumerate_alphas(level):
        t = deviation(gens, al)
        for _ in range(20):
            xs = [int(v) for v in rng.integers(0, L.order, level + 3)]
            env = {g.name: v for g, v in zip(gens, xs)}
            assert eval_term(t, env, L) == deviation_value(L, xs, al)


def test_deviation_nontrivial_somewhere():
    # sanity: deviations are not identically trivial in a non-Moufang loop
    L = catalog("LS5")
    n = 4
    grids = [g.ravel() for g in np.meshgrid(*[np.arange(L.order)] * n, indexing="ij")]
    assert any((deviation_value(L, grids, al) != L.identity).any() for al in enumerate_alphas(1))


@pytest.mark.parametrize("name", [n for n in catalog_names() if catalog(n).order <= 16])
def test_identity_argument_kills_level_one(name):
    L = catalog(name)
    e = L.identity
    n = 4
    grids = [g.ravel() for g in np.meshgrid(*[np.arange(L.order)] * n, indexing="ij")]
    has_e = np.zeros(grids[0].shape, bool)
    for g in grids:
        has_e |= g == e
    for al in enumerate_alphas(1):
        v = deviation_value(L, [g[has_e] for g in grids], al)
        assert (v == e).all()


# ----------------------------------------------------------------------------
# printing and parsing

names = st.sampled_from(["a", "b", "x1", "Y_2", "z"])


def trees(depth):
    if depth == 0:
        return names.map(Gen)
    sub = trees(depth - 1)
    return st.one_of(
        names.map(Gen),
        st.builds(Node, st.sampled_from(list(Op)), sub, sub),
    )


@settings(max_examples=300, deadline=None)
@given(trees(8))
def test_print_parse_round_trip(t):
    text = print_term(t)
    assert parse_term(text) == t
    assert print_term(parse_term(text)) == text


def test_print_omits_top_parens():
    assert print_term(parse_term("(a*b)")) == "a*b"
    assert print_term(parse_term("(a*b)/c")) == "(a*b)/c"


def test_generators():
    assert generators(parse_term("com(a,(b*c))")) == {"a", "b", "c"}


@pytest.mark.parametrize("text", ["", "(a*b", "a*b*c", "a+b", "com(a)", "dev(a,b,c,d;5)",
                                  "1a", "a b", "(a*b))", "asc(a,b)"])
def test_syntax_errors(text):
    with pytest.raises((TermSyntaxError, ValueError)):
        parse_term(text)


def test_syntax_error_has_position():
    with pytest.raises(TermSyntaxError) as info:
        parse_term("(a*b")
    assert info.value.pos >= 0
