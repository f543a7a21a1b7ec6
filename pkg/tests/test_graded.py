import math

import numpy as np
import pytest

import oracles
from conftest import SMALL, UP_TO_16
from loopforge.abelian import abelian_decomposition, diagonalize, invariant_factors
from loopforge.catalog import catalog, catalog_names
from loopforge.graded import (GradedError, GradedElement, check_akivis, check_multilinear,
                              check_representatives, class_table, graded_associator,
                              graded_bracket, graded_deviation, graded_group, graded_report,
                              report_ok)
from loopforge.loops import CayleyLoop
from loopforge.series import ca_filtration, filtration, lower_central_series


def product_group(*ns):
    """Z_n1 x Z_n2 x ... as a Cayley table, for abelian decomposition tests."""
    elems = list(np.ndindex(*ns))
    idx = {e: k for k, e in enumerate(elems)}
    table = [[idx[tuple((a + b) % n for a, b, n in zip(x, y, ns))] for y in elems] for x in elems]
    return CayleyLoop(table)


# ----------------------------------------------------------------------------
# abelian groups

@pytest.mark.parametrize("ns,want", [
    ((2, 2), [2, 2]), ((4,), [4]), ((2, 3), [6]), ((2, 4), [2, 4]), ((6, 4), [2, 12]),
    ((3, 3, 3), [3, 3, 3]), ((2, 2, 2, 2), [2, 2, 2, 2]), ((4, 6), [2, 12]), ((1,), []),
    ((9, 3), [3, 9]), ((10, 6), [2, 30]),
])
def test_invariant_factors(ns, want):
    G = product_group(*ns)
    assert sorted(invariant_factors(G)) == want
    assert sorted(invariant_factors(G)) == oracles.invariant_factors_by_order_counts(
        oracles.table_of(G))


@pytest.mark.parametrize("ns", [(2, 2), (2, 4), (6, 4), (3, 3, 3), (12,), (2, 2, 6)])
def test_generators_have_orders_and_span(ns):
    G = product_group(*ns)
    factors, gens = abelian_decomposition(G)
    t = oracles.table_of(G)
    e = G.identity

    def multiple(k, x):
        acc = e
        for _ in range(k):
            acc = t[acc][x]
        return acc

    for d, g in zip(factors, gens):
        orders = [k for k in range(1, d + 1) if multiple(k, g) == e]
        assert orders[0] == d
    # every element is a unique combination
    combos = set()
    for ks in np.ndindex(*factors):
        acc = e
        for k, g in zip(ks, gens):
            acc = t[acc][multiple(k, g)]
        combos.add(acc)
    assert len(combos) == G.order == math.prod(factors)
    assert all(factors[k + 1] % factors[k] == 0 for k in range(len(factors) - 1))


def test_diagonalize_rank_deficit():
    diag, _ = diagonalize([[2, 0], [0, 0]])
    assert diag == [2, 0]


def test_nonabelian_rejected():
    from loopforge.loops import LoopError
    with pytest.raises(LoopError):
        abelian_decomposition(catalog("S3"))


# ----------------------------------------------------------------------------
# graded components

def test_o16_components():
    G = graded_group(ca_filtration(catalog("O16"), 4))
    assert [c.order for c in G] == [8, 1, 2]
    assert [list(c.invariant_factors) for c in G] == [[2, 2, 2], [], [2]]


def test_q8_components():
    G = graded_group(ca_filtration(catalog("Q8"), 3))
    assert [list(c.invariant_factors) for c in G] == [[2, 2], [2]]


def test_cml81_components():
    G = graded_group(ca_filtration(catalog("CML81"), 3))
    assert [list(c.invariant_factors) for c in G] == [[3, 3, 3], []]


@pytest.mark.parametrize("name", UP_TO_16)
@pytest.mark.parametrize("kind", ["gamma", "ca", "naive"])
def test_components_are_abelian_with_right_order(name, kind):
    L = catalog(name)
    F = filtration(L, kind, 4)
    G = graded_group(F)
    for i, C in enumerate(G, start=1):
        assert C.order * len(F.term(i + 1).members) == len(F.term(i).members)
        assert math.prod(C.invariant_factors) == C.order
        t = C.quotient.table
        assert (t == t.T).all()
        n = C.order
        a, b, c = np.ix_(range(n), range(n), range(n))
        assert (t[t[a, b], c] == t[a, t[b, c]]).all()
        assert sorted(C.invariant_factors) == oracles.invariant_factors_by_order_counts(
            oracles.table_of(C.quotient))


def test_projection_and_lift():
    L = catalog("O16")
    G = graded_group(ca_filtration(L, 4))
    C = G.component(1)
    for c in range(C.order):
        assert C.projection[C.lift(c)] == c
    assert (G.component(3).projection[[x for x in range(16) if L.names[x] not in ("1", "-1")]]
            == -1).all()
    with pytest.raises(GradedError):
        G.element(3, "e1")
    with pytest.raises(GradedError):
        G.component(4)


def test_graded_bracket_in_q8_matches_group_commutator():
    L = catalog("Q8")
    G = graded_group(ca_filtration(L, 3))
    t = oracles.table_of(L)
    for x in range(8):
        for y in range(8):
            got = graded_bracket(G.element(1, x), G.element(1, y), G)
            assert got == G.element(2, oracles.group_commutator(t, x, y))


def test_graded_ops_on_elements():
    L = catalog("O16")
    G = graded_group(ca_filtration(L, 4))
    e1, e2, e3 = (G.element(1, s) for s in ("e1", "e2", "e3"))
    assert graded_associator(e1, e2, e3, G) == G.element(3, "-1")
    assert graded_associator(e1, e1, e3, G) == G.zero(3)
    assert graded_bracket(e1, e2, G).degree == 2
    with pytest.raises(GradedError):
        graded_deviation([e1, e2, e3], (1,), G)
    with pytest.raises(GradedError):
        G.add(e1, G.zero(3))


def test_scalar_api_agrees_with_class_table():
    from loopforge.graded import _associator, _commutator
    L = catalog("M(S3,2)")
    G = graded_group(ca_filtration(L, 4))
    T = class_table(G, _commutator, (1, 1))
    for x in G.elements(1):
        for y in G.elements(1):
            assert graded_bracket(x, y, G).coset == T[x.coset, y.coset]
    T = class_table(G, _associator, (1, 1, 1))
    for x in G.elements(1):
        for y in G.elements(1):
            for z in G.elements(1):
                assert graded_associator(x, y, z, G).coset == T[x.coset, y.coset, z.coset]


# ----------------------------------------------------------------------------
# multilinearity, representatives, Akivis

def brute_bilinear_violations(G):
    """Scalar re-check of the bracket in degree (1,1) using the element API."""
    bad = 0
    for x in G.elements(1):
        for x2 in G.elements(1):
            for y in G.elements(1):
                lhs = graded_bracket(G.add(x, x2), y, G)
                rhs = G.add(graded_bracket(x, y, G), graded_bracket(x2, y, G))
                bad += lhs != rhs
    return bad


@pytest.mark.parametrize("name", ["Q8", "O16", "M(S3,2)", "D4", "S3"])
def test_bilinear_scalar_oracle(name):
    G = graded_group(ca_filtration(catalog(name), 3))
    assert brute_bilinear_violations(G) == 0


@pytest.mark.parametrize("name", SMALL)
def test_report_is_clean_on_small_loops(name):
    G = graded_group(ca_filtration(catalog(name), 4))
    r = graded_report(G, akivis=[(1, 1, 1)])
    assert report_ok(r)
    assert not r["checks"]["bilinear"]["sampled"]
    assert not r["checks"]["trilinear"]["sampled"]
    assert not r["checks"]["deviation_multilinear"]["sampled"]
    assert not r["checks"]["representatives"]["sampled"]


def test_multilinearity_fails_for_a_non_filtration():
    # the naive "whole loop then trivial" chain of S3 has a non-abelian quotient
    from loopforge.series import Filtration
    from loopforge.loops import normal_closure
    L = catalog("S3")
    F = Filtration(L, "ca", [normal_closure(L, range(6)), normal_closure(L, [])], [False, False])
    with pytest.raises(GradedError):
        graded_group(F)


def test_checker_detects_a_broken_operation():
    from loopforge.graded import _commutator
    L = catalog("Q8")
    G = graded_group(ca_filtration(L, 3))
    centre = np.isin(np.arange(8), [L.element("1"), L.element("-1")])
    minus = L.element("-1")

    def both_outside(L, args):
        # -1 exactly when neither argument is central: not additive in a slot
        a, b = np.broadcast_arrays(*args)
        return np.where(~centre[a] & ~centre[b], minus, L.identity)

    assert not check_multilinear(G, _commutator, 2)["violations"]
    assert check_multilinear(G, both_outside, 2)["violations"]


@pytest.mark.parametrize("name", UP_TO_16)
def test_akivis_degree_111(name):
    G = graded_group(ca_filtration(catalog(name), 4))
    r = check_akivis(G, 1, 1, 1)
    assert r["violation_count"] == 0
    assert r["checked"] == G.component(1).order ** 3


def test_akivis_nontrivial_terms_in_o16():
    # associator part is nonzero, so the identity is exercised beyond Jacobi
    from loopforge.graded import _associator
    G = graded_group(ca_filtration(catalog("O16"), 4))
    assert (class_table(G, _associator, (1, 1, 1)) != G.component(3).zero).any()


def test_representatives_exhaustive():
    from loopforge.graded import _deviation
    G = graded_group(ca_filtration(catalog("M(S3,2)"), 4))
    block = check_representatives(G, _deviation((2,)), 4)
    assert not block["violations"] and not block["sampled"]


def test_graded_deviation_level_one():
    L = catalog("O16")
    G = graded_group(ca_filtration(L, 4))
    xs = [G.element(1, s) for s in ("e1", "e2", "e3", "e4")]
    with pytest.raises(GradedError):
        graded_deviation(xs, (1,), G)      # degree 4 is beyond the computed components
    G5 = graded_group(ca_filtration(L, 5))
    v = graded_deviation(xs, (1,), G5)
    assert v.degree == 4
