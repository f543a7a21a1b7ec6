import random

import pytest

from loopforge.catalog import catalog
from loopforge.higman import (F, G, AbVector, HigmanElement, HigmanLoop, delta_eval,
                              delta_power_closed_form, higman_witness, power_deviation,
                              witness_term)
from loopforge.loops import IntegersLoop
from loopforge.terms import associator, commutator, parse_term, power, Gen


def random_element(H, rng, elements):
    l = rng.choice(elements)
    b = AbVector({F(rng.choice(elements), rng.choice(elements)): rng.randint(-3, 3)
                  for _ in range(rng.randint(0, 3))})
    b = b + AbVector({G(rng.choice("xyz")): rng.randint(-2, 2)})
    return H.element(l, b)


def law_failures(H, elements, trials, seed):
    rng = random.Random(seed)
    bad = 0
    one = H.identity
    for _ in range(trials):
        u = random_element(H, rng, elements)
        v = random_element(H, rng, elements)
        checks = [
            H.mul(u, H.ldiv(u, v)) == v,
            H.ldiv(u, H.mul(u, v)) == v,
            H.mul(H.rdiv(v, u), u) == v,
            H.rdiv(H.mul(v, u), u) == v,
            H.mul(one, u) == u and H.mul(u, one) == u,
        ]
        bad += not all(checks)
    return bad


def test_abvector_algebra():
    x = AbVector({F(1, 1): 2, G("y"): -1})
    assert x - x == 0
    assert (x + x)[F(1, 1)] == 4
    assert -x == AbVector({F(1, 1): -2, G("y"): 1})
    assert AbVector({F(1, 1): 0}) == AbVector()
    assert str(AbVector({F(2, 1): 1, F(1, 1): -1})) == "-f(1,1)+f(2,1)"
    assert len({x, AbVector({G("y"): -1, F(1, 1): 2})}) == 1


def test_f_vanishes_on_identity():
    H = HigmanLoop()
    assert H.f(0, 5) == 0 and H.f(5, 0) == 0
    assert H.f(2, 3) == AbVector({F(2, 3): 1})


def test_loop_laws_over_integers():
    assert law_failures(HigmanLoop(IntegersLoop()), list(range(-6, 7)), 2000, 1) == 0


def test_loop_laws_over_q8():
    assert law_failures(HigmanLoop(catalog("Q8")), list(range(8)), 2000, 2) == 0


def test_loop_laws_over_nonassociative_ambient():
    assert law_failures(HigmanLoop(catalog("LS5")), list(range(5)), 1000, 3) == 0


def test_type_errors():
    H = HigmanLoop(catalog("Q8"))
    with pytest.raises(TypeError):
        H.mul(1, H.identity)
    with pytest.raises(ValueError):
        H.mul(H.element(9), H.identity)


def test_delta_on_product_and_commutator():
    x, y = Gen("x"), Gen("y")
    v = delta_eval(parse_term("x*y"), {"x": 2, "y": 3})
    assert v == HigmanElement(5, AbVector({G("x"): 1, G("y"): 1, F(2, 3): 1}))
    v = delta_eval(commutator(x, y), {"x": 2, "y": 3})
    assert v == HigmanElement(0, AbVector({F(2, 3): 1, F(3, 2): -1}))
    # a commutator of two images of the same element dies
    assert delta_eval(commutator(x, x), {"x": 4}) == HigmanElement(0, AbVector())


def test_delta_of_generator():
    assert delta_eval(Gen("y"), {"y": 1}) == HigmanElement(1, AbVector({G("y"): 1}))


@pytest.mark.parametrize("m", range(1, 13))
def test_power_closed_form(m):
    v = delta_eval(power(Gen("y"), m), {"y": 1})
    want = AbVector({G("y"): m, **{F(j, 1): 1 for j in range(1, m)}})
    assert v == HigmanElement(m, want) == delta_power_closed_form(m)


@pytest.mark.parametrize("m", range(1, 7))
def test_associator_of_powers_by_hand(m):
    # (y^m, y, y): B - A with A = y^m (y y), B = (y^m y) y
    # = f(m,1) + f(m+1,1) - f(1,1) - f(m,2)
    want = AbVector({F(m, 1): 1}) + AbVector({F(m + 1, 1): 1}) \
        - AbVector({F(1, 1): 1}) - AbVector({F(m, 2): 1})
    y = Gen("y")
    assert delta_eval(associator(power(y, m), y, y), {"y": 1}) == HigmanElement(0, want)
    assert power_deviation(m, 0) == HigmanElement(0, want)


@pytest.mark.parametrize("m", range(1, 5))
@pytest.mark.parametrize("n", range(0, 5))
def test_two_routes_agree(m, n):
    by_terms = delta_eval(witness_term(m, n), {"y": 1})
    assert by_terms == power_deviation(m, n)


@pytest.mark.parametrize("m", range(1, 5))
@pytest.mark.parametrize("n", range(0, 5))
def test_leading_symbol(m, n):
    # observed form: leading f(n+m+1, 1) with coefficient +1
    v = power_deviation(m, n)
    top = n + m + 1
    assert v.l == 0
    assert v.b[G("y")] == 0
    assert v.b[F(top, 1)] == 1
    assert all(s.l1 < top for s in v.b if isinstance(s, F) and s != F(top, 1))
    r = higman_witness(m, n)
    assert r["leading_symbol"] == [top, 1] and r["leading_coeff"] == 1
    assert r["verdict"] == "outside gamma3" and r["nonzero"]


def test_witness_report_fields():
    r = higman_witness(2, 3)
    assert r["stated_index"] == 4
    assert r["max_other_p"] == 5
    assert r["loop_part"] == 0 and r["g_coeff"] == 0
    with pytest.raises(ValueError):
        higman_witness(0, 1)
    with pytest.raises(TypeError):
        higman_witness(True, 1)


def test_witness_lives_in_b():
    # the loop part of a deviation of powers of one integer is 0; B carries the certificate
    v = delta_eval(witness_term(2, 1), {"y": 1})
    assert v.l == 0 and v.b
