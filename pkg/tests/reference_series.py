"""Brute-force commutator-associator filtration.

Generators are evaluated in the full loop (no quotient scanning) over an
enlarged family set: one extra deviation level and degree vectors of
weight ``i`` and ``i + 1``.
"""
import numpy as np

from loopforge.loops import normal_closure
from loopforge.series import compositions
from loopforge.terms import deviation_value, enumerate_alphas


def _values(L, sets, alphas):
    grids = [g.ravel() for g in np.meshgrid(*[np.array(sorted(s)) for s in sets], indexing="ij")]
    if alphas is None:
        a, b = grids
        return set(np.unique(L.ldiv(L.mul(b, a), L.mul(a, b))).tolist())
    out = set()
    for al in alphas:
        out |= set(np.unique(deviation_value(L, grids, al)).tolist())
    return out


def oracle_term(L, chain, i, max_level, weights):
    """Normal subloop generated by commutators and deviations up to ``max_level``
    over ``L_{p_1} x ... x L_{p_k}`` for every degree vector summing to a value in
    ``weights`` (plus unrestricted deviations whose arity is at least ``i``).
    Terms of index ``>= i`` are the subloop being built (least fixpoint)."""
    whole = set(range(L.order))
    M = {L.identity}
    while True:
        def term(p):
            return chain[p - 1] if p < i else M
        gens = set(M)
        for w in weights:
            for p, q in compositions(w, 2):
                gens |= _values(L, [term(p), term(q)], None)
        for n in range(max_level + 1):
            al = enumerate_alphas(n)
            if n + 3 >= i:
                gens |= _values(L, [whole] * (n + 3), al)
            for w in weights:
                for degs in compositions(w, n + 3):
                    gens |= _values(L, [term(p) for p in degs], al)
        new = set(normal_closure(L, gens).members)
        if new == M:
            return frozenset(M)
        M = new


def oracle_ca(L, depth, extra=1):
    chain = [frozenset(range(L.order))]
    for i in range(2, depth + 1):
        n0 = max(i - 3, 0)
        chain.append(oracle_term(L, chain, i, n0 + extra, range(i, i + extra + 1)))
    return chain


