"""Finite abelian groups from Cayley tables: invariant factors and generators."""
from __future__ import annotations

import math
from collections import defaultdict

from .loops import CayleyLoop, LoopError

__all__ = ["diagonalize", "invariant_factors", "abelian_decomposition"]


def diagonalize(rows: list[list[int]]) -> tuple[list[int], list[list[int]]]:
    """Integer row/column reduction of a relation matrix.

    Returns the diagonal ``d`` of ``U R V`` (one entry per column, zeros for
    a rank deficit) and ``V^-1``, whose row ``k`` expresses the ``k``-th new
    generator in the old ones. Entries of ``d`` need not divide each other.
    """
    m = len(rows[0]) if rows else 0
    active = [list(r) for r in rows if any(r)]
    Vinv = [[int(i == j) for j in range(m)] for i in range(m)]
    diag = []
    for t in range(m):
        while True:
            best = None
            for i, r in enumerate(active):
                for j in range(t, m):
                    if r[j] and (best is None or abs(r[j]) < abs(active[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return diag + [0] * (m - t), Vinv
            i, j = best
            active[0], active[i] = active[i], active[0]
            if j != t:
                for r in active:
                    r[t], r[j] = r[j], r[t]
                Vinv[t], Vinv[j] = Vinv[j], Vinv[t]
            piv = active[0]
            p = piv[t]
            clean = True
            for r in active[1:]:
                q = r[t] // p
                if q:
                    for c in range(t, m):
                        r[c] -= q * piv[c]
                clean &= not r[t]
            for c in range(t + 1, m):
                q = piv[c] // p
                if q:
                    for r in active:
                        r[c] -= q * r[t]
                    # column c -= q * column t  =>  row t of V^-1 += q * row c
                    Vinv[t] = [a + q * b for a, b in zip(Vinv[t], Vinv[c])]
                clean &= not piv[c]
            if clean:
                diag.append(abs(p))
                active = [r for r in active[1:] if any(r[t + 1:])]
                break
    return diag, Vinv


def abelian_decomposition(G: CayleyLoop) -> tuple[list[int], list[int]]:
    """Invariant factors ``d1 | d2 | ...`` of an abelian group and generators.

    The presentation has one generator per element and the relations
    ``e_x + e_y - e_{xy}`` and ``e_1``. The returned generator ``g_k`` has
    order ``d_k`` and ``G`` is the internal direct sum of the ``<g_k>``.
    """
    n = G.order
    t = G.table
    if not (t == t.T).all():
        raise LoopError("group is not commutative")
    rows = [[0] * n for _ in range(1)]
    rows[0][G.identity] = 1
    for x in range(n):
        for y in range(x, n):
            r = [0] * n
            r[x] += 1
            r[y] += 1
            r[int(t[x, y])] -= 1
            rows.append(r)
    diag, Vinv = diagonalize(rows)
    if any(d == 0 for d in diag) or len(diag) != n:
        raise LoopError("relation matrix is not of full rank")

    def scale(k, x):
        # k * x in additive notation
        acc = G.identity
        for _ in range(k):
            acc = int(t[acc, x])
        return acc

    def combine(coeffs):
        acc = G.identity
        for x, c in enumerate(coeffs):
            if c % n:
                acc = int(t[acc, scale(c % n, x)])
        return acc

    # cyclic pieces, split into prime-power parts
    parts = defaultdict(list)          # prime -> [(p^k, element)]
    for d, row in zip(diag, Vinv):
        if d == 1:
            continue
        g = combine(row)
        for p, k in _factor(d):
            q = p ** k
            parts[p].append((q, scale(d // q, g)))
    for p in parts:
        parts[p].sort(reverse=True)
    length = max((len(v) for v in parts.values()), default=0)
    factors, gens = [], []
    for k in range(length):
        d, g = 1, G.identity
        for p in sorted(parts):
            if k < len(parts[p]):
                q, h = parts[p][k]
                d *= q
                g = int(t[g, h])
        factors.append(d)
        gens.append(g)
    factors.reverse()
    gens.reverse()
    if math.prod(factors) != n:
        raise AssertionError("invariant factors do not multiply to the group order")
    return factors, gens


def invariant_factors(G: CayleyLoop) -> list[int]:
    return abelian_decomposition(G)[0]


def _factor(d: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= d:
        if d % p == 0:
            k = 0
            while d % p == 0:
                d //= p
                k += 1
            out.append((p, k))
        p += 1
    if d > 1:
        out.append((d, 1))
    return out
