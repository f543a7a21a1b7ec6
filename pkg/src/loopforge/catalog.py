"""Built-in loops.

Recipes:

* ``Z_n`` (1 <= n <= 16): addition modulo n.
* ``V4``, ``S3``, ``D4``, ``Q8``: groups realised through their elements
  (pairs, permutations, signed quaternion units).
* ``O16``: the 16 octonion units ``{±1, ±e1, ..., ±e7}`` with
  ``e_i e_{i+1} = e_{i+3}`` (indices mod 7) and its cyclic shifts.
* ``M(S3,2)``: Chein doubling of S3, order 12.
* ``CML81``: F_3^4 with ``x∘y = x + y + (0, 0, 0, (x3 - y3)(x1 y2 - x2 y1))``.
* ``LS5``: a fixed nonassociative loop of order 5.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

from .loops import CayleyLoop, LoopError

__all__ = ["catalog", "catalog_names", "CATALOG_FLAGS"]


def _from_elements(elements, mul, names, name):
    index = {e: i for i, e in enumerate(elements)}
    table = [[index[mul(a, b)] for b in elements] for a in elements]
    return CayleyLoop(table, names=names, name=name)


def cyclic(n: int) -> CayleyLoop:
    return CayleyLoop([[(i + j) % n for j in range(n)] for i in range(n)],
                      names=[str(i) for i in range(n)], name=f"Z_{n}")


def klein() -> CayleyLoop:
    els = [(0, 0), (1, 0), (0, 1), (1, 1)]
    return _from_elements(els, lambda a, b: ((a[0] + b[0]) % 2, (a[1] + b[1]) % 2),
                          ["e", "a", "b", "ab"], "V4")


def _compose(p, q):
    # (p q)(i) = p(q(i)): apply q first
    return tuple(p[q[i]] for i in range(len(q)))


def _perm_name(p):
    seen, cycles = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        c, j = [], i
        while j not in seen:
            seen.add(j)
            c.append(str(j + 1))
            j = p[j]
        cycles.append("(" + "".join(c) + ")")
    return "".join(cycles) or "()"


def symmetric3() -> CayleyLoop:
    els = sorted(itertools.permutations(range(3)))
    return _from_elements(els, _compose, [_perm_name(p) for p in els], "S3")


def dihedral4() -> CayleyLoop:
    # symmetries of the square acting on vertices 0..3
    r = (1, 2, 3, 0)
    s = (0, 3, 2, 1)
    els = {(0, 1, 2, 3)}
    frontier = list(els)
    while frontier:
        g = frontier.pop()
        for h in (r, s):
            k = _compose(g, h)
            if k not in els:
                els.add(k)
                frontier.append(k)
    els = sorted(els)
    return _from_elements(els, _compose, [_perm_name(p) for p in els], "D4")


_QUAT = {  # unit products i*j on the basis 1, i, j, k: (sign, index)
    (1, 1): (-1, 0), (2, 2): (-1, 0), (3, 3): (-1, 0),
    (1, 2): (1, 3), (2, 3): (1, 1), (3, 1): (1, 2),
    (2, 1): (-1, 3), (3, 2): (-1, 1), (1, 3): (-1, 2),
}


def quaternion() -> CayleyLoop:
    basis = ["1", "i", "j", "k"]
    els = [(s, u) for u in range(4) for s in (1, -1)]

    def mul(a, b):
        (sa, ua), (sb, ub) = a, b
        if ua == 0 or ub == 0:
            return (sa * sb, ua or ub)
        s, u = _QUAT[ua, ub]
        return (sa * sb * s, u)

    names = [("-" if s < 0 else "") + basis[u] for s, u in els]
    return _from_elements(els, mul, names, "Q8")


def _octonion_unit(i: int, j: int) -> tuple[int, int]:
    """``e_i e_j = sign * e_k`` with ``e_0 = 1``."""
    if i == 0:
        return 1, j
    if j == 0:
        return 1, i
    if i == j:
        return -1, 0
    for t in range(7):
        line = [(t + d) % 7 + 1 for d in (0, 1, 3)]
        if i in line and j in line:
            pi, pj = line.index(i), line.index(j)
            k = line[3 - pi - pj]
            return (1 if (pj - pi) % 3 == 1 else -1), k
    raise AssertionError("unreachable: every pair of units lies on a line")


def octonion_units() -> CayleyLoop:
    els = [(s, u) for u in range(8) for s in (1, -1)]

    def mul(a, b):
        s, u = _octonion_unit(a[1], b[1])
        return (a[0] * b[0] * s, u)

    names = [("-" if s < 0 else "") + ("1" if u == 0 else f"e{u}") for s, u in els]
    return _from_elements(els, mul, names, "O16")


def chein_s3() -> CayleyLoop:
    """M(S3, 2) on S3 ∪ S3·u.

    ``g h = gh``, ``g (hu) = (hg)u``, ``(gu) h = (g h⁻¹)u``, ``(gu)(hu) = h⁻¹ g``.
    """
    G = sorted(itertools.permutations(range(3)))

    def inv(p):
        q = [0] * 3
        for i, v in enumerate(p):
            q[v] = i
        return tuple(q)

    els = [(g, 0) for g in G] + [(g, 1) for g in G]

    def mul(a, b):
        (g, x), (h, y) = a, b
        if not x and not y:
            return (_compose(g, h), 0)
        if not x:
            return (_compose(h, g), 1)
        if not y:
            return (_compose(g, inv(h)), 1)
        return (_compose(inv(h), g), 0)

    names = [_perm_name(g) + ("u" if x else "") for g, x in els]
    return _from_elements(els, mul, names, "M(S3,2)")


def cml81() -> CayleyLoop:
    els = list(itertools.product(range(3), repeat=4))

    def mul(x, y):
        t = (x[2] - y[2]) * (x[0] * y[1] - x[1] * y[0])
        return ((x[0] + y[0]) % 3, (x[1] + y[1]) % 3,
                (x[2] + y[2]) % 3, (x[3] + y[3] + t) % 3)

    names = ["".join(map(str, e)) for e in els]
    return _from_elements(els, mul, names, "CML81")


_LS5 = [
    [0, 1, 2, 3, 4],
    [1, 0, 3, 4, 2],
    [2, 4, 0, 1, 3],
    [3, 2, 4, 0, 1],
    [4, 3, 1, 2, 0],
]


def ls5() -> CayleyLoop:
    return CayleyLoop(_LS5, names=["e", "a", "b", "c", "d"], name="LS5")


_BUILDERS = {
    "V4": klein, "S3": symmetric3, "D4": dihedral4, "Q8": quaternion,
    "O16": octonion_units, "M(S3,2)": chein_s3, "CML81": cml81, "LS5": ls5,
}

# expected check_axioms flags: (associative, commutative, moufang)
CATALOG_FLAGS = {
    **{f"Z_{n}": (True, True, True) for n in range(1, 17)},
    "V4": (True, True, True),
    "S3": (True, False, True),
    "D4": (True, False, True),
    "Q8": (True, False, True),
    "O16": (False, False, True),
    "M(S3,2)": (False, False, True),
    "CML81": (False, True, True),
    "LS5": (False, False, False),
}


def catalog_names() -> list[str]:
    return [f"Z_{n}" for n in range(1, 17)] + list(_BUILDERS)


@lru_cache(maxsize=None)
def catalog(name: str) -> CayleyLoop:
    """Return the catalog loop called ``name``."""
    if name.startswith("Z_"):
        try:
            n = int(name[2:])
        except ValueError:
            n = 0
        if 1 <= n <= 16:
            return cyclic(n)
    elif name in _BUILDERS:
        return _BUILDERS[name]()
    raise LoopError(f"unknown catalog loop {name!r}; known: {', '.join(catalog_names())}")
