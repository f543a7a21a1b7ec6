"""The associated graded group of a filtration and its induced operations.

Component ``i`` is the abelian group ``L_i / L_{i+1}``, written additively.
Commutator, associator and deviations of lifted representatives induce
operations from ``C_{p_1} x ... x C_{p_k}`` to ``C_{p_1 + ... + p_k}``;
this module evaluates them and checks representative independence,
multilinearity and the Akivis identity by exhaustive (or, above a size
limit, seeded random) scans.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .abelian import abelian_decomposition
from .loops import CayleyLoop, is_associative, is_commutative, quotient, subloop
from .series import Filtration
from .terms import deviation_value, enumerate_alphas, validate_alphas

__all__ = [
    "GradedError", "GradedComponent", "GradedElement", "GradedGroup",
    "graded_group", "graded_bracket", "graded_associator", "graded_deviation",
    "check_multilinear", "check_representatives", "check_akivis", "graded_report",
]

EXHAUSTIVE_LIMIT = 2_000_000
SAMPLE_SIZE = 20_000
_MAX_LISTED = 10


class GradedError(ValueError):
    pass


@dataclass(frozen=True)
class GradedComponent:
    degree: int
    quotient: CayleyLoop            # L_i / L_{i+1}
    invariant_factors: tuple[int, ...]
    generators: tuple[int, ...]     # cosets, one per invariant factor
    lift_array: np.ndarray          # coset -> least representative in L
    projection: np.ndarray          # element of L -> coset, -1 outside L_i

    @property
    def order(self) -> int:
        return self.quotient.order

    @property
    def zero(self) -> int:
        return self.quotient.identity

    def lift(self, coset: int) -> int:
        return int(self.lift_array[coset])

    def add(self, x, y):
        return self.quotient.table[x, y]

    def neg(self, x):
        return self.quotient.ldiv_table[x, self.quotient.identity]


@dataclass(frozen=True)
class GradedElement:
    degree: int
    coset: int


class GradedGroup:
    """Components ``1 .. depth-1`` of a filtration of depth ``depth``."""

    def __init__(self, filtration: Filtration, components: list[GradedComponent]):
        self.filtration = filtration
        self.parent = filtration.parent
        self.components = components

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, k):
        return self.components[k]

    @property
    def top(self) -> int:
        return len(self.components)

    def component(self, degree: int) -> GradedComponent:
        if not 1 <= degree <= len(self.components):
            raise GradedError(
                f"no component of degree {degree}; computed degrees 1..{len(self.components)}")
        return self.components[degree - 1]

    def element(self, degree: int, parent_element) -> GradedElement:
        """Class of an element of ``L_degree``."""
        x = self.parent.element(parent_element)
        c = int(self.component(degree).projection[x])
        if c < 0:
            raise GradedError(f"{self.parent.names[x]} is not in L_{degree}")
        return GradedElement(degree, c)

    def elements(self, degree: int) -> list[GradedElement]:
        return [GradedElement(degree, c) for c in range(self.component(degree).order)]

    def add(self, x: GradedElement, y: GradedElement) -> GradedElement:
        if x.degree != y.degree:
            raise GradedError("cannot add elements of different degrees")
        return GradedElement(x.degree, int(self.component(x.degree).add(x.coset, y.coset)))

    def zero(self, degree: int) -> GradedElement:
        return GradedElement(degree, self.component(degree).zero)


def graded_group(F: Filtration) -> GradedGroup:
    """Build ``L_i / L_{i+1}`` for ``1 <= i < depth`` and verify they are abelian."""
    L = F.parent
    comps = []
    for i in range(1, F.depth):
        Li, Lnext = F.term(i).members, F.term(i + 1).members
        if not Lnext <= Li:
            raise GradedError(f"filtration is not descending at index {i}")
        sub, emb = subloop(L, Li)
        pos = {g: k for k, g in enumerate(emb)}
        q = quotient(sub, [pos[g] for g in Lnext])
        Q = q.loop
        if not (is_commutative(Q) and is_associative(Q)):
            raise GradedError(f"L_{i}/L_{i+1} is not an abelian group")
        factors, gens = abelian_decomposition(Q)
        proj = np.full(L.order, -1, dtype=np.int64)
        proj[emb] = q.projection
        lifts = np.array([emb[c[0]] for c in q.cosets], dtype=np.int64)
        Qn = CayleyLoop(Q.table, names=[L.names[g] for g in lifts], name=f"C{i}")
        for arr in (proj, lifts):
            arr.setflags(write=False)
        comps.append(GradedComponent(i, Qn, tuple(factors), tuple(gens), lifts, proj))
    return GradedGroup(F, comps)


# ----------------------------------------------------------------------------
# operations on representatives, broadcasting over index arrays

def _commutator(L, args):
    a, b = args
    return L.ldiv(L.mul(b, a), L.mul(a, b))


def _associator(L, args):
    return deviation_value(L, args, ())


def _deviation(alphas):
    def op(L, args):
        return deviation_value(L, args, alphas)
    op.__name__ = "deviation" + "".join(map(str, alphas))
    return op


Operation = Callable[[CayleyLoop, Sequence], np.ndarray]


def _classes(G: GradedGroup, op: Operation, degrees: Sequence[int], elems: Sequence) -> np.ndarray:
    target = G.component(sum(degrees))
    vals = op(G.parent, elems)
    cls = target.projection[vals]
    if (cls < 0).any():
        raise GradedError(f"operation left L_{sum(degrees)}: filtration is inconsistent")
    return cls


def class_table(G: GradedGroup, op: Operation, degrees: Sequence[int]) -> np.ndarray:
    """``T[c_1, ..., c_k]`` = class of ``op`` on the least representatives."""
    k = len(degrees)
    lifts = []
    for s, p in enumerate(degrees):
        shape = [1] * k
        shape[s] = -1
        lifts.append(G.component(p).lift_array.reshape(shape))
    return _classes(G, op, degrees, lifts)


def _apply(G, op, xs):
    degrees = [x.degree for x in xs]
    elems = [G.component(x.degree).lift(x.coset) for x in xs]
    return GradedElement(sum(degrees), int(_classes(G, op, degrees, elems)))


def graded_bracket(x: GradedElement, y: GradedElement, G: GradedGroup) -> GradedElement:
    """Class of ``[lift x, lift y]`` in degree ``deg x + deg y``."""
    return _apply(G, _commutator, [x, y])


def graded_associator(x: GradedElement, y: GradedElement, z: GradedElement,
                      G: GradedGroup) -> GradedElement:
    return _apply(G, _associator, [x, y, z])


def graded_deviation(xs: Sequence[GradedElement], alphas: Sequence[int],
                     G: GradedGroup) -> GradedElement:
    alphas = validate_alphas(alphas)
    if len(xs) != len(alphas) + 3:
        raise GradedError(f"level {len(alphas)} deviation takes {len(alphas) + 3} arguments")
    return _apply(G, _deviation(alphas), list(xs))


# ----------------------------------------------------------------------------
# checks

def _block():
    return {"checked": 0, "violations": [], "sampled": False}


def degree_tuples(arity: int, top: int):
    """Degree vectors of length ``arity`` whose sum is at most ``top``."""
    for degs in itertools.product(range(1, top + 1), repeat=arity):
        if sum(degs) <= top:
            yield degs


def check_multilinear(G: GradedGroup, op: Operation, arity: int, block=None,
                      degrees: Sequence[Sequence[int]] | None = None,
                      limit: int = EXHAUSTIVE_LIMIT, rng=None) -> dict:
    """``op(.., x + x', ..) == op(.., x, ..) + op(.., x', ..)`` in every slot."""
    block = block or _block()
    rng = rng or np.random.default_rng(0)
    for degs in (degrees or list(degree_tuples(arity, G.top))):
        T = class_table(G, op, degs)
        tgt = G.component(sum(degs))
        for s, p in enumerate(degs):
            add = G.component(p).quotient.table
            Tm = np.moveaxis(T, s, 0)
            c = Tm.shape[0]
            if c * Tm.size > limit:
                block["sampled"] = True
                x, y = rng.integers(0, c, (2, SAMPLE_SIZE))
                rest = [rng.integers(0, d, SAMPLE_SIZE) for d in Tm.shape[1:]]
                lhs = Tm[(add[x, y], *rest)]
                rhs = tgt.add(Tm[(x, *rest)], Tm[(y, *rest)])
            else:
                lhs = Tm[add]
                rhs = tgt.add(Tm[:, None], Tm[None, :])
            bad = np.argwhere(lhs != rhs)
            block["checked"] += int(lhs.size)
            for idx in bad[:_MAX_LISTED - len(block["violations"])]:
                block["violations"].append(
                    {"op": op.__name__.lstrip("_"), "degrees": list(degs), "slot": s + 1,
                     "index": [int(v) for v in idx]})
    return block


def check_representatives(G: GradedGroup, op: Operation, arity: int, block=None,
                          degrees: Sequence[Sequence[int]] | None = None,
                          limit: int = EXHAUSTIVE_LIMIT, rng=None) -> dict:
    """Every choice of representatives gives the class of the least ones."""
    block = block or _block()
    rng = rng or np.random.default_rng(0)
    L = G.parent
    for degs in (degrees or list(degree_tuples(arity, G.top))):
        T = class_table(G, op, degs)
        members = [np.array(sorted(G.filtration.term(p).members)) for p in degs]
        total = math.prod(len(m) for m in members)
        if total > limit:
            block["sampled"] = True
            elems = [m[rng.integers(0, len(m), SAMPLE_SIZE)] for m in members]
        else:
            grids = np.meshgrid(*members, indexing="ij")
            elems = [g.ravel() for g in grids]
        got = _classes(G, op, degs, elems)
        want = T[tuple(G.component(p).projection[e] for p, e in zip(degs, elems))]
        bad = np.flatnonzero(got != want)
        block["checked"] += int(got.size)
        for k in bad[:_MAX_LISTED - len(block["violations"])]:
            block["violations"].append(
                {"op": op.__name__.lstrip("_"), "degrees": list(degs),
                 "representatives": [L.names[int(e[k])] for e in elems]})
    return block


def check_akivis(G: GradedGroup, p: int, q: int, r: int) -> dict:
    """Akivis identity on all homogeneous triples of degrees ``(p, q, r)``.

    ``[[a,b],c] + [[b,c],a] + [[c,a],b]
      = (a,b,c) + (b,c,a) + (c,a,b) - (a,c,b) - (c,b,a) - (b,a,c)``
    """
    t = p + q + r
    C = G.component(t)
    B = {}

    def br(d1, d2):
        if (d1, d2) not in B:
            B[d1, d2] = class_table(G, _commutator, (d1, d2))
        return B[d1, d2]

    A = {}

    def asc(d1, d2, d3):
        if (d1, d2, d3) not in A:
            A[d1, d2, d3] = class_table(G, _associator, (d1, d2, d3))
        return A[d1, d2, d3]

    na, nb, nc = (G.component(d).order for d in (p, q, r))
    a = np.arange(na)[:, None, None]
    b = np.arange(nb)[None, :, None]
    c = np.arange(nc)[None, None, :]
    lhs = C.add(C.add(br(p + q, r)[br(p, q)[a, b], c],
                      br(q + r, p)[br(q, r)[b, c], a]),
                br(r + p, q)[br(r, p)[c, a], b])
    pos = C.add(C.add(asc(p, q, r)[a, b, c], asc(q, r, p)[b, c, a]), asc(r, p, q)[c, a, b])
    neg = C.add(C.add(asc(p, r, q)[a, c, b], asc(r, q, p)[c, b, a]), asc(q, p, r)[b, a, c])
    rhs = C.add(pos, C.neg(neg))
    lhs, rhs = np.broadcast_arrays(lhs, rhs)
    bad = np.argwhere(lhs != rhs)
    comps = [G.component(d) for d in (p, q, r)]
    return {
        "degrees": [p, q, r],
        "checked": int(lhs.size),
        "violations": [
            {"triple": [G.parent.names[comps[k].lift(int(v))] for k, v in enumerate(idx)]}
            for idx in bad[:_MAX_LISTED]],
        "violation_count": int(len(bad)),
    }


def graded_report(G: GradedGroup, akivis: Sequence[tuple[int, int, int]] = (),
                  deviation_levels: int = 1, seed: int = 0) -> dict:
    """Components plus multilinearity, representative and Akivis checks.

    Level 1 deviations are checked like the bracket and associator; level 2
    deviations only on a random sample, and the report says so.
    """
    rng = np.random.default_rng(seed)
    L = G.parent
    report = {
        "loop": L.name,
        "kind": G.filtration.kind,
        "depth": G.filtration.depth,
        "lower_bound": G.filtration.is_lower_bound,
        "components": [
            {"degree": C.degree, "order": C.order,
             "invariant_factors": list(C.invariant_factors),
             "generators": [C.quotient.names[g] for g in C.generators]}
            for C in G],
    }
    bil = check_multilinear(G, _commutator, 2, rng=rng)
    tri = check_multilinear(G, _associator, 3, rng=rng)
    dev = _block()
    coverage = {}
    for level in range(1, deviation_levels + 1):
        limit = EXHAUSTIVE_LIMIT if level == 1 else 0
        for al in enumerate_alphas(level):
            check_multilinear(G, _deviation(al), level + 3, block=dev, limit=limit, rng=rng)
        coverage[f"level{level}"] = "exhaustive" if level == 1 else "sampled"
    reps = _block()
    check_representatives(G, _commutator, 2, block=reps, rng=rng)
    check_representatives(G, _associator, 3, block=reps, rng=rng)
    for al in enumerate_alphas(1):
        check_representatives(G, _deviation(al), 4, block=reps, rng=rng)
    report["checks"] = {
        "bilinear": bil,
        "trilinear": tri,
        "deviation_multilinear": {**dev, "coverage": coverage},
        "representatives": reps,
    }
    ak = _block()
    ak["triples"] = []
    for pqr in akivis:
        res = check_akivis(G, *pqr)
        ak["checked"] += res["checked"]
        ak["violations"] += res["violations"]
        ak["triples"].append(list(pqr))
    report["checks"]["akivis"] = ak
    return report


def report_ok(report: dict) -> bool:
    return all(not block["violations"] for block in report["checks"].values())
