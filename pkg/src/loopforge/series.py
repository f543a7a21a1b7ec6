"""Descending series of normal subloops of a finite loop.

Three kinds are computed:

``gamma``
    the lower central series, ``gamma_{i+1} = [gamma_i, L]``.
``ca``
    the commutator-associator filtration. ``L_i`` is normally generated by
    commutators of weight ``>= i``, associators of weight ``>= i`` and
    deviations of every level of weight ``>= i``, where an element of
    ``L_p`` has weight ``p``.
``naive``
    as ``ca`` but with commutators and associators only.

Finite generator reduction
--------------------------
The ``ca`` definition ranges over every deviation level and every weight.
Term ``i`` is generated exactly by the finite set

1. ``[a, b]`` with ``a in L_p``, ``b in L_q``, ``p + q = i``;
2. level ``n`` deviations with ``n + 3 < i``, arguments from
   ``L_{p_1} x ... x L_{p_{n+3}}`` for every composition
   ``p_1 + ... + p_{n+3} = i`` into positive parts;
3. all level ``n0 = max(i - 3, 0)`` deviations with unrestricted arguments.

Why this is exact: ``L_p`` contains ``L_{p+1}``, so a degree vector of sum
``> i`` is dominated slot by slot by one of sum exactly ``i``. A level
``n >= n0`` deviation has weight ``>= n + 3 >= i`` whatever its arguments.
A level ``n+1`` value is ``(A A') \\ A''`` with ``A, A', A''`` level ``n``
values, so once all level ``n0`` values lie in the generated normal
subloop (closed under product and left division) so do all higher levels.

Scanning in quotients
---------------------
Whether a generator family lies in a normal subloop ``M`` only depends on
the images of its arguments in ``L/M``. Families are therefore scanned in
the quotient by the part of the answer found so far, and ``M`` grows every
time a nontrivial value shows up. The result does not depend on the scan
order. If a family is still larger than ``max_evals`` in the current
quotient, a seeded random sample of that size is scanned instead and the
term is flagged as a lower bound.
"""
from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .loops import (CayleyLoop, NormalSubloop, bracket_NL, normal_closure,
                    quotient)
from .terms import deviation_value, enumerate_alphas

__all__ = [
    "Filtration", "Family", "DEFAULT_DEPTH", "DEFAULT_MAX_EVALS",
    "lower_central_series", "ca_filtration", "naive_filtration",
    "compare_series", "ca_families", "naive_families", "generated_term",
    "compositions",
]

DEFAULT_DEPTH = 5
DEFAULT_MAX_EVALS = 10_000_000
KINDS = ("gamma", "ca", "naive")
_CHUNK = 1 << 18


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("LOOPFORGE_THREADS", "1")))
    except ValueError:
        return 1


@dataclass
class Filtration:
    parent: CayleyLoop
    kind: str
    chain: list[NormalSubloop]                         # chain[0] is L_1
    lower_bound: list[bool] = field(default_factory=list)

    def __post_init__(self):
        if not self.lower_bound:
            self.lower_bound = [False] * len(self.chain)

    @property
    def depth(self) -> int:
        return len(self.chain)

    def term(self, i: int) -> NormalSubloop:
        """The ``i``-th term, counting from 1."""
        if not 1 <= i <= len(self.chain):
            raise IndexError(f"term {i} not computed (depth {len(self.chain)})")
        return self.chain[i - 1]

    @property
    def orders(self) -> list[int]:
        return [N.order for N in self.chain]

    @property
    def stabilized_at(self) -> int | None:
        """First index whose term is trivial, if reached."""
        for i, N in enumerate(self.chain, start=1):
            if N.is_trivial():
                return i
        return None

    @property
    def is_lower_bound(self) -> bool:
        return any(self.lower_bound)

    def to_dict(self) -> dict:
        L = self.parent
        terms = []
        for i, (N, lb) in enumerate(zip(self.chain, self.lower_bound), start=1):
            entry = {"index": i, "order": N.order, "lower_bound": lb}
            if L.order <= 16:
                entry["members"] = L.format(N.members)
            terms.append(entry)
        return {"loop": L.name, "order": L.order, "kind": self.kind,
                "depth": self.depth, "stabilized_at": self.stabilized_at,
                "lower_bound": self.is_lower_bound, "terms": terms}


# ----------------------------------------------------------------------------
# generator families

@dataclass(frozen=True)
class Family:
    """Values of one operation over a product of filtration terms.

    ``weights[k]`` names the term ``L_w`` that slot ``k`` ranges over;
    weight 1 means the whole loop. ``alphas is None`` marks the commutator.
    """
    weights: tuple[int, ...]
    alphas: tuple[tuple[int, ...], ...] | None = None

    @property
    def label(self) -> str:
        if self.alphas is None:
            return "com" + str(self.weights)
        level = len(self.alphas[0])
        return f"dev{level}" + str(self.weights)


def compositions(total: int, parts: int):
    """Compositions of ``total`` into ``parts`` positive integers."""
    if parts < 1 or total < parts:
        return
    for cuts in itertools.combinations(range(1, total), parts - 1):
        bounds = (0, *cuts, total)
        yield tuple(bounds[k + 1] - bounds[k] for k in range(parts))


def _deviation_families(level: int, weight: int) -> list[Family]:
    arity = level + 3
    alphas = tuple(enumerate_alphas(level))
    if weight <= arity:
        return [Family((1,) * arity, alphas)]
    return [Family(c, alphas) for c in compositions(weight, arity)]


def ca_families(i: int, extra_levels: int = 0, extra_weight: int = 0) -> list[Family]:
    """Reduced generator families of the ``i``-th commutator-associator term.

    ``extra_levels``/``extra_weight`` enlarge the set with redundant
    families; the generated subloop must not change.
    """
    fams = []
    for w in range(i, i + extra_weight + 1):
        fams += [Family(c) for c in compositions(w, 2)]
        for n in range(0, max(i - 3, 0) + extra_levels + 1):
            fams += _deviation_families(n, w)
    return _dedupe(fams)


def naive_families(i: int) -> list[Family]:
    return _dedupe([Family(c) for c in compositions(i, 2)] + _deviation_families(0, i))


def _dedupe(fams):
    seen, out = set(), []
    for f in fams:
        if f not in seen:
            seen.add(f)
            out.append(f)
    return out


# ----------------------------------------------------------------------------
# scanning

def _evaluate(Q: CayleyLoop, fam: Family, cols: list[np.ndarray]) -> np.ndarray:
    if fam.alphas is None:
        a, b = cols
        return Q.ldiv_table[Q.table[b, a], Q.table[a, b]]
    return np.concatenate([deviation_value(Q, cols, al) for al in fam.alphas])


class _Scan:
    def __init__(self, max_evals: int, seed: int = 0):
        self.max_evals = max_evals
        self.rng = np.random.default_rng(seed)
        self.lower_bound = False
        self.evaluations = 0

    def nontrivial(self, Q: CayleyLoop, fam: Family, sets: list[np.ndarray]) -> np.ndarray:
        """Nontrivial values of ``fam`` over ``sets`` in ``Q`` (possibly sampled)."""
        sizes = [len(s) for s in sets]
        total = math.prod(sizes)
        per_tuple = 1 if fam.alphas is None else len(fam.alphas)
        if total == 0:
            return np.empty(0, dtype=np.int64)
        sampled = total * per_tuple > self.max_evals
        if sampled:
            self.lower_bound = True
            count = max(1, self.max_evals // per_tuple)
            draws = [self.rng.integers(0, s, count) for s in sizes]
            starts = [(0, count)]
        else:
            starts = [(lo, min(lo + _CHUNK, total)) for lo in range(0, total, _CHUNK)]

        def run(span):
            lo, hi = span
            if sampled:
                cols = [s[d[lo:hi]] for s, d in zip(sets, draws)]
            else:
                digits = np.unravel_index(np.arange(lo, hi), sizes)
                cols = [s[d] for s, d in zip(sets, digits)]
            v = _evaluate(Q, fam, cols)
            return np.unique(v[v != Q.identity])

        found = []
        workers = _workers()
        if workers > 1 and len(starts) > 1:
            with ThreadPoolExecutor(workers) as pool:
                for res in pool.map(run, starts):
                    found.append(res)
        else:
            for span in starts:
                res = run(span)
                found.append(res)
                if len(res):
                    break       # caller re-scans in a smaller quotient
        self.evaluations += total * per_tuple if not sampled else self.max_evals
        return np.unique(np.concatenate(found)) if found else np.empty(0, dtype=np.int64)


def generated_term(L: CayleyLoop, families: Sequence[Family], terms: Sequence[frozenset],
                   index: int, scan: _Scan) -> NormalSubloop:
    """Normal subloop generated by the values of ``families``.

    ``terms[p-1]`` is ``L_p``; weights ``>= index`` refer to the term being
    built and are resolved by iterating to a fixpoint.
    """
    M = normal_closure(L, ())
    self_referential = any(w >= index for f in families for w in f.weights)
    while True:
        before = M
        for fam in sorted(families, key=lambda f: _cost(f, terms, index)):
            M = _absorb(L, M, fam, terms, index, scan)
        if not self_referential or M.members == before.members:
            return M


def _cost(fam, terms, index):
    size = 1
    for w in fam.weights:
        size *= len(terms[w - 1]) if w < index else 1
    return size * (1 if fam.alphas is None else len(fam.alphas))


def _absorb(L, M, fam, terms, index, scan):
    while True:
        q = quotient(L, M, check=False)
        Q = q.loop
        sets = []
        for w in fam.weights:
            src = terms[w - 1] if w < index else M.members
            sets.append(np.unique(q.projection[np.fromiter(src, dtype=np.int64)]))
        hits = scan.nontrivial(Q, fam, sets)
        if not len(hits):
            return M
        lifts = [q.lift(int(c)) for c in hits]
        M = normal_closure(L, set(M.members) | set(lifts))


# ----------------------------------------------------------------------------
# the three series

def lower_central_series(L: CayleyLoop, depth: int = DEFAULT_DEPTH) -> Filtration:
    if depth < 1:
        raise ValueError("depth must be at least 1")
    chain = [normal_closure(L, L.elements)]
    while len(chain) < depth:
        prev = chain[-1]
        chain.append(prev if prev.is_trivial() else bracket_NL(prev, L))
    return Filtration(L, "gamma", chain)


def _filtration(L, depth, kind, families_for, max_evals, seed):
    if depth < 1:
        raise ValueError("depth must be at least 1")
    chain = [normal_closure(L, L.elements)]
    flags = [False]
    while len(chain) < depth:
        i = len(chain) + 1
        if chain[-1].is_trivial():
            chain.append(chain[-1])
            flags.append(flags[-1])
            continue
        scan = _Scan(max_evals, seed + i)
        terms = [N.members for N in chain]
        chain.append(generated_term(L, families_for(i), terms, i, scan))
        flags.append(scan.lower_bound or flags[-1])
    return Filtration(L, kind, chain, flags)


def ca_filtration(L: CayleyLoop, depth: int = DEFAULT_DEPTH,
                  max_evals: int = DEFAULT_MAX_EVALS, seed: int = 0) -> Filtration:
    """The commutator-associator filtration up to ``L_depth``.

    Terms flagged ``lower_bound`` came from a sampled scan and may be too
    small; everything else is exact.
    """
    return _filtration(L, depth, "ca", ca_families, max_evals, seed)


def naive_filtration(L: CayleyLoop, depth: int = DEFAULT_DEPTH,
                     max_evals: int = DEFAULT_MAX_EVALS, seed: int = 0) -> Filtration:
    return _filtration(L, depth, "naive", naive_families, max_evals, seed)


def filtration(L: CayleyLoop, kind: str, depth: int = DEFAULT_DEPTH,
               max_evals: int = DEFAULT_MAX_EVALS) -> Filtration:
    if kind == "gamma":
        return lower_central_series(L, depth)
    if kind == "ca":
        return ca_filtration(L, depth, max_evals)
    if kind == "naive":
        return naive_filtration(L, depth, max_evals)
    raise ValueError(f"unknown series kind {kind!r}; expected one of {KINDS}")


def compare_series(L: CayleyLoop, depth: int = DEFAULT_DEPTH,
                   max_evals: int = DEFAULT_MAX_EVALS) -> dict:
    """Check ``gamma_2 = L_2`` and ``gamma_i <= naive_i <= L_i`` termwise."""
    g = lower_central_series(L, depth)
    ca = ca_filtration(L, depth, max_evals)
    nv = naive_filtration(L, depth, max_evals)
    rows = []
    ok = True
    for i in range(1, depth + 1):
        gi, ci, ni = g.term(i).members, ca.term(i).members, nv.term(i).members
        contained = gi <= ci and ni <= ci and gi <= ni
        ok &= contained
        row = {"index": i, "gamma": len(gi), "ca": len(ci), "naive": len(ni),
               "gamma_in_ca": gi <= ci, "naive_in_ca": ni <= ci}
        if L.order <= 16:
            row["members"] = {"gamma": L.format(gi), "ca": L.format(ci), "naive": L.format(ni)}
        rows.append(row)
    gamma2 = depth < 2 or g.term(2).members == ca.term(2).members
    return {
        "loop": L.name,
        "order": L.order,
        "depth": depth,
        "terms": rows,
        "flags": {
            "gamma2_eq_ca2": gamma2,
            "gamma_eq_ca": g.orders == ca.orders and all(
                a.members == b.members for a, b in zip(g.chain, ca.chain)),
            "naive_eq_ca": all(a.members == b.members for a, b in zip(nv.chain, ca.chain)),
            "containments_ok": bool(ok),
            "lower_bound": ca.is_lower_bound or nv.is_lower_bound,
        },
    }
