"""Finite loops given by Cayley tables.

Elements are the integers ``0..n-1``; ``names`` only matter for display and
for reading bindings. The tables ``mul``, ``ldiv_table`` and ``rdiv_table``
are read-only numpy arrays, so every operation also works elementwise on
index arrays.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "LoopError", "CayleyLoop", "IntegersLoop", "NormalSubloop",
    "load_loop", "loads_loop", "check_axioms",
    "subloop_closure", "normal_closure", "is_normal", "bracket_NL",
    "quotient", "Quotient", "centre", "subloop",
]


class LoopError(ValueError):
    """Raised for tables that are not loops or for invalid loop arguments."""


class CayleyLoop:
    """A finite loop.

    >>> L = CayleyLoop([[0, 1], [1, 0]])
    >>> L.order, L.identity, L.mul(1, 1)
    (2, 0, 0)
    """

    def __init__(self, table, names: Sequence[str] | None = None, name: str = ""):
        try:
            rows = [list(r) for r in table]
        except TypeError:
            raise LoopError("table must be a sequence of rows") from None
        n = len(rows)
        if n == 0:
            raise LoopError("empty table")
        if any(len(r) != n for r in rows):
            raise LoopError("ragged table: every row must have length %d" % n)
        try:
            t = np.array(rows, dtype=np.int64)
        except (TypeError, ValueError):
            raise LoopError("table entries must be integers") from None
        if t.min() < 0 or t.max() >= n:
            raise LoopError(f"table entries must lie in 0..{n - 1}")
        full = np.arange(n)
        for i in range(n):
            if not np.array_equal(np.sort(t[i]), full):
                raise LoopError(f"not a quasigroup: row {i} is not a permutation")
            if not np.array_equal(np.sort(t[:, i]), full):
                raise LoopError(f"not a quasigroup: column {i} is not a permutation")
        units = [e for e in range(n)
                 if np.array_equal(t[e], full) and np.array_equal(t[:, e], full)]
        if not units:
            raise LoopError("no two-sided identity element")
        if names is None:
            names = [str(i) for i in range(n)]
        names = [str(s) for s in names]
        if len(names) != n or len(set(names)) != n:
            raise LoopError("need %d distinct element names" % n)

        ld = np.empty_like(t)
        rd = np.empty_like(t)
        for a in range(n):
            ld[a, t[a]] = full       # a * x = b  ->  ld[a, b] = x
            rd[t[:, a], a] = full    # x * a = b  ->  rd[b, a] = x
        for arr in (t, ld, rd):
            arr.setflags(write=False)

        self.order = n
        self.names = tuple(names)
        self.name = name
        self.identity = units[0]
        self.table = t
        self.ldiv_table = ld
        self.rdiv_table = rd
        self._index = {s: i for i, s in enumerate(self.names)}

    def __repr__(self):
        label = self.name or "loop"
        return f"<CayleyLoop {label} of order {self.order}>"

    def __len__(self):
        return self.order

    def __eq__(self, other):
        return (isinstance(other, CayleyLoop) and self.names == other.names
                and np.array_equal(self.table, other.table))

    def __hash__(self):
        return hash((self.names, self.table.tobytes()))

    @property
    def elements(self) -> range:
        return range(self.order)

    def mul(self, a, b):
        return self.table[a, b]

    def ldiv(self, a, b):
        """``a \\ b``."""
        return self.ldiv_table[a, b]

    def rdiv(self, a, b):
        """``a / b``."""
        return self.rdiv_table[a, b]

    def element(self, key) -> int:
        """Index of an element given by name or index."""
        if isinstance(key, (int, np.integer)) and not isinstance(key, bool):
            if 0 <= key < self.order:
                return int(key)
            raise LoopError(f"element index {key} out of range")
        try:
            return self._index[str(key)]
        except KeyError:
            raise LoopError(f"unknown element {key!r}") from None

    def format(self, members: Iterable[int]) -> list[str]:
        return [self.names[i] for i in sorted(members)]

    def to_json(self) -> dict:
        return {"name": self.name, "elements": list(self.names),
                "table": self.table.tolist()}

    def to_text(self) -> str:
        lines = [str(self.order)]
        lines += [" ".join(str(int(x)) for x in row) for row in self.table]
        return "\n".join(lines) + "\n"


class IntegersLoop:
    """The integers under addition, with arbitrary precision."""

    identity = 0
    name = "Z"

    def mul(self, a: int, b: int) -> int:
        return a + b

    def ldiv(self, a: int, b: int) -> int:
        return b - a

    def rdiv(self, a: int, b: int) -> int:
        return a - b

    def __repr__(self):
        return "<IntegersLoop>"

    def __eq__(self, other):
        return isinstance(other, IntegersLoop)

    def __hash__(self):
        return hash(IntegersLoop)


@dataclass(frozen=True)
class NormalSubloop:
    parent: CayleyLoop
    members: frozenset

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, x):
        return x in self.members

    def __le__(self, other: "NormalSubloop") -> bool:
        return self.members <= other.members

    def is_trivial(self) -> bool:
        return len(self.members) == 1

    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[list(self.members)] = True
        return m


# ----------------------------------------------------------------------------
# reading tables

def loads_loop(text: str, name: str = "") -> CayleyLoop:
    """Build a loop from a JSON document or the plain text table format."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise LoopError(f"malformed JSON: {exc}") from None
        if not isinstance(doc, dict) or "table" not in doc:
            raise LoopError("JSON table document needs a 'table' field")
        elements = doc.get("elements")
        return CayleyLoop(doc["table"], names=elements, name=doc.get("name", name) or name)
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise LoopError("empty table document")
    try:
        n = int(lines[0].split()[0])
        rows = [[int(x) for x in ln.split()] for ln in lines[1:]]
    except ValueError:
        raise LoopError("text tables contain integers only") from None
    if len(rows) != n:
        raise LoopError(f"header says {n} rows, found {len(rows)}")
    return CayleyLoop(rows, name=name)


def load_loop(source) -> CayleyLoop:
    """Load a loop from a path, a JSON-like dict or a nested list."""
    if isinstance(source, CayleyLoop):
        return source
    if isinstance(source, dict):
        return CayleyLoop(source["table"], names=source.get("elements"),
                          name=source.get("name", ""))
    if isinstance(source, (str, Path)):
        path = Path(source)
        try:
            text = path.read_text()
        except OSError as exc:
            raise LoopError(f"cannot read {path}: {exc.strerror}") from None
        return loads_loop(text, name=path.stem)
    return CayleyLoop(source)


# ----------------------------------------------------------------------------
# axioms

def _moufang(L: CayleyLoop) -> bool:
    t = L.table
    x = np.arange(L.order)[:, None, None]
    y = np.arange(L.order)[None, :, None]
    z = np.arange(L.order)[None, None, :]
    # (xy)(zx) = (x(yz))x, one identity suffices for loops
    lhs = t[t[x, y], t[z, x]]
    rhs = t[t[x, t[y, z]], x]
    return bool(np.array_equal(lhs, rhs))


def is_associative(L: CayleyLoop) -> bool:
    t = L.table
    x = np.arange(L.order)[:, None, None]
    y = np.arange(L.order)[None, :, None]
    z = np.arange(L.order)[None, None, :]
    return bool(np.array_equal(t[t[x, y], z], t[x, t[y, z]]))


def is_commutative(L: CayleyLoop) -> bool:
    return bool(np.array_equal(L.table, L.table.T))


def check_axioms(L: CayleyLoop) -> dict:
    """Flag vector from exhaustive scans.

    Construction already guarantees the quasigroup and identity flags; they
    are reported so that the vector is self-contained.
    """
    n = L.order
    full = np.arange(n)
    quasi = all(np.array_equal(np.sort(L.table[i]), full)
                and np.array_equal(np.sort(L.table[:, i]), full) for i in range(n))
    e = L.identity
    ident = bool(np.array_equal(L.table[e], full) and np.array_equal(L.table[:, e], full))
    return {
        "order": n,
        "quasigroup": quasi,
        "identity": ident,
        "associative": is_associative(L),
        "commutative": is_commutative(L),
        "moufang": _moufang(L),
    }


# ----------------------------------------------------------------------------
# closures

def _as_mask(L: CayleyLoop, seed) -> np.ndarray:
    if isinstance(seed, np.ndarray) and seed.dtype == bool:
        m = seed.copy()
    else:
        m = np.zeros(L.order, dtype=bool)
        idx = [L.element(s) for s in seed]
        m[idx] = True
    m[L.identity] = True
    return m


def _saturate(L: CayleyLoop, mask: np.ndarray, perms: np.ndarray | None) -> np.ndarray:
    # fixpoint of closing under *, \, / and optional permutations (rows of perms)
    new = mask.copy()
    while True:
        S = np.flatnonzero(new)
        grid = np.ix_(S, S)
        nxt = new.copy()
        nxt[L.table[grid].ravel()] = True
        nxt[L.ldiv_table[grid].ravel()] = True
        nxt[L.rdiv_table[grid].ravel()] = True
        if perms is not None:
            nxt[perms[:, S].ravel()] = True
        if np.array_equal(nxt, new):
            return new
        new = nxt


def subloop_closure(L: CayleyLoop, seed: Iterable = ()) -> frozenset:
    """Least subloop containing ``seed``."""
    return frozenset(int(i) for i in np.flatnonzero(_saturate(L, _as_mask(L, seed), None)))


_INNER_CACHE: dict[int, tuple[CayleyLoop, np.ndarray]] = {}


def inner_generators(L: CayleyLoop) -> np.ndarray:
    """Rows are the permutations T(x), L(x,y), R(x,y) for all x, y.

    ``T(x): z -> x\\(zx)``, ``L(x,y): z -> (yx)\\(y(xz))`` and
    ``R(x,y): z -> ((zx)y)/(xy)``. Together they generate the inner
    mapping group, so invariance under them is normality.
    """
    hit = _INNER_CACHE.get(id(L))
    if hit is not None and hit[0] is L:
        return hit[1]
    n = L.order
    t, ld, rd = L.table, L.ldiv_table, L.rdiv_table
    x = np.arange(n)[:, None, None]
    y = np.arange(n)[None, :, None]
    z = np.arange(n)[None, None, :]
    T = ld[np.arange(n)[:, None], t[np.arange(n)[None, :], np.arange(n)[:, None]]]
    Lm = ld[t[y, x], t[y, t[x, z]]].reshape(n * n, n)
    Rm = rd[t[t[z, x], y], t[x, y]].reshape(n * n, n)
    perms = np.unique(np.concatenate([T, Lm, Rm]), axis=0)
    perms.setflags(write=False)
    if len(_INNER_CACHE) > 32:
        _INNER_CACHE.clear()
    _INNER_CACHE[id(L)] = (L, perms)
    return perms


def normal_closure(L: CayleyLoop, seed: Iterable = ()) -> NormalSubloop:
    """Least normal subloop containing ``seed``."""
    mask = _saturate(L, _as_mask(L, seed), inner_generators(L))
    return NormalSubloop(L, frozenset(int(i) for i in np.flatnonzero(mask)))


def is_normal(L: CayleyLoop, members: Iterable) -> bool:
    members = {L.element(m) for m in members}
    if L.identity not in members:
        return False
    mask = np.zeros(L.order, dtype=bool)
    mask[list(members)] = True
    return bool(np.array_equal(_saturate(L, mask, inner_generators(L)), mask))


def subloop(L: CayleyLoop, members: Iterable) -> tuple[CayleyLoop, list[int]]:
    """The subloop on ``members`` as a loop of its own, plus the embedding."""
    elems = sorted(int(i) for i in members)
    pos = {g: k for k, g in enumerate(elems)}
    try:
        rows = [[pos[int(L.table[a, b])] for b in elems] for a in elems]
    except KeyError:
        raise LoopError("members are not closed under the product") from None
    return CayleyLoop(rows, names=[L.names[g] for g in elems],
                      name=f"sub({L.name})" if L.name else ""), elems


def bracket_NL(N: NormalSubloop | Iterable, L: CayleyLoop) -> NormalSubloop:
    """``[N, L]``: least normal M with N/M central in L/M.

    One pass suffices: every generator below must die in L/M for N/M to be
    central, and the normal closure of the generators already makes N/M
    central.
    """
    members = N.members if isinstance(N, NormalSubloop) else frozenset(N)
    if isinstance(N, NormalSubloop) and N.parent is not L and N.parent != L:
        raise LoopError("N belongs to a different loop")
    if not is_normal(L, members):
        raise LoopError("N is not a normal subloop")
    t, ld = L.table, L.ldiv_table
    nn = np.array(sorted(members))[:, None, None]
    x = np.arange(L.order)[None, :, None]
    y = np.arange(L.order)[None, None, :]
    x2 = x[..., 0]
    gens = [
        ld[t[x2, nn[..., 0]], t[nn[..., 0], x2]].ravel(),       # [n, x]
        ld[t[nn, t[x, y]], t[t[nn, x], y]].ravel(),              # (n, x, y)
        ld[t[x, t[nn, y]], t[t[x, nn], y]].ravel(),              # (x, n, y)
        ld[t[x, t[y, nn]], t[t[x, y], nn]].ravel(),              # (x, y, n)
    ]
    mask = np.zeros(L.order, dtype=bool)
    for g in gens:
        mask[g] = True
    return normal_closure(L, mask)


def centre(L: CayleyLoop) -> frozenset:
    """Elements that commute with everything and associate in every slot."""
    t = L.table
    n = L.order
    z = np.arange(n)[:, None, None]
    x = np.arange(n)[None, :, None]
    y = np.arange(n)[None, None, :]
    comm = (t == t.T).all(axis=1)
    a1 = (t[t[z, x], y] == t[z, t[x, y]]).all(axis=(1, 2))
    a2 = (t[t[x, z], y] == t[x, t[z, y]]).all(axis=(1, 2))
    a3 = (t[t[x, y], z] == t[x, t[y, z]]).all(axis=(1, 2))
    return frozenset(int(i) for i in np.flatnonzero(comm & a1 & a2 & a3))


# ----------------------------------------------------------------------------
# quotients

@dataclass(frozen=True)
class Quotient:
    loop: CayleyLoop
    projection: np.ndarray     # parent element -> coset index
    cosets: tuple              # coset index -> sorted tuple of parent elements

    def lift(self, c: int) -> int:
        """Least parent element of coset ``c``."""
        return self.cosets[c][0]


def quotient(L: CayleyLoop, N: NormalSubloop | Iterable, check: bool = True) -> Quotient:
    """The loop of cosets ``xN`` with its projection map."""
    members = N.members if isinstance(N, NormalSubloop) else frozenset(N)
    if check and not is_normal(L, members):
        raise LoopError("cannot form a quotient by a non-normal subloop")
    Nidx = np.array(sorted(members))
    proj = np.full(L.order, -1, dtype=np.int64)
    cosets = []
    for x in range(L.order):
        if proj[x] >= 0:
            continue
        coset = np.unique(L.table[x, Nidx])
        proj[coset] = len(cosets)
        cosets.append(tuple(int(c) for c in coset))
    reps = np.array([c[0] for c in cosets])
    table = proj[L.table[np.ix_(reps, reps)]]
    if check:
        full = proj[L.table]
        # well-definedness of the coset product
        if not np.array_equal(table[proj[:, None], proj[None, :]], full):
            raise LoopError("coset product is not well defined")
    names = [L.names[c[0]] for c in cosets]
    Q = CayleyLoop(table.tolist(), names=names, name=f"{L.name}/N" if L.name else "")
    proj.setflags(write=False)
    return Quotient(Q, proj, tuple(cosets))
