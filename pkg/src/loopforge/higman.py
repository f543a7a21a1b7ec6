"""Higman's extension loop ``(L, B)`` and the homomorphism ``delta``.

``B`` is the free abelian group on symbols ``f(l1, l2)`` (``l1, l2`` not
the identity of ``L``) and ``g(x)`` (``x`` a generator name). On
``L x B``::

    (l1, b1)(l2, b2) = (l1 l2,  b1 + b2 + f(l1, l2))
    (l1, b1)/(l2, b2) = (l1/l2, b1 - b2 - f(l1/l2, l2))
    (l2, b2)\\(l1, b1) = (l2\\l1, b1 - b2 - f(l2, l2\\l1))

with ``f(l, 1) = f(1, l) = 0``. ``delta`` sends a generator ``x`` to
``(p(x), g(x))``; its kernel is ``[N, F]`` for ``N = ker p``, so a term with
``delta(t) != (1, 0)`` does not lie in ``[N, F]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Mapping, NamedTuple

from .loops import CayleyLoop, IntegersLoop
from .terms import Gen, LoopLike, Term, eval_term, power

__all__ = [
    "F", "G", "AbVector", "HigmanElement", "HigmanLoop",
    "delta_eval", "delta_power_closed_form", "power_deviation", "higman_witness",
    "witness_term",
]


class F(NamedTuple):
    l1: Any
    l2: Any

    def __str__(self):
        return f"f({self.l1},{self.l2})"


class G(NamedTuple):
    x: str

    def __str__(self):
        return f"g({self.x})"


def _sort_key(sym):
    if isinstance(sym, G):
        return (1, str(sym.x))
    return (0, repr(sym.l1), repr(sym.l2)) if not isinstance(sym.l1, int) else (0, sym.l1, sym.l2)


class AbVector:
    """Element of a free abelian group: finitely many symbols with integer coefficients."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping | Iterable = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c: dict = {}
        for sym, k in items:
            k = c.get(sym, 0) + int(k)
            if k:
                c[sym] = k
            else:
                c.pop(sym, None)
        self._c = c

    @classmethod
    def symbol(cls, sym, k: int = 1) -> "AbVector":
        return cls({sym: k})

    def __getitem__(self, sym) -> int:
        return self._c.get(sym, 0)

    def __iter__(self):
        return iter(self._c)

    def __len__(self):
        return len(self._c)

    def items(self):
        return self._c.items()

    def __bool__(self):
        return bool(self._c)

    def __eq__(self, other):
        if isinstance(other, AbVector):
            return self._c == other._c
        if other == 0:
            return not self._c
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def _combine(self, other: "AbVector", sign: int) -> "AbVector":
        c = dict(self._c)
        for sym, k in other._c.items():
            v = c.get(sym, 0) + sign * k
            if v:
                c[sym] = v
            else:
                c.pop(sym, None)
        out = AbVector.__new__(AbVector)
        out._c = c
        return out

    def __add__(self, other: "AbVector") -> "AbVector":
        return self._combine(other, 1)

    def __sub__(self, other: "AbVector") -> "AbVector":
        return self._combine(other, -1)

    def __neg__(self) -> "AbVector":
        return AbVector({s: -k for s, k in self._c.items()})

    def __repr__(self):
        return f"AbVector({self})"

    def __str__(self):
        if not self._c:
            return "0"
        out = []
        for sym in sorted(self._c, key=_sort_key):
            k = self._c[sym]
            sign = "-" if k < 0 else "+"
            mag = "" if abs(k) == 1 else f"{abs(k)}"
            out.append(f"{sign}{mag}{sym}")
        s = "".join(out)
        return s[1:] if s.startswith("+") else s


@dataclass(frozen=True)
class HigmanElement:
    l: Any
    b: AbVector

    def __str__(self):
        return f"({self.l}, {self.b})"


class HigmanLoop:
    """The loop ``(L, B)`` over an ambient loop ``L``."""

    def __init__(self, ambient: LoopLike | None = None):
        self.ambient = ambient if ambient is not None else IntegersLoop()
        self.identity = HigmanElement(self.ambient.identity, AbVector())

    def f(self, l1, l2) -> AbVector:
        e = self.ambient.identity
        if l1 == e or l2 == e:
            return AbVector()
        return AbVector.symbol(F(_plain(l1), _plain(l2)))

    def element(self, l, b: AbVector | None = None) -> HigmanElement:
        return HigmanElement(_plain(l), b if b is not None else AbVector())

    def _check(self, *us):
        for u in us:
            if not isinstance(u, HigmanElement):
                raise TypeError(f"expected a HigmanElement, got {type(u).__name__}")
            if isinstance(self.ambient, CayleyLoop) and not (
                    isinstance(u.l, int) and 0 <= u.l < self.ambient.order):
                raise ValueError(f"{u.l!r} is not an element of the ambient loop")
            if isinstance(self.ambient, IntegersLoop) and not isinstance(u.l, int):
                raise ValueError(f"{u.l!r} is not an integer")

    def mul(self, u: HigmanElement, v: HigmanElement) -> HigmanElement:
        self._check(u, v)
        A = self.ambient
        return HigmanElement(_plain(A.mul(u.l, v.l)), u.b + v.b + self.f(u.l, v.l))

    def rdiv(self, u: HigmanElement, v: HigmanElement) -> HigmanElement:
        """``u / v``."""
        self._check(u, v)
        l = _plain(self.ambient.rdiv(u.l, v.l))
        return HigmanElement(l, u.b - v.b - self.f(l, v.l))

    def ldiv(self, v: HigmanElement, u: HigmanElement) -> HigmanElement:
        """``v \\ u``."""
        self._check(u, v)
        l = _plain(self.ambient.ldiv(v.l, u.l))
        return HigmanElement(l, u.b - v.b - self.f(v.l, l))

    def generator(self, name: str, image) -> HigmanElement:
        """``delta(x) = (p(x), g(x))``."""
        return HigmanElement(_plain(image), AbVector.symbol(G(name)))


def _plain(x):
    # numpy scalars from Cayley tables -> python ints, so symbols compare cleanly
    try:
        return int(x) if not isinstance(x, int) else x
    except TypeError:
        return x


def delta_eval(t: Term, p: Mapping[str, Any], ambient: LoopLike | None = None) -> HigmanElement:
    """``delta(t)`` with generator images ``p`` in the ambient loop."""
    H = HigmanLoop(ambient)
    env = {name: H.generator(name, image) for name, image in p.items()}
    return eval_term(t, env, H)


def delta_power_closed_form(m: int, name: str = "y") -> HigmanElement:
    """``(m, m g(y) + f(1,1) + f(2,1) + ... + f(m-1,1))`` over the integers."""
    b = AbVector({G(name): m, **{F(j, 1): 1 for j in range(1, m)}})
    return HigmanElement(m, b)


def power_deviation(m: int, n: int, name: str = "y") -> HigmanElement:
    """``delta (y^m, y, ..., y)_{1,...,1}`` (``n`` ones) over the integers, ``p(y) = 1``.

    Level ``n`` is obtained from three level ``n-1`` values with first
    arguments ``y^m``, ``y`` and ``y^{m+1}``.
    """
    if m < 1 or n < 0:
        raise ValueError("need m >= 1 and n >= 0")
    H = HigmanLoop(IntegersLoop())
    y = H.generator(name, 1)
    powers: dict[int, HigmanElement] = {1: y}

    def pw(k):
        if k not in powers:
            powers[k] = H.mul(pw(k - 1), y)
        return powers[k]

    memo: dict[tuple[int, int], HigmanElement] = {}

    def D(k, level):
        if (k, level) in memo:
            return memo[k, level]
        if level == 0:
            a = pw(k)
            v = H.ldiv(H.mul(a, H.mul(y, y)), H.mul(H.mul(a, y), y))
        else:
            v = H.ldiv(H.mul(D(k, level - 1), D(1, level - 1)), D(k + 1, level - 1))
        memo[k, level] = v
        return v

    return D(m, n)


def _leading(v: HigmanElement):
    fs = [s for s in v.b if isinstance(s, F)]
    if not fs:
        return None
    return max(fs, key=lambda s: (s.l1, s.l2))


def higman_witness(m: int, n: int) -> dict:
    """Certify that ``(y^m, y, ..., y)_{1,...,1}`` is outside ``gamma_3`` of the free loop.

    ``delta`` of the deviation is computed exactly; a value other than
    ``(0, 0)`` is the certificate. The report gives the leading ``f``
    symbol (largest first index), its coefficient, the largest first index
    among the remaining ``f`` symbols and the ``g(y)`` coefficient.

    ``stated_*`` fields test the closed form that puts coefficient ``+1`` on
    ``f(n+m-1, 1)`` with all other ``f`` symbols below that index. The
    computed leading symbol is ``f(n+m+1, 1)`` instead, so that form does
    not hold; see ``stated_form_holds``.
    """
    if isinstance(m, bool) or isinstance(n, bool) or not isinstance(m, int) or not isinstance(n, int):
        raise TypeError("m and n must be integers")
    if m < 1 or n < 0:
        raise ValueError("need m >= 1 and n >= 0")
    v = power_deviation(m, n)
    lead = _leading(v)
    others = sorted(((s.l1, s.l2), k) for s, k in v.b.items()
                    if isinstance(s, F) and s != lead)
    g_coeff = v.b[G("y")]
    nonzero = v.l != 0 or bool(v.b)

    idx = n + m - 1
    in_scope = idx >= 1
    stated_coeff = v.b[F(idx, 1)] if in_scope else 0
    stated_others = [s.l1 for s in v.b if isinstance(s, F) and s != F(idx, 1)]
    stated_ok = (in_scope and v.l == 0 and stated_coeff == 1 and g_coeff == 0
                and all(p < idx for p in stated_others))
    return {
        "m": m,
        "n": n,
        "loop_part": v.l,
        "leading_symbol": [lead.l1, lead.l2] if lead else None,
        "leading_coeff": v.b[lead] if lead else 0,
        "max_other_p": max((pq[0] for pq, _ in others), default=None),
        "g_coeff": g_coeff,
        "nonzero": nonzero,
        "other_coefficients": [[p, q, k] for (p, q), k in others],
        "stated_index": idx,
        "stated_in_scope": in_scope,
        "stated_coeff": stated_coeff,
        "stated_form_holds": stated_ok,
        "verdict": "outside gamma3" if nonzero else "inconclusive",
    }


def witness_term(m: int, n: int, name: str = "y") -> Term:
    """The term ``(y^m, y, ..., y)_{1,...,1}``; grows like 3**n."""
    from .terms import deviation
    y = Gen(name)
    return deviation([power(y, m)] + [y] * (n + 2), (1,) * n)
