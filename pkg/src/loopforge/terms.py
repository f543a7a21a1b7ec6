"""Syntactic free-loop terms.

A term is an immutable binary tree over named generators with three
operations: product ``*``, left division ``\\`` and right division ``/``.
Nothing is ever simplified; two terms are equal only if their trees are.

Grammar (ASCII)::

    term := IDENT | "(" term OP term ")"
          | "com(" term "," term ")"
          | "asc(" term "," term "," term ")"
          | "dev(" term {"," term} ";" INT {"," INT} ")"
    OP   := "*" | "\\" | "/"

Parentheses around the outermost binary operation may be omitted.
"""
from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass
from typing import Any, Iterator, Mapping, Protocol, Sequence, Union

__all__ = [
    "Op", "Gen", "Node", "Term", "TermSyntaxError",
    "parse_term", "print_term", "generators",
    "commutator", "associator", "deviation", "power",
    "validate_alphas", "enumerate_alphas", "count_alphas",
    "LoopLike", "eval_term", "deviation_value",
]


class Op(enum.Enum):
    MUL = "*"
    LDIV = "\\"
    RDIV = "/"


@dataclass(frozen=True)
class Gen:
    name: str

    def __post_init__(self):
        if not isinstance(self.name, str) or not _IDENT.fullmatch(self.name):
            raise ValueError(f"invalid generator name {self.name!r}")

    def __str__(self):
        return print_term(self)


@dataclass(frozen=True)
class Node:
    op: Op
    left: "Term"
    right: "Term"

    def __str__(self):
        return print_term(self)


Term = Union[Gen, Node]

# ----------------------------------------------------------------------------
# builders

def commutator(a: Term, b: Term) -> Term:
    """``[a,b] = (ba)\\(ab)``."""
    return Node(Op.LDIV, Node(Op.MUL, b, a), Node(Op.MUL, a, b))


def associator(a: Term, b: Term, c: Term) -> Term:
    """``(a,b,c) = (a(bc))\\((ab)c)``."""
    return Node(Op.LDIV,
                Node(Op.MUL, a, Node(Op.MUL, b, c)),
                Node(Op.MUL, Node(Op.MUL, a, b), c))


def power(y: Term, m: int) -> Term:
    """The product of ``m`` copies of ``y`` bracketed as ``((yy)y)...y``."""
    if m < 1:
        raise ValueError("power needs m >= 1")
    t = y
    for _ in range(m - 1):
        t = Node(Op.MUL, t, y)
    return t


def validate_alphas(alphas: Sequence[int]) -> tuple[int, ...]:
    alphas = tuple(alphas)
    for k, a in enumerate(alphas, start=1):
        if isinstance(a, bool) or not isinstance(a, int):
            raise TypeError(f"alpha values must be integers, got {a!r}")
        if not 1 <= a <= k + 2:
            raise ValueError(f"alpha_{k} = {a} outside 1..{k + 2}")
    return alphas


def count_alphas(n: int) -> int:
    """Number of deviations of level ``n``, i.e. (n+2)!/2."""
    if n < 0:
        raise ValueError("level must be non-negative")
    c = 1
    for k in range(3, n + 3):
        c *= k
    return c


def enumerate_alphas(n: int) -> list[tuple[int, ...]]:
    """All valid index words of length ``n`` in lexicographic order."""
    if n < 0:
        raise ValueError("level must be non-negative")
    return list(itertools.product(*(range(1, k + 3) for k in range(1, n + 1))))


def _substitute(args: Sequence[Any], slot: int, x: Any) -> list[Any]:
    # slot is 1-based; slots `slot` and `slot+1` collapse into x
    return [*args[:slot - 1], x, *args[slot + 1:]]


def deviation(args: Sequence[Term], alphas: Sequence[int]) -> Term:
    """Build the deviation term ``(a_1, ..., a_{n+3})_{alphas}``.

    Level 0 is the associator. For level ``n >= 1`` with last index ``k``::

        (A(a_k) A(a_{k+1})) \\ A(a_k a_{k+1})

    where ``A(x)`` is the level ``n-1`` deviation with ``x`` put in slot ``k``
    and slot ``k+1`` dropped. The tree grows like 3**n.
    """
    alphas = validate_alphas(alphas)
    args = list(args)
    if len(args) != len(alphas) + 3:
        raise ValueError(
            f"level {len(alphas)} deviation takes {len(alphas) + 3} arguments, got {len(args)}")
    if not alphas:
        return associator(*args)
    k, rest = alphas[-1], alphas[:-1]
    a, b = args[k - 1], args[k]

    def A(x):
        return deviation(_substitute(args, k, x), rest)

    return Node(Op.LDIV, Node(Op.MUL, A(a), A(b)), A(Node(Op.MUL, a, b)))


def generators(t: Term) -> set[str]:
    out = set()
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, Gen):
            out.add(s.name)
        else:
            stack.append(s.left)
            stack.append(s.right)
    return out


# ----------------------------------------------------------------------------
# evaluation

class LoopLike(Protocol):
    """Anything with a product, both divisions and an identity.

    ``ldiv(a, b)`` is ``a\\b`` (solve ``a*x = b``) and ``rdiv(a, b)`` is
    ``a/b`` (solve ``x*b = a``).
    """
    identity: Any

    def mul(self, a, b): ...
    def ldiv(self, a, b): ...
    def rdiv(self, a, b): ...


def eval_term(t: Term, env: Mapping[str, Any], loop: LoopLike) -> Any:
    """Evaluate ``t`` in ``loop`` with generators bound by ``env``.

    Shared subtrees are evaluated once, which keeps deviation terms cheap.
    """
    cache: dict[int, Any] = {}

    def ev(s):
        key = id(s)
        if key in cache:
            return cache[key][1]
        if isinstance(s, Gen):
            try:
                v = env[s.name]
            except KeyError:
                raise KeyError(f"unbound generator {s.name!r}") from None
        else:
            x, y = ev(s.left), ev(s.right)
            if s.op is Op.MUL:
                v = loop.mul(x, y)
            elif s.op is Op.LDIV:
                v = loop.ldiv(x, y)
            else:
                v = loop.rdiv(x, y)
        # keep s alive so id() is not recycled during this evaluation
        cache[key] = (s, v)
        return v

    return ev(t)


def deviation_value(loop: LoopLike, args: Sequence[Any], alphas: Sequence[int]) -> Any:
    """Evaluate a deviation directly in ``loop`` without building its term.

    Works elementwise when ``loop`` operations accept numpy index arrays.
    """
    alphas = tuple(alphas)
    if len(args) != len(alphas) + 3:
        raise ValueError("arity does not match the alpha sequence")
    return _devval(loop, list(args), alphas)


def _devval(loop, args, alphas):
    if not alphas:
        a, b, c = args
        return loop.ldiv(loop.mul(a, loop.mul(b, c)), loop.mul(loop.mul(a, b), c))
    k, rest = alphas[-1], alphas[:-1]
    a, b = args[k - 1], args[k]
    x = _devval(loop, _substitute(args, k, a), rest)
    y = _devval(loop, _substitute(args, k, b), rest)
    z = _devval(loop, _substitute(args, k, loop.mul(a, b)), rest)
    return loop.ldiv(loop.mul(x, y), z)


# ----------------------------------------------------------------------------
# printing and parsing

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


def print_term(t: Term, top: bool = True) -> str:
    """Canonical text: fully parenthesised except the outermost operation."""
    if isinstance(t, Gen):
        return t.name
    # iterative to survive deep left-nested powers
    parts: list[str] = []
    stack: list[Any] = [(t, top)]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            parts.append(item)
            continue
        s, is_top = item
        if isinstance(s, Gen):
            parts.append(s.name)
            continue
        if not is_top:
            stack.append(")")
        stack.append((s.right, False))
        stack.append(s.op.value)
        stack.append((s.left, False))
        if not is_top:
            stack.append("(")
    return "".join(parts)


class TermSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}: {text!r}")


_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<int>-?\d+)|(?P<sym>[()*\\/,;])|(?P<bad>\S))")
_OPS = {"*": Op.MUL, "\\": Op.LDIV, "/": Op.RDIV}
_SUGAR = ("com", "asc", "dev")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace
            break
        kind = m.lastgroup
        start = m.start(kind)
        if kind == "bad":
            raise TermSyntaxError(f"unknown symbol {m.group(kind)!r}", text, start)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int] | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def pos(self) -> int:
        tok = self.peek()
        return tok[2] if tok else len(self.text)

    def error(self, msg: str):
        raise TermSyntaxError(msg, self.text, self.pos())

    def expect(self, value: str):
        tok = self.peek()
        if tok is None or tok[1] != value:
            self.error(f"expected {value!r}")
        self.i += 1

    def parse(self) -> Term:
        if not self.toks:
            self.error("empty term")
        t = self.operand()
        tok = self.peek()
        if tok is not None and tok[1] in _OPS:
            self.i += 1
            t = Node(_OPS[tok[1]], t, self.operand())
        if self.peek() is not None:
            tok = self.peek()
            if tok[1] in _OPS:
                self.error("nested operation needs parentheses")
            self.error(f"unexpected {tok[1]!r}")
        return t

    def operand(self) -> Term:
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of input")
        kind, value, _ = tok
        if kind == "ident":
            self.i += 1
            nxt = self.peek()
            if value in _SUGAR and nxt is not None and nxt[1] == "(":
                self.i += 1
                return self.sugar(value)
            return Gen(value)
        if value == "(":
            self.i += 1
            left = self.operand()
            tok = self.peek()
            if tok is None or tok[1] not in _OPS:
                self.error("expected operator '*', '\\' or '/'")
            self.i += 1
            t = Node(_OPS[tok[1]], left, self.operand())
            self.expect(")")
            return t
        self.error(f"unexpected {value!r}")

    def term_list(self) -> list[Term]:
        out = [self.inner()]
        while self.peek() is not None and self.peek()[1] == ",":
            self.i += 1
            out.append(self.inner())
        return out

    def inner(self) -> Term:
        # arguments of sugar forms may also omit their outer parentheses
        t = self.operand()
        tok = self.peek()
        if tok is not None and tok[1] in _OPS:
            self.i += 1
            t = Node(_OPS[tok[1]], t, self.operand())
        return t

    def sugar(self, name: str) -> Term:
        start = self.pos()
        args = self.term_list()
        if name == "com":
            self.expect(")")
            if len(args) != 2:
                raise TermSyntaxError("com takes 2 arguments", self.text, start)
            return commutator(*args)
        if name == "asc":
            self.expect(")")
            if len(args) != 3:
                raise TermSyntaxError("asc takes 3 arguments", self.text, start)
            return associator(*args)
        alphas = []
        tok = self.peek()
        if tok is not None and tok[1] == ";":
            self.i += 1
            while True:
                tok = self.peek()
                if tok is None or tok[0] != "int":
                    self.error("expected integer alpha")
                alphas.append(int(tok[1]))
                self.i += 1
                if self.peek() is not None and self.peek()[1] == ",":
                    self.i += 1
                    continue
                break
        self.expect(")")
        try:
            return deviation(args, alphas)
        except ValueError as exc:
            raise TermSyntaxError(str(exc), self.text, start) from None


def parse_term(text: str) -> Term:
    """Parse ``text`` into a term; raises :class:`TermSyntaxError`."""
    return _Parser(text).parse()


def iter_subterms(t: Term) -> Iterator[Term]:
    stack = [t]
    while stack:
        s = stack.pop()
        yield s
        if isinstance(s, Node):
            stack.append(s.right)
            stack.append(s.left)
