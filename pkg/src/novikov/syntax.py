"""Text grammar for differential and Novikov expressions.

Binding, tightest first::

    x'  x''  x^(r)  x^(i,j)  x^k     derivative suffixes and powers
    *   /k                            commutative product, division by an integer
    o                                 Novikov product f o g = f g'; never chains
    -e                                unary minus
    + -                               sum and difference

``x o y o z`` is rejected: the Novikov product is not associative, so a
chain must be parenthesized.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

from .algebra import NovikovElement, circ, format_combination
from .core import DerivativeVariable, DiffMonomial, DiffPolynomial, RingConfig, format_poly


class ParseError(ValueError):
    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


# AST


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Gen:
    name: str


@dataclass(frozen=True)
class Group:
    child: "Expr"


@dataclass(frozen=True)
class Deriv:
    child: "Expr"
    theta: tuple[int, ...]


@dataclass(frozen=True)
class Pow:
    child: "Expr"
    k: int


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Div:
    child: "Expr"
    k: int


@dataclass(frozen=True)
class Circ:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Neg:
    child: "Expr"


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


Expr = Union[Num, Gen, Group, Deriv, Pow, Mul, Div, Circ, Neg, Add, Sub]


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<dparen>\^\()
  | (?P<op>[\^'*/+\-(),])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        value = m.group()
        if kind == "ident" and value == "o":
            kind = "circ"
        elif kind == "op":
            kind = value
        elif kind == "dparen":
            kind = "^("
        if kind != "ws":
            tokens.append((kind, value, pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, ring: RingConfig, names: frozenset[str]) -> None:
        self.tokens = tokenize(text)
        self.i = 0
        self.ring = ring
        self.names = names

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def offset(self) -> int:
        return self.tokens[self.i][2]

    def take(self, kind: str) -> str:
        tok, value, pos = self.tokens[self.i]
        if tok != kind:
            shown = value or "end of input"
            raise ParseError(f"expected {kind!r}, found {shown!r}", pos)
        self.i += 1
        return value

    def parse(self) -> Expr:
        node = self.expr()
        if self.peek() != "end":
            raise ParseError(f"unexpected {self.tokens[self.i][1]!r}", self.offset())
        return node

    def expr(self) -> Expr:
        node = self.unary()
        while self.peek() in ("+", "-"):
            op = self.take(self.peek())
            right = self.unary()
            node = Add(node, right) if op == "+" else Sub(node, right)
        return node

    def unary(self) -> Expr:
        if self.peek() == "-":
            self.take("-")
            return Neg(self.unary())
        return self.circ()

    def circ(self) -> Expr:
        node = self.product()
        if self.peek() == "circ":
            self.take("circ")
            node = Circ(node, self.product())
            if self.peek() == "circ":
                raise ParseError("chained 'o' is ambiguous; add parentheses", self.offset())
        return node

    def product(self) -> Expr:
        node = self.postfix()
        while self.peek() in ("*", "/"):
            if self.peek() == "*":
                self.take("*")
                node = Mul(node, self.postfix())
            else:
                self.take("/")
                pos = self.offset()
                k = int(self.take("int"))
                if k == 0:
                    raise ParseError("division by zero", pos)
                node = Div(node, k)
        return node

    def postfix(self) -> Expr:
        node = self.atom()
        while True:
            kind = self.peek()
            if kind == "'":
                if self.ring.m != 1:
                    raise ParseError("prime notation needs m = 1; use ^(i1,...,im)", self.offset())
                self.take("'")
                node = _bump(node, (1,))
            elif kind == "^(":
                pos = self.offset()
                self.take("^(")
                theta = [int(self.take("int"))]
                while self.peek() == ",":
                    self.take(",")
                    theta.append(int(self.take("int")))
                self.take(")")
                if len(theta) != self.ring.m:
                    raise ParseError(f"derivative index needs {self.ring.m} entries", pos)
                node = _bump(node, tuple(theta))
            elif kind == "^":
                self.take("^")
                node = Pow(node, int(self.take("int")))
            else:
                return node

    def atom(self) -> Expr:
        kind, value, pos = self.tokens[self.i]
        if kind == "int":
            self.i += 1
            return Num(int(value))
        if kind == "ident":
            if value not in self.names:
                raise ParseError(f"unknown generator {value!r}", pos)
            self.i += 1
            return Gen(value)
        if kind == "(":
            self.take("(")
            node = self.expr()
            self.take(")")
            return Group(node)
        raise ParseError(f"unexpected {value or 'end of input'!r}", pos)


def _bump(node: Expr, theta: tuple[int, ...]) -> Deriv:
    # x'' parses as one node of order 2
    if isinstance(node, Deriv):
        return Deriv(node.child, tuple(a + b for a, b in zip(node.theta, theta)))
    return Deriv(node, theta)


def parse(text: str, ring: RingConfig, env: Mapping[str, DiffPolynomial] | None = None) -> Expr:
    """Parse ``text``; identifiers are ring generators or keys of ``env``."""
    names = frozenset(ring.names) | frozenset(env or ())
    return _Parser(text, ring, names).parse()


def evaluate(node: Expr, ring: RingConfig, env: Mapping[str, DiffPolynomial] | None = None) -> DiffPolynomial:
    env = env or {}
    if isinstance(node, Num):
        return DiffPolynomial.constant(ring, node.value)
    if isinstance(node, Gen):
        if node.name in ring.names:
            return DiffPolynomial.variable(ring, node.name)
        return env[node.name]
    if isinstance(node, Group):
        return evaluate(node.child, ring, env)
    if isinstance(node, Deriv):
        return evaluate(node.child, ring, env).deriv(node.theta)
    if isinstance(node, Pow):
        return evaluate(node.child, ring, env) ** node.k
    if isinstance(node, Mul):
        return evaluate(node.left, ring, env) * evaluate(node.right, ring, env)
    if isinstance(node, Div):
        return evaluate(node.child, ring, env) / node.k
    if isinstance(node, Circ):
        return circ(evaluate(node.left, ring, env), evaluate(node.right, ring, env))
    if isinstance(node, Neg):
        return -evaluate(node.child, ring, env)
    if isinstance(node, Add):
        return evaluate(node.left, ring, env) + evaluate(node.right, ring, env)
    if isinstance(node, Sub):
        return evaluate(node.left, ring, env) - evaluate(node.right, ring, env)
    raise TypeError(f"not an expression node: {node!r}")


def parse_poly(text: str, ring: RingConfig, env: Mapping[str, DiffPolynomial] | None = None) -> DiffPolynomial:
    return evaluate(parse(text, ring, env), ring, env)


def format_value(value, ring: RingConfig | None = None) -> str:
    """Deterministic text for polynomials, elements, maps and o-word combinations."""
    from .abelian import CommDerivation, CommEndomorphism, CommPolynomial
    from .maps import Derivation, Endomorphism

    if isinstance(value, DiffPolynomial):
        return format_poly(value)
    if isinstance(value, NovikovElement):
        return format_poly(value.as_polynomial())
    if isinstance(value, CommPolynomial):
        names = ring.names if ring else tuple(f"x{i}" for i in range(1, value.n + 1))
        return value.to_text(names)
    if isinstance(value, (Derivation, Endomorphism, CommDerivation, CommEndomorphism)):
        if isinstance(value, (Derivation, Endomorphism)):
            ring = value.ring
        names = ring.names if ring else tuple(f"x{i}" for i in range(1, value.n + 1))
        return "\n".join(f"{name} -> {format_value(img, ring)}" for name, img in zip(names, value.images))
    if isinstance(value, list):
        if ring is None:
            raise ValueError("formatting o-words needs a ring")
        return format_combination(value, ring)
    raise TypeError(f"cannot format {type(value).__name__}")


# JSON shapes


def _coeff_text(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def poly_to_json(f: DiffPolynomial) -> dict:
    from .core import print_key

    terms = []
    for u in sorted(f.monomials(), key=print_key):
        factors = []
        for v, e in reversed(u.factors):
            order = v.theta[0] if f.ring.m == 1 else list(v.theta)
            factors.append({"var": f.ring.name(v.var), "order": order, "power": e})
        terms.append({"coeff": _coeff_text(f.coeff(u)), "factors": factors})
    return {"terms": terms}


def poly_from_json(data: dict, ring: RingConfig) -> DiffPolynomial:
    terms: dict[DiffMonomial, Fraction] = {}
    for term in data["terms"]:
        factors = []
        for fac in term["factors"]:
            order = fac["order"]
            theta = (order,) + (0,) * (ring.m - 1) if isinstance(order, int) else tuple(order)
            factors.append((DerivativeVariable(ring.index(fac["var"]), theta), fac["power"]))
        mono = DiffMonomial(factors)
        terms[mono] = terms.get(mono, 0) + Fraction(term["coeff"])
    return DiffPolynomial(ring, terms)


def comm_to_json(f, ring: RingConfig) -> dict:
    terms = []
    from .abelian import display_key

    for e, c in sorted(f.items(), key=lambda item: display_key(item[0])):
        factors = [{"var": name, "order": 0, "power": k} for name, k in zip(ring.names, e) if k]
        terms.append({"coeff": _coeff_text(c), "factors": factors})
    return {"terms": terms}


def value_to_json(value, ring: RingConfig | None = None):
    from .abelian import CommDerivation, CommEndomorphism, CommPolynomial
    from .maps import Derivation, Endomorphism

    if isinstance(value, DiffPolynomial):
        return poly_to_json(value)
    if isinstance(value, NovikovElement):
        return poly_to_json(value.as_polynomial())
    if isinstance(value, CommPolynomial):
        return comm_to_json(value, ring)
    if isinstance(value, (Derivation, Endomorphism)):
        return {"generators": list(value.ring.names), "images": [poly_to_json(f) for f in value.images]}
    if isinstance(value, (CommDerivation, CommEndomorphism)):
        return {"generators": list(ring.names), "images": [comm_to_json(f, ring) for f in value.images]}
    if isinstance(value, list):
        return {"terms": [{"coeff": _coeff_text(c), "word": format_value([(Fraction(1), t)], ring)} for c, t in value]}
    raise TypeError(f"cannot serialize {type(value).__name__}")
