"""The Novikov product f o g = f * g' on k{X} (m = 1) and the free Novikov algebra inside it.

The free Novikov algebra N0<X> is spanned by the differential monomials of
weight deg - d = 1.  :func:`express_as_novikov` rewrites any such monomial as
a rational combination of o-words in the generators, and :func:`eval_term`
evaluates o-words back into k{X}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Union

from .core import (
    DerivativeVariable,
    DiffMonomial,
    DiffPolynomial,
    RingConfig,
    RingMismatchError,
    Scalar,
    apply_delta,
    delta_monomial,
    poly_mul,
)


class NotNovikovError(ValueError):
    """A polynomial has a monomial of weight other than 1."""


def _require_ordinary(ring: RingConfig) -> None:
    if ring.m != 1:
        raise ValueError(f"the Novikov product needs one derivation, ring has m = {ring.m}")


def circ(f: DiffPolynomial, g: DiffPolynomial) -> DiffPolynomial:
    """f o g = f * g'."""
    _require_ordinary(f.ring)
    return poly_mul(f, apply_delta(1, g))


def is_novikov(f: DiffPolynomial) -> bool:
    """True iff every monomial of f has weight 1 (so f lies in N0)."""
    _require_ordinary(f.ring)
    return all(u.weight == 1 for u in f.monomials())


class NovikovElement:
    """Element ``unit * 1 + body`` of N<X> = k + N0<X>.

    The adjoined 1 is a two-sided identity for :func:`nov_mul`; ``body`` is a
    weight-1 differential polynomial.
    """

    __slots__ = ("unit", "body")

    def __init__(self, body: DiffPolynomial, unit: Scalar = 0) -> None:
        _require_ordinary(body.ring)
        if not is_novikov(body):
            raise NotNovikovError(f"body {body} has monomials of weight != 1")
        self.body = body
        self.unit = Fraction(unit)

    @classmethod
    def lift(cls, f: DiffPolynomial) -> NovikovElement:
        """Split a polynomial into its constant part (the unit) and weight-1 body."""
        return cls(f.without_constant(), f.constant_term())

    @classmethod
    def generator(cls, ring: RingConfig, var: int | str) -> NovikovElement:
        return cls(DiffPolynomial.variable(ring, var))

    @classmethod
    def scalar(cls, ring: RingConfig, c: Scalar) -> NovikovElement:
        return cls(DiffPolynomial.zero(ring), c)

    @property
    def ring(self) -> RingConfig:
        return self.body.ring

    def __eq__(self, other: object) -> bool:
        if isinstance(other, DiffPolynomial):
            other = NovikovElement.lift(other)
        if not isinstance(other, NovikovElement):
            return NotImplemented
        return self.unit == other.unit and self.body == other.body

    def __hash__(self) -> int:
        return hash((self.unit, self.body))

    def __repr__(self) -> str:
        return f"NovikovElement({str(self)!r})"

    def __str__(self) -> str:
        return str(self.as_polynomial())

    def as_polynomial(self) -> DiffPolynomial:
        """The element written in k{X}, with the unit as the constant term."""
        return self.body + self.unit

    def is_zero(self) -> bool:
        return not self.unit and self.body.is_zero()

    def _check(self, other: NovikovElement) -> None:
        if self.ring != other.ring:
            raise RingMismatchError(f"{self.ring} vs {other.ring}")

    def __add__(self, other: NovikovElement) -> NovikovElement:
        self._check(other)
        return NovikovElement(self.body + other.body, self.unit + other.unit)

    def __sub__(self, other: NovikovElement) -> NovikovElement:
        self._check(other)
        return NovikovElement(self.body - other.body, self.unit - other.unit)

    def __neg__(self) -> NovikovElement:
        return NovikovElement(-self.body, -self.unit)

    def scale(self, c: Scalar) -> NovikovElement:
        return NovikovElement(self.body * c, self.unit * c)

    def __rmul__(self, c: Scalar) -> NovikovElement:
        if not isinstance(c, (int, Fraction)):
            return NotImplemented
        return self.scale(c)

    def circ(self, other: NovikovElement) -> NovikovElement:
        return nov_mul(self, other)


def nov_mul(a: NovikovElement, b: NovikovElement) -> NovikovElement:
    """(c1 + f1) o (c2 + f2) = c1 c2 + c1 f2 + c2 f1 + f1 f2'."""
    a._check(b)
    body = circ(a.body, b.body) + b.body * a.unit + a.body * b.unit
    return NovikovElement(body, a.unit * b.unit)


# o-words over the generators


@dataclass(frozen=True)
class Leaf:
    var: int

    def __str__(self) -> str:
        return f"x{self.var}"


@dataclass(frozen=True)
class Prod:
    left: "NovikovTerm"
    right: "NovikovTerm"


NovikovTerm = Union[Leaf, Prod]
TermCombination = list[tuple[Fraction, NovikovTerm]]


def term_size(t: NovikovTerm) -> int:
    if isinstance(t, Leaf):
        return 1
    return term_size(t.left) + term_size(t.right)


def format_term(t: NovikovTerm, ring: RingConfig) -> str:
    """Fully parenthesized rendering that the expression parser accepts."""
    if isinstance(t, Leaf):
        return ring.name(t.var)
    return f"({format_term(t.left, ring)} o {format_term(t.right, ring)})"


def format_combination(combo: TermCombination, ring: RingConfig) -> str:
    if not combo:
        return "0"
    parts = []
    for c, t in combo:
        body = format_term(t, ring)
        if isinstance(t, Prod):
            body = body[1:-1] if len(combo) == 1 and c == 1 else body
        sign = "-" if c < 0 else "+"
        text = body if abs(c) == 1 else f"{abs(c)}*{body}"
        parts.append((sign, text))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, text in parts[1:]:
        out += f" {sign} {text}"
    return out


def eval_term(t: NovikovTerm, ring: RingConfig) -> NovikovElement:
    return NovikovElement(_eval_body(t, ring))


@lru_cache(maxsize=None)
def _eval_body(t: NovikovTerm, ring: RingConfig) -> DiffPolynomial:
    if isinstance(t, Leaf):
        if not 1 <= t.var <= ring.n:
            raise ValueError(f"leaf {t.var} outside 1..{ring.n}")
        return DiffPolynomial.variable(ring, t.var)
    return circ(_eval_body(t.left, ring), _eval_body(t.right, ring))


def eval_combination(combo: TermCombination, ring: RingConfig) -> DiffPolynomial:
    out = DiffPolynomial.zero(ring)
    for c, t in combo:
        out = out + _eval_body(t, ring) * c
    return out


def _combine(pairs) -> TermCombination:
    acc: dict[NovikovTerm, Fraction] = {}
    for c, t in pairs:
        acc[t] = acc.get(t, 0) + c
    return [(c, t) for t, c in acc.items() if c]


def _product(a: TermCombination, b: TermCombination) -> TermCombination:
    return _combine((ca * cb, Prod(ta, tb)) for ca, ta in a for cb, tb in b)


def express_as_novikov(u: DiffMonomial) -> TermCombination:
    """Write a weight-1 monomial (m = 1) as a rational combination of o-words.

    Recursion: a generator is a leaf.  If some x_i' divides u then
    u = (u / x_i') o x_i.  Otherwise take the highest-order factor x_k^(k)
    (k >= 2) together with k - 1 order-zero factors, call their product v0,
    and use u0 o (v0 with x_k^(k) lowered to x_k^(k-1)) = u + (terms that
    each carry a first derivative).
    """
    if u.factors and len(u.factors[0][0].theta) != 1:
        raise ValueError("decomposition needs m = 1")
    if u.weight != 1:
        raise NotNovikovError(f"monomial {u!r} has weight {u.weight}, not 1")
    return list(_express(u))


@lru_cache(maxsize=None)
def _express(u: DiffMonomial) -> tuple[tuple[Fraction, NovikovTerm], ...]:
    if u.deg == 1:
        return ((Fraction(1), Leaf(u.factors[0][0].var)),)

    # factors are sorted descending, so the first hit has the largest variable index
    firsts = [v for v, _ in u.factors if v.theta == (1,)]
    if firsts:
        v = firsts[0]
        rest = u.divide(DiffMonomial([(v, 1)]))
        return tuple(_product(list(_express(rest)), [(Fraction(1), Leaf(v.var))]))

    top, k = None, 0
    for v, _ in u.factors:
        if v.theta[0] > k or (v.theta[0] == k and top is not None and v.var > top.var):
            top, k = v, v.theta[0]
    assert top is not None and k >= 2, "weight-1 monomial without derivatives has degree 1"

    zeros: list[DerivativeVariable] = []
    for v, e in u.factors:
        if v.theta == (0,):
            zeros.extend([v] * e)
    # weight 1 forces at least k order-zero factors
    assert len(zeros) >= k - 1, f"not enough order-zero factors in {u!r}"
    chosen = zeros[: k - 1]

    v0 = DiffMonomial([(top, 1)] + [(v, 1) for v in chosen])
    lowered = DiffMonomial([(DerivativeVariable(top.var, (k - 1,)), 1)] + [(v, 1) for v in chosen])
    u0 = u.divide(v0)

    pairs = list(_product(list(_express(u0)), list(_express(lowered))))
    # u0 * lowered' = u + corrections, each correction divisible by some x_i'
    for w, c in delta_monomial(1, lowered).items():
        mono = u0 * w
        if mono == u:
            assert c == 1
            continue
        pairs.extend((-c * a, t) for a, t in _express(mono))
    return tuple(_combine(pairs))


def express_polynomial(f: DiffPolynomial) -> TermCombination:
    """Linear extension of :func:`express_as_novikov` to a weight-1 polynomial."""
    _require_ordinary(f.ring)
    pairs = []
    for u, c in f.items():
        pairs.extend((c * a, t) for a, t in express_as_novikov(u))
    return _combine(pairs)


def weight_one_monomials(n: int, max_deg: int) -> Iterator[DiffMonomial]:
    """Every weight-1 monomial over n generators (m = 1) of degree 1..max_deg."""
    for deg in range(1, max_deg + 1):
        # deg factors whose orders sum to deg - 1
        symbols = [DerivativeVariable(i, (r,)) for i in range(1, n + 1) for r in range(deg)]
        for combo in itertools.combinations_with_replacement(symbols, deg):
            if sum(v.theta[0] for v in combo) == deg - 1:
                yield DiffMonomial([(v, 1) for v in combo])
