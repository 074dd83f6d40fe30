"""Sparse exact arithmetic in the differential polynomial algebra k{x_1..x_n}.

A ring has ``n`` generators and ``m`` commuting derivations.  The symbol
``x_j^theta`` is a :class:`DerivativeVariable`; a commutative power product of
such symbols is a :class:`DiffMonomial`; a :class:`DiffPolynomial` maps
monomials to nonzero :class:`fractions.Fraction` coefficients.

Everything here is immutable once built.
"""

from __future__ import annotations

import keyword
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Iterator, Mapping, NamedTuple, Union

Rational = Fraction
Scalar = Union[int, Fraction]


class RingMismatchError(ValueError):
    """Operands live in different rings."""


@dataclass(frozen=True)
class RingConfig:
    """Shape of a differential polynomial ring: generator names and number of derivations."""

    names: tuple[str, ...] = ("x", "y", "z")
    m: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "names", tuple(self.names))
        if len(self.names) < 1:
            raise ValueError("a ring needs at least one generator")
        if self.m < 1:
            raise ValueError("a ring needs at least one derivation")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"generator names must be distinct: {self.names}")
        for name in self.names:
            # 'o' is the Novikov product token in the text grammar
            if not name.isidentifier() or keyword.iskeyword(name) or name == "o":
                raise ValueError(f"invalid generator name {name!r}")

    @property
    def n(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        """1-based index of a generator name."""
        try:
            return self.names.index(name) + 1
        except ValueError:
            raise KeyError(f"unknown generator {name!r}") from None

    def name(self, var: int) -> str:
        return self.names[var - 1]

    def zero_theta(self) -> tuple[int, ...]:
        return (0,) * self.m


XYZ = RingConfig(("x", "y", "z"), 1)


class DerivativeVariable(NamedTuple):
    """The symbol x_var^theta.  Tuple order is (var, then theta lexicographically)."""

    var: int
    theta: tuple[int, ...]

    @property
    def order(self) -> int:
        return sum(self.theta)

    def shifted(self, i: int, by: int = 1) -> DerivativeVariable:
        """Apply delta_i ``by`` times (i is 1-based)."""
        theta = list(self.theta)
        theta[i - 1] += by
        return DerivativeVariable(self.var, tuple(theta))


class DiffMonomial:
    """Canonical commutative power product of derivative variables.

    ``factors`` is a tuple of ``(DerivativeVariable, exponent)`` pairs sorted
    strictly descending; the empty tuple is the monomial 1.
    """

    __slots__ = ("factors", "_hash")

    def __init__(self, factors: Iterable[tuple[DerivativeVariable, int]] = ()) -> None:
        powers: dict[DerivativeVariable, int] = {}
        for v, e in factors:
            if e < 0:
                raise ValueError("negative exponent")
            if e:
                powers[v] = powers.get(v, 0) + e
        self._set(tuple(sorted(powers.items(), reverse=True)))

    def _set(self, factors: tuple[tuple[DerivativeVariable, int], ...]) -> None:
        lengths = {len(v.theta) for v, _ in factors}
        if len(lengths) > 1:
            raise RingMismatchError("derivative multi-indices of different lengths")
        self.factors = factors
        self._hash = hash(factors)

    @classmethod
    def _raw(cls, factors: tuple[tuple[DerivativeVariable, int], ...]) -> DiffMonomial:
        # caller guarantees canonical form
        mono = cls.__new__(cls)
        mono.factors = factors
        mono._hash = hash(factors)
        return mono

    @classmethod
    def of(cls, var: int, theta: tuple[int, ...], power: int = 1) -> DiffMonomial:
        return cls([(DerivativeVariable(var, tuple(theta)), power)])

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiffMonomial):
            return NotImplemented
        return self.factors == other.factors

    def __lt__(self, other: DiffMonomial) -> bool:
        return self.factors < other.factors

    def __repr__(self) -> str:
        return f"DiffMonomial({list(self.factors)!r})"

    def __iter__(self) -> Iterator[tuple[DerivativeVariable, int]]:
        return iter(self.factors)

    def __mul__(self, other: DiffMonomial) -> DiffMonomial:
        return mono_mul(self, other)

    def is_one(self) -> bool:
        return not self.factors

    def power_of(self, v: DerivativeVariable) -> int:
        for w, e in self.factors:
            if w == v:
                return e
        return 0

    def divide(self, other: DiffMonomial) -> DiffMonomial:
        """Exact quotient; raises ValueError if ``other`` does not divide ``self``."""
        powers = dict(self.factors)
        for v, e in other.factors:
            left = powers.get(v, 0) - e
            if left < 0:
                raise ValueError(f"{other!r} does not divide {self!r}")
            if left:
                powers[v] = left
            else:
                del powers[v]
        return DiffMonomial._raw(tuple(sorted(powers.items(), reverse=True)))

    def variables(self) -> set[int]:
        return {v.var for v, _ in self.factors}

    @property
    def deg(self) -> int:
        return sum(e for _, e in self.factors)

    @property
    def d(self) -> int:
        return sum(e * v.order for v, e in self.factors)

    @property
    def weight(self) -> int:
        return self.deg - self.d


ONE = DiffMonomial()


def mono_mul(u: DiffMonomial, v: DiffMonomial) -> DiffMonomial:
    if not u.factors:
        return v
    if not v.factors:
        return u
    if len(u.factors[0][0].theta) != len(v.factors[0][0].theta):
        raise RingMismatchError("monomials from rings with different m")
    # both factor tuples are sorted descending: merge them
    a, b = u.factors, v.factors
    i = j = 0
    out = []
    while i < len(a) and j < len(b):
        p, q = a[i], b[j]
        if p[0] == q[0]:
            out.append((p[0], p[1] + q[1]))
            i += 1
            j += 1
        elif p[0] > q[0]:
            out.append(p)
            i += 1
        else:
            out.append(q)
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return DiffMonomial._raw(tuple(out))


def delta_monomial(i: int, u: DiffMonomial) -> dict[DiffMonomial, int]:
    """Leibniz rule on one monomial; integer coefficients."""
    out: dict[DiffMonomial, int] = {}
    for v, e in u.factors:
        powers = dict(u.factors)
        if e == 1:
            del powers[v]
        else:
            powers[v] = e - 1
        w = v.shifted(i)
        powers[w] = powers.get(w, 0) + 1
        mono = DiffMonomial._raw(tuple(sorted(powers.items(), reverse=True)))
        out[mono] = out.get(mono, 0) + e
    return out


class DiffPolynomial:
    """Element of k{X}: a finite sum of rational multiples of differential monomials."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: RingConfig, terms: Mapping[DiffMonomial, Scalar] | None = None) -> None:
        self.ring = ring
        clean: dict[DiffMonomial, Fraction] = {}
        if terms:
            for mono, c in terms.items():
                if c:
                    for v, _ in mono.factors:
                        if not 1 <= v.var <= ring.n or len(v.theta) != ring.m:
                            raise RingMismatchError(f"{v} does not belong to {ring}")
                    clean[mono] = Fraction(c)
        self._terms = clean
        self._hash: int | None = None

    @classmethod
    def _raw(cls, ring: RingConfig, terms: dict[DiffMonomial, Fraction]) -> DiffPolynomial:
        p = cls.__new__(cls)
        p.ring = ring
        p._terms = terms
        p._hash = None
        return p

    # construction helpers

    @classmethod
    def zero(cls, ring: RingConfig) -> DiffPolynomial:
        return cls._raw(ring, {})

    @classmethod
    def constant(cls, ring: RingConfig, c: Scalar) -> DiffPolynomial:
        return cls._raw(ring, {ONE: Fraction(c)} if c else {})

    @classmethod
    def one(cls, ring: RingConfig) -> DiffPolynomial:
        return cls.constant(ring, 1)

    @classmethod
    def variable(cls, ring: RingConfig, var: int | str, theta: Iterable[int] | int = 0) -> DiffPolynomial:
        """The symbol x_var^theta; an integer theta means an ordinary derivative order."""
        if isinstance(var, str):
            var = ring.index(var)
        if isinstance(theta, int):
            if ring.m != 1 and theta:
                raise ValueError("integer derivative order needs m = 1")
            theta = (theta,) + (0,) * (ring.m - 1)
        return cls(ring, {DiffMonomial.of(var, tuple(theta)): 1})

    @classmethod
    def generators(cls, ring: RingConfig) -> tuple[DiffPolynomial, ...]:
        return tuple(cls.variable(ring, i) for i in range(1, ring.n + 1))

    @classmethod
    def monomial(cls, ring: RingConfig, mono: DiffMonomial, c: Scalar = 1) -> DiffPolynomial:
        return cls(ring, {mono: c})

    # mapping protocol-ish

    @property
    def terms(self) -> Mapping[DiffMonomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def monomials(self) -> list[DiffMonomial]:
        return list(self._terms)

    def coeff(self, mono: DiffMonomial) -> Fraction:
        return self._terms.get(mono, Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(mono.is_one() for mono in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get(ONE, Fraction(0))

    def without_constant(self) -> DiffPolynomial:
        if ONE not in self._terms:
            return self
        return DiffPolynomial._raw(self.ring, {u: c for u, c in self._terms.items() if not u.is_one()})

    def variables(self) -> set[int]:
        out: set[int] = set()
        for mono in self._terms:
            out |= mono.variables()
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = DiffPolynomial.constant(self.ring, other)
        if not isinstance(other, DiffPolynomial):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"DiffPolynomial({format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)

    # arithmetic

    def _coerce(self, other: object) -> DiffPolynomial:
        if isinstance(other, DiffPolynomial):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return DiffPolynomial.constant(self.ring, other)
        return NotImplemented

    def __add__(self, other: object) -> DiffPolynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return poly_add(self, other)

    __radd__ = __add__

    def __neg__(self) -> DiffPolynomial:
        return DiffPolynomial._raw(self.ring, {u: -c for u, c in self._terms.items()})

    def __sub__(self, other: object) -> DiffPolynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return poly_add(self, -other)

    def __rsub__(self, other: object) -> DiffPolynomial:
        return -self + other

    def __mul__(self, other: object) -> DiffPolynomial:
        if isinstance(other, (int, Fraction)):
            return poly_scale(other, self)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, c: Scalar) -> DiffPolynomial:
        return poly_scale(Fraction(1) / Fraction(c), self)

    def __pow__(self, k: int) -> DiffPolynomial:
        if k < 0:
            raise ValueError("negative power")
        result = DiffPolynomial.one(self.ring)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # differential structure and grading

    def delta(self, i: int = 1, times: int = 1) -> DiffPolynomial:
        f = self
        for _ in range(times):
            f = apply_delta(i, f)
        return f

    def deriv(self, theta: Iterable[int]) -> DiffPolynomial:
        """Apply the derivative operator with multi-index ``theta``."""
        f = self
        for i, k in enumerate(theta, start=1):
            f = f.delta(i, k)
        return f

    def deg(self) -> int | None:
        return _common(self, lambda u: u.deg)

    def d(self) -> int | None:
        return _common(self, lambda u: u.d)

    def weight(self) -> int | None:
        return _common(self, lambda u: u.weight)


def _common(f: DiffPolynomial, grade) -> int | None:
    """Common grade of all monomials, or None if f is inhomogeneous."""
    if f.is_zero():
        raise ValueError("the zero polynomial has no degree")
    values = {grade(u) for u in f._terms}
    return values.pop() if len(values) == 1 else None


def poly_add(f: DiffPolynomial, g: DiffPolynomial) -> DiffPolynomial:
    if f.ring is not g.ring and f.ring != g.ring:
        raise RingMismatchError(f"{f.ring} vs {g.ring}")
    out = dict(f._terms)
    for u, c in g._terms.items():
        s = out.get(u, 0) + c
        if s:
            out[u] = s
        else:
            out.pop(u, None)
    return DiffPolynomial._raw(f.ring, out)


def poly_scale(c: Scalar, f: DiffPolynomial) -> DiffPolynomial:
    c = Fraction(c)
    if not c:
        return DiffPolynomial.zero(f.ring)
    return DiffPolynomial._raw(f.ring, {u: c * a for u, a in f._terms.items()})


def poly_mul(f: DiffPolynomial, g: DiffPolynomial) -> DiffPolynomial:
    if f.ring is not g.ring and f.ring != g.ring:
        raise RingMismatchError(f"{f.ring} vs {g.ring}")
    # integer arithmetic on denominator-cleared copies; one Fraction per output term
    da, fa = cleared(f)
    db, gb = cleared(g)
    acc: dict[DiffMonomial, int] = {}
    for u, a in fa:
        for v, b in gb:
            w = mono_mul(u, v)
            acc[w] = acc.get(w, 0) + a * b
    den = da * db
    if den == 1:
        return DiffPolynomial._raw(f.ring, {w: Fraction(s) for w, s in acc.items() if s})
    return DiffPolynomial._raw(f.ring, {w: Fraction(s, den) for w, s in acc.items() if s})


def cleared(f: DiffPolynomial) -> tuple[int, list[tuple[DiffMonomial, int]]]:
    """(d, terms) with f = sum(n * u for u, n in terms) / d, all n integers."""
    den = 1
    for c in f._terms.values():
        den = lcm(den, c.denominator)
    return den, [(u, c.numerator * (den // c.denominator)) for u, c in f._terms.items()]


def apply_delta(i: int, f: DiffPolynomial) -> DiffPolynomial:
    """delta_i(f), with delta_i(x_j^theta) = x_j^(theta delta_i) and the Leibniz rule."""
    if not 1 <= i <= f.ring.m:
        raise IndexError(f"derivation index {i} outside 1..{f.ring.m}")
    out: dict[DiffMonomial, Fraction] = {}
    for u, a in f._terms.items():
        for w, k in delta_monomial(i, u).items():
            s = out.get(w, 0) + a * k
            if s:
                out[w] = s
            else:
                del out[w]
    return DiffPolynomial._raw(f.ring, out)


# text rendering; the parser in novikov.syntax reads this format back


def format_variable(ring: RingConfig, v: DerivativeVariable) -> str:
    name = ring.name(v.var)
    if ring.m == 1:
        r = v.theta[0]
        if r == 0:
            return name
        if r <= 2:
            return name + "'" * r
        return f"{name}^({r})"
    if not any(v.theta):
        return name
    return f"{name}^({','.join(map(str, v.theta))})"


def format_monomial(ring: RingConfig, u: DiffMonomial) -> str:
    # factors printed ascending, the way the formulas are usually written (y*y'', x''*z)
    parts = []
    for v, e in reversed(u.factors):
        s = format_variable(ring, v)
        parts.append(s if e == 1 else f"{s}^{e}")
    return "*".join(parts)


def print_key(u: DiffMonomial):
    """Sort key for display: lower degree first, then descending by ascending factor lists."""
    return (u.deg, tuple((-v.var, tuple(-t for t in v.theta), -e) for v, e in reversed(u.factors)))


def format_poly(f: DiffPolynomial) -> str:
    if f.is_zero():
        return "0"
    out: list[str] = []
    for u in sorted(f._terms, key=print_key):
        c = f._terms[u]
        sign = "-" if c < 0 else "+"
        a = abs(c)
        body = format_monomial(f.ring, u)
        if not body:
            text = str(a)
        elif a == 1:
            text = body
        else:
            text = f"{a}*{body}"
        if not out:
            out.append(text if sign == "+" else "-" + text)
        else:
            out.append(f" {sign} {text}")
    return "".join(out)
