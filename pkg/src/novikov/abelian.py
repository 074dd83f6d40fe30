"""Commutative polynomials k[x_1..x_n] and the abelianization N<X> -> k[X].

``theta`` sends each generator to itself and kills commutators and
associators.  On the weight-1 span it has a closed form: a monomial whose
derivative orders are all <= 1 contains exactly one order-zero factor and
maps to the product of its underlying generators; a monomial with any
derivative of order >= 2 maps to 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from .algebra import NovikovElement, NotNovikovError, is_novikov
from .core import DiffPolynomial, RingConfig, RingMismatchError, Scalar
from .maps import Derivation, Endomorphism, NilpotencyError

Exponents = tuple[int, ...]


def display_key(e: Exponents):
    """Lower degree first; within a degree, y^2 before x*z (same order as k{X} output)."""
    expanded = [i for i, k in enumerate(e) for _ in range(k)]
    return (sum(e), tuple(-i for i in expanded))


class CommPolynomial:
    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Mapping[Exponents, Scalar] | None = None) -> None:
        self.n = n
        clean = {}
        for e, c in (terms or {}).items():
            if len(e) != n or min(e, default=0) < 0:
                raise ValueError(f"bad exponent vector {e} for {n} variables")
            if c:
                clean[tuple(e)] = Fraction(c)
        self._terms = clean

    @classmethod
    def constant(cls, n: int, c: Scalar) -> CommPolynomial:
        return cls(n, {(0,) * n: c})

    @classmethod
    def variable(cls, n: int, i: int) -> CommPolynomial:
        """The i-th variable, 1-based."""
        e = [0] * n
        e[i - 1] = 1
        return cls(n, {tuple(e): 1})

    @classmethod
    def generators(cls, n: int) -> tuple[CommPolynomial, ...]:
        return tuple(cls.variable(n, i) for i in range(1, n + 1))

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def variables(self) -> set[int]:
        return {i + 1 for e in self._terms for i, k in enumerate(e) if k}

    def degree(self) -> int | None:
        degrees = {sum(e) for e in self._terms}
        return degrees.pop() if len(degrees) == 1 else None

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CommPolynomial.constant(self.n, other)
        if not isinstance(other, CommPolynomial):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self._terms.items())))

    def _coerce(self, other) -> CommPolynomial:
        if isinstance(other, (int, Fraction)):
            return CommPolynomial.constant(self.n, other)
        if isinstance(other, CommPolynomial):
            if other.n != self.n:
                raise RingMismatchError(f"{self.n} vs {other.n} variables")
            return other
        return NotImplemented

    def __add__(self, other) -> CommPolynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return CommPolynomial(self.n, out)

    __radd__ = __add__

    def __neg__(self) -> CommPolynomial:
        return CommPolynomial(self.n, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> CommPolynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> CommPolynomial:
        return -self + other

    def __mul__(self, other) -> CommPolynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[Exponents, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return CommPolynomial(self.n, out)

    __rmul__ = __mul__

    def __truediv__(self, c: Scalar) -> CommPolynomial:
        return self * (Fraction(1) / Fraction(c))

    def __pow__(self, k: int) -> CommPolynomial:
        out = CommPolynomial.constant(self.n, 1)
        for _ in range(k):
            out = out * self
        return out

    def partial(self, i: int) -> CommPolynomial:
        """Partial derivative in the i-th variable."""
        out = {}
        for e, c in self._terms.items():
            if e[i - 1]:
                lowered = list(e)
                lowered[i - 1] -= 1
                out[tuple(lowered)] = c * e[i - 1]
        return CommPolynomial(self.n, out)

    def substitute(self, values: Sequence[CommPolynomial]) -> CommPolynomial:
        out = CommPolynomial(self.n)
        for e, c in self._terms.items():
            term = CommPolynomial.constant(self.n, c)
            for v, k in zip(values, e):
                if k:
                    term = term * v**k
            out = out + term
        return out

    def to_text(self, names: Sequence[str]) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e in sorted(self._terms, key=display_key):
            c = self._terms[e]
            factors = [name if k == 1 else f"{name}^{k}" for name, k in zip(names, e) if k]
            body = "*".join(factors)
            a = abs(c)
            text = str(a) if not body else (body if a == 1 else f"{a}*{body}")
            parts.append(("-" if c < 0 else "+", text))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out

    def __repr__(self) -> str:
        return f"CommPolynomial({self.to_text([f'x{i}' for i in range(1, self.n + 1)])!r})"


def theta(a) -> CommPolynomial:
    """Abelianization of a NovikovElement (or of a weight-1 polynomial plus a constant)."""
    if isinstance(a, DiffPolynomial):
        a = NovikovElement.lift(a)
    if not isinstance(a, NovikovElement):
        raise TypeError(f"cannot abelianize {type(a).__name__}")
    n = a.ring.n
    out: dict[Exponents, Fraction] = {}
    if a.unit:
        out[(0,) * n] = a.unit
    for u, c in a.body.items():
        if any(v.theta[0] >= 2 for v, _ in u.factors):
            continue
        e = [0] * n
        for v, k in u.factors:
            e[v.var - 1] += k
        key = tuple(e)
        out[key] = out.get(key, 0) + c
    return CommPolynomial(n, out)


@dataclass(frozen=True)
class CommDerivation:
    n: int
    images: tuple[CommPolynomial, ...]

    def __post_init__(self) -> None:
        if len(self.images) != self.n or any(f.n != self.n for f in self.images):
            raise ValueError("images must be n polynomials in n variables")

    def __call__(self, f: CommPolynomial) -> CommPolynomial:
        return comm_apply_derivation(self, f)


@dataclass(frozen=True)
class CommEndomorphism:
    n: int
    images: tuple[CommPolynomial, ...]

    def __post_init__(self) -> None:
        if len(self.images) != self.n or any(f.n != self.n for f in self.images):
            raise ValueError("images must be n polynomials in n variables")

    @classmethod
    def identity(cls, n: int) -> CommEndomorphism:
        return cls(n, CommPolynomial.generators(n))

    def __call__(self, f: CommPolynomial) -> CommPolynomial:
        return f.substitute(self.images)


def comm_apply_derivation(D: CommDerivation, f: CommPolynomial) -> CommPolynomial:
    out = CommPolynomial(f.n)
    for i, image in enumerate(D.images, start=1):
        if not image.is_zero():
            out = out + f.partial(i) * image
    return out


def comm_exp(D: CommDerivation, cap: int = 20) -> CommEndomorphism:
    images = []
    for g in CommPolynomial.generators(D.n):
        total, term = CommPolynomial(D.n), g
        for k in range(cap + 1):
            if term.is_zero():
                break
            total = total + term / factorial(k)
            term = comm_apply_derivation(D, term)
        else:
            raise NilpotencyError(f"D^n(x) did not vanish for n <= {cap}")
        images.append(total)
    return CommEndomorphism(D.n, tuple(images))


def _novikov_images(ring: RingConfig, images) -> None:
    if ring.m != 1:
        raise ValueError("abelianization needs m = 1")
    for f in images:
        if not is_novikov(f):
            raise NotNovikovError(f"image {f} is not in the free Novikov algebra")


def induced_derivation(D: Derivation) -> CommDerivation:
    _novikov_images(D.ring, D.images)
    return CommDerivation(D.ring.n, tuple(theta(f) for f in D.images))


def induced_endomorphism(phi: Endomorphism) -> CommEndomorphism:
    _novikov_images(phi.ring, phi.images)
    return CommEndomorphism(phi.ring.n, tuple(theta(f) for f in phi.images))


def comm_w() -> CommPolynomial:
    x, y, z = CommPolynomial.generators(3)
    return y**2 - x * z


def comm_partial() -> CommDerivation:
    """x -> 2y, y -> z, z -> 0 on k[x, y, z]."""
    x, y, z = CommPolynomial.generators(3)
    return CommDerivation(3, (2 * y, z, CommPolynomial(3)))


def comm_w_partial() -> CommDerivation:
    """The derivation w * partial, w = y^2 - xz."""
    w = comm_w()
    return CommDerivation(3, tuple(w * f for f in comm_partial().images))


def nagata() -> CommEndomorphism:
    """(x + 2yw + zw^2, y + zw, z)."""
    x, y, z = CommPolynomial.generators(3)
    w = comm_w()
    return CommEndomorphism(3, (x + 2 * y * w + z * w**2, y + z * w, z))
