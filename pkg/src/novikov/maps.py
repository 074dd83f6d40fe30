"""Derivations and endomorphisms given by their values on the generators.

A derivation of k{X} here always commutes with the structure derivations,
so D(x_j^theta) = theta(D(x_j)).  An endomorphism acts by substitution,
x_j^theta -> theta(phi(x_j)), which is a homomorphism for both the
commutative product and f o g = f g'.  Composition follows the usual
convention: ``compose(phi, psi)`` is phi after psi.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, lcm
from typing import NamedTuple, Sequence

from .algebra import NovikovElement, NotNovikovError, circ, is_novikov
from .core import (
    DerivativeVariable,
    DiffMonomial,
    DiffPolynomial,
    RingConfig,
    RingMismatchError,
    Scalar,
    cleared,
)


class NilpotencyError(ValueError):
    """Local nilpotency could not be established within the iteration cap."""


def _as_poly(value) -> DiffPolynomial:
    if isinstance(value, NovikovElement):
        if value.unit:
            # substitution realizes 1 as the constant 1 of k{X}, which is not the adjoined unit
            raise ValueError("images with a nonzero unit part are not supported")
        return value.body
    return value


def _check_images(ring: RingConfig, images: Sequence[DiffPolynomial], novikov: bool) -> tuple[DiffPolynomial, ...]:
    images = tuple(_as_poly(f) for f in images)
    if len(images) != ring.n:
        raise ValueError(f"expected {ring.n} images, got {len(images)}")
    for f in images:
        if f.ring != ring:
            raise RingMismatchError(f"image {f} is not in {ring}")
        if novikov and not is_novikov(f):
            raise NotNovikovError(f"image {f} is not in the free Novikov algebra")
    return images


@dataclass(frozen=True, eq=False)
class Derivation:
    """Derivation determined by generator images.

    With ``novikov=True`` every image must lie in N0<X> (weight 1), so the
    derivation restricts to the free Novikov algebra.
    """

    ring: RingConfig
    images: tuple[DiffPolynomial, ...]
    novikov: bool = False
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "images", _check_images(self.ring, self.images, self.novikov))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.ring == other.ring and self.images == other.images

    def __hash__(self) -> int:
        return hash((self.ring, self.images))

    def __call__(self, f):
        if isinstance(f, NovikovElement):
            return NovikovElement(apply_derivation(self, f.body))
        return apply_derivation(self, f)

    def __neg__(self) -> Derivation:
        return Derivation(self.ring, tuple(-f for f in self.images), self.novikov)

    def scaled(self, c: Scalar) -> Derivation:
        return Derivation(self.ring, tuple(f * c for f in self.images), self.novikov)

    def on_variable(self, v: DerivativeVariable) -> DiffPolynomial:
        hit = self._cache.get(v)
        if hit is None:
            hit = self.images[v.var - 1].deriv(v.theta)
            self._cache[v] = hit
        return hit


def apply_derivation(D: Derivation, f: DiffPolynomial) -> DiffPolynomial:
    if f.ring != D.ring:
        raise RingMismatchError(f"{f.ring} vs {D.ring}")
    ring = f.ring
    df, fterms = cleared(f)
    images: dict[DerivativeVariable, tuple[int, list[tuple[DiffMonomial, int]]]] = {}
    for u, _ in fterms:
        for v, _ in u.factors:
            if v not in images:
                images[v] = cleared(D.on_variable(v))
    den = df
    for d, terms in images.values():
        if terms:
            den = lcm(den, df * d)
    # integer accumulation over a common denominator, as in poly_mul
    acc: dict[DiffMonomial, int] = {}
    for u, a in fterms:
        for v, e in u.factors:
            d, terms = images[v]
            if not terms:
                continue
            rest = u.divide(DiffMonomial._raw(((v, 1),)))
            scale = a * e * (den // (df * d))
            for w, b in terms:
                mono = rest * w
                acc[mono] = acc.get(mono, 0) + scale * b
    # monomials come from f and the images, so they already belong to the ring
    return DiffPolynomial._raw(ring, {w: Fraction(s, den) for w, s in acc.items() if s})


def power(D: Derivation, f: DiffPolynomial, k: int) -> DiffPolynomial:
    for _ in range(k):
        if f.is_zero():
            break
        f = apply_derivation(D, f)
    return f


def nilpotency_index(D: Derivation, f: DiffPolynomial, cap: int) -> int | None:
    """Smallest n <= cap with D^n(f) = 0, or None if none was found."""
    if cap < 1:
        raise ValueError("cap must be at least 1")
    for n in range(cap + 1):
        if f.is_zero():
            return n
        if n == cap:
            break
        f = apply_derivation(D, f)
    return None


class LocalNilpotency(NamedTuple):
    """``verdict`` is True when every generator dies within the cap, None ("unknown") otherwise."""

    verdict: bool | None
    indices: tuple[int | None, ...]

    def __bool__(self) -> bool:
        return self.verdict is True


def is_locally_nilpotent(D: Derivation, cap: int) -> LocalNilpotency:
    # generator indices suffice: D commutes with delta and D^(a+b-1)(fg) = 0 by Leibniz
    indices = tuple(nilpotency_index(D, g, cap) for g in DiffPolynomial.generators(D.ring))
    verdict = True if all(i is not None for i in indices) else None
    return LocalNilpotency(verdict, indices)


def exp_series(D: Derivation, f: DiffPolynomial, cap: int) -> DiffPolynomial:
    """sum_k D^k(f)/k!, requiring D^n(f) = 0 for some n <= cap."""
    total = DiffPolynomial.zero(f.ring)
    term = f
    for k in range(cap + 1):
        if term.is_zero():
            return total
        total = total + term / factorial(k)
        term = apply_derivation(D, term)
    raise NilpotencyError(f"D^n(f) did not vanish for n <= {cap}")


@dataclass(frozen=True, eq=False)
class Endomorphism:
    """Substitution endomorphism x_j -> images[j]."""

    ring: RingConfig
    images: tuple[DiffPolynomial, ...]
    novikov: bool = False
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "images", _check_images(self.ring, self.images, self.novikov))

    @classmethod
    def identity(cls, ring: RingConfig, novikov: bool = False) -> Endomorphism:
        return cls(ring, DiffPolynomial.generators(ring), novikov)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Endomorphism):
            return NotImplemented
        return self.ring == other.ring and self.images == other.images

    def __hash__(self) -> int:
        return hash((self.ring, self.images))

    def __call__(self, f):
        return apply_endomorphism(self, f)

    def is_identity(self) -> bool:
        return self.images == DiffPolynomial.generators(self.ring)

    def on_variable(self, v: DerivativeVariable) -> DiffPolynomial:
        hit = self._cache.get(v)
        if hit is None:
            hit = self.images[v.var - 1].deriv(v.theta)
            self._cache[v] = hit
        return hit

    def on_monomial(self, u: DiffMonomial) -> tuple[int, list[tuple[DiffMonomial, int]]]:
        """Image of a monomial as (denominator, integer terms)."""
        # variables and monomials share one cache; the key types never compare equal
        hit = self._cache.get(u)
        if hit is None:
            image = DiffPolynomial.one(self.ring)
            for v, e in u.factors:
                image = image * self.on_variable(v) ** e
            hit = cleared(image)
            self._cache[u] = hit
        return hit


def apply_endomorphism(phi: Endomorphism, f):
    if isinstance(f, NovikovElement):
        return NovikovElement(apply_endomorphism(phi, f.body), f.unit)
    if f.ring != phi.ring:
        raise RingMismatchError(f"{f.ring} vs {phi.ring}")
    # integer accumulation over a common denominator, as in poly_mul
    parts = [(a, phi.on_monomial(u)) for u, a in f.items()]
    den = 1
    for a, (d, _) in parts:
        den = lcm(den, a.denominator * d)
    acc: dict[DiffMonomial, int] = {}
    for a, (d, terms) in parts:
        scale = a.numerator * (den // (a.denominator * d))
        for w, n in terms:
            acc[w] = acc.get(w, 0) + scale * n
    return DiffPolynomial._raw(f.ring, {w: Fraction(s, den) for w, s in acc.items() if s})


def compose(phi: Endomorphism, psi: Endomorphism) -> Endomorphism:
    """phi after psi."""
    if phi.ring != psi.ring:
        raise RingMismatchError(f"{phi.ring} vs {psi.ring}")
    images = tuple(apply_endomorphism(phi, g) for g in psi.images)
    return Endomorphism(phi.ring, images, phi.novikov and psi.novikov)


def exp_derivation(D: Derivation, cap: int = 20, check: bool = True) -> Endomorphism:
    """exp(D) = Id + D + D^2/2! + ... on the generators.

    With ``check`` the result is tested to respect products (commutative, and
    o when m = 1) on every pair of generators.
    """
    nil = is_locally_nilpotent(D, cap)
    if not nil:
        raise NilpotencyError(f"no nilpotency index within cap {cap}: {nil.indices}")
    ring = D.ring
    gens = DiffPolynomial.generators(ring)
    phi = Endomorphism(ring, tuple(exp_series(D, g, cap) for g in gens), D.novikov)
    if check:
        bound = 2 * max(nil.indices)
        for i, j in itertools.product(range(ring.n), repeat=2):
            products = [gens[i] * gens[j]]
            if ring.m == 1:
                products.append(circ(gens[i], gens[j]))
            for p in products:
                if exp_series(D, p, bound) != apply_endomorphism(phi, p):
                    raise ArithmeticError(f"exp(D) is not multiplicative on {p}")
    return phi


@dataclass(frozen=True)
class ElementaryAuto:
    """sigma(i, alpha, f): x_i -> alpha x_i + f, other generators fixed; f avoids x_i."""

    ring: RingConfig
    i: int
    alpha: Fraction
    f: DiffPolynomial

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "f", _as_poly(self.f))
        if not self.alpha:
            raise ValueError("alpha must be nonzero")
        if not 1 <= self.i <= self.ring.n:
            raise IndexError(f"generator {self.i} outside 1..{self.ring.n}")
        if self.f.ring != self.ring:
            raise RingMismatchError(f"{self.f.ring} vs {self.ring}")
        if self.i in self.f.variables():
            raise ValueError(f"f must not involve generator {self.ring.name(self.i)}")

    def endomorphism(self) -> Endomorphism:
        gens = list(DiffPolynomial.generators(self.ring))
        gens[self.i - 1] = gens[self.i - 1] * self.alpha + self.f
        return Endomorphism(self.ring, tuple(gens), self.ring.m == 1 and is_novikov(self.f))

    def inverse(self) -> ElementaryAuto:
        return invert_elementary(self)


def elementary(ring: RingConfig, i: int | str, alpha: Scalar, f=None) -> ElementaryAuto:
    if isinstance(i, str):
        i = ring.index(i)
    return ElementaryAuto(ring, i, Fraction(alpha), DiffPolynomial.zero(ring) if f is None else f)


def invert_elementary(e: ElementaryAuto) -> ElementaryAuto:
    a = 1 / e.alpha
    return ElementaryAuto(e.ring, e.i, a, e.f * (-a))


def apply_tame(word: Sequence[ElementaryAuto], ring: RingConfig | None = None) -> Endomorphism:
    """Compose a word left to right: [e1, e2, e3] gives e1 after e2 after e3."""
    if not word:
        if ring is None:
            raise ValueError("empty word needs a ring")
        return Endomorphism.identity(ring)
    phi = word[0].endomorphism()
    for e in word[1:]:
        phi = compose(phi, e.endomorphism())
    return phi


def is_triangular(D: Derivation, search_permutation: bool = False) -> bool:
    """Syntactic triangular shape: image of generator k involves only later generators, the last is constant.

    This checks the shape only; it does not search for a conjugating automorphism.
    """
    n = D.ring.n
    used = [D.images[k].variables() for k in range(n)]

    def fits(order: Sequence[int]) -> bool:
        position = {var: pos for pos, var in enumerate(order)}
        for pos, var in enumerate(order):
            if any(position[u] <= pos for u in used[var - 1]):
                return False
        return True

    if fits(range(1, n + 1)):
        return True
    if not search_permutation:
        return False
    if n > 6:
        raise ValueError("permutation search is limited to 6 generators")
    return any(fits(p) for p in itertools.permutations(range(1, n + 1)))


# the maps ∂1, D1, psi and the elements w, w0 on k{x, y, z}


def _require_xyz(ring: RingConfig) -> None:
    if ring.n != 3 or ring.m != 1:
        raise ValueError("these constructions live on three generators with one derivation")


def w_element(ring: RingConfig) -> DiffPolynomial:
    """w = y^2 - x z."""
    _require_xyz(ring)
    x, y, z = DiffPolynomial.generators(ring)
    return y**2 - x * z


def w0_element(ring: RingConfig) -> DiffPolynomial:
    """w0 = (2 y o y - x o z - z o x)/2, so w0' = w''/2."""
    _require_xyz(ring)
    x, y, z = DiffPolynomial.generators(ring)
    return (circ(y, y) * 2 - circ(x, z) - circ(z, x)) / 2


def partial1(ring: RingConfig) -> Derivation:
    """x -> 2y, y -> z, z -> 0."""
    _require_xyz(ring)
    x, y, z = DiffPolynomial.generators(ring)
    return Derivation(ring, (y * 2, z, DiffPolynomial.zero(ring)), novikov=True)


def d1(ring: RingConfig) -> Derivation:
    """D1 = (2y o w0) d/dx + (z o w0) d/dy."""
    _require_xyz(ring)
    x, y, z = DiffPolynomial.generators(ring)
    w0 = w0_element(ring)
    return Derivation(ring, (circ(y, w0) * 2, circ(z, w0), DiffPolynomial.zero(ring)), novikov=True)


def psi(ring: RingConfig, cap: int = 20) -> Endomorphism:
    return exp_derivation(d1(ring), cap)


def builtins(ring: RingConfig) -> dict:
    """Named objects: 'partial1', 'D1', 'w', 'w0', 'psi'."""
    return {
        "partial1": partial1(ring),
        "D1": d1(ring),
        "w": w_element(ring),
        "w0": w0_element(ring),
        "psi": psi(ring),
    }
