from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import S1, S2, T, monomials, polys, same, to_sympy
from novikov.core import (
    ONE,
    XYZ,
    DerivativeVariable,
    DiffMonomial,
    DiffPolynomial,
    RingConfig,
    RingMismatchError,
    apply_delta,
    format_poly,
    mono_mul,
)
from novikov.syntax import parse_poly

R2 = RingConfig(("x", "y", "z"), 2)
x, y, z = DiffPolynomial.generators(XYZ)


def P(text: str, ring: RingConfig = XYZ) -> DiffPolynomial:
    return parse_poly(text, ring)


def dv(var: int, order: int) -> DerivativeVariable:
    return DerivativeVariable(var, (order,))


def test_one_is_multiplicative_identity():
    u = DiffMonomial([(dv(1, 0), 1), (dv(2, 1), 1)])
    assert mono_mul(ONE, u) == u
    assert mono_mul(u, ONE) == u


def test_monomial_product_is_canonical():
    left = DiffMonomial([(dv(1, 0), 1), (dv(2, 1), 1)])
    right = DiffMonomial([(dv(1, 1), 1)])
    expected = DiffMonomial([(dv(2, 1), 1), (dv(1, 1), 1), (dv(1, 0), 1)])
    assert mono_mul(left, right) == expected
    assert mono_mul(left, right).factors == expected.factors


def test_exponents_merge():
    yp = DiffMonomial([(dv(2, 1), 1)])
    assert mono_mul(yp, yp).factors == ((dv(2, 1), 2),)


def test_factor_order_is_var_then_theta():
    assert dv(1, 5) < dv(2, 0) < dv(2, 1)


def test_addition_examples():
    assert x + 0 == x
    assert (x + y) + (-1) * x == y
    assert P("1/2*(2*y*y' - x*z' - z*x')") == P("y*y' - 1/2*x*z' - 1/2*z*x'")


def test_multiplication_examples():
    assert x * 1 == x
    assert (x + y.delta()) * x.delta() == P("x*x' + x'*y'")
    assert (y**2 - x * z) * z == P("y^2*z - x*z^2")


def test_delta_examples():
    w = y**2 - x * z
    assert DiffPolynomial.constant(XYZ, 7).delta() == 0
    assert w.delta() == P("2*y*y' - x'*z - x*z'")
    assert w.delta(1, 2) == P("2*y'^2 + 2*y*y'' - x''*z - 2*x'*z' - x*z''")


def test_delta_against_calculus():
    w = y**2 - x * z
    expr = to_sympy(w)
    assert same(w.delta(), sympy.diff(expr, T))
    assert same(w.delta(1, 2), sympy.diff(expr, T, 2))


def test_delta_out_of_range():
    with pytest.raises(IndexError):
        apply_delta(2, x)


def test_grading():
    w = y**2 - x * z
    assert (w.deg(), w.d(), w.weight()) == (2, 0, 2)
    wpp = w.delta(1, 2)
    assert (wpp.deg(), wpp.d(), wpp.weight()) == (2, 2, 0)
    assert (x * y.delta()).weight() == 1
    assert (x + x * y).deg() is None
    with pytest.raises(ValueError):
        DiffPolynomial.zero(XYZ).deg()


def test_format_examples():
    w = y**2 - x * z
    assert format_poly(w.delta(1, 2)) == "2*y'^2 + 2*y*y'' - x''*z - 2*x'*z' - x*z''"
    assert format_poly(DiffPolynomial.zero(XYZ)) == "0"
    assert format_poly(x.delta(1, 4)) == "x^(4)"
    assert format_poly(DiffPolynomial.variable(R2, "x", (1, 2))) == "x^(1,2)"


def test_rings_do_not_mix():
    other = DiffPolynomial.generators(RingConfig(("a", "b"), 1))[0]
    with pytest.raises(RingMismatchError):
        x + other


def test_ring_config_validation():
    with pytest.raises(ValueError):
        RingConfig(("x", "o"), 1)
    with pytest.raises(ValueError):
        RingConfig(("x", "x"), 1)
    with pytest.raises(ValueError):
        RingConfig(("x",), 0)


def test_exact_rationals():
    f = x / 3 + x / 6
    assert f.coeff(DiffMonomial([(dv(1, 0), 1)])) == Fraction(1, 2)


@given(polys(), polys(), polys())
def test_commutative_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == 0


@given(polys())
def test_canonical_form_is_unique(f):
    rebuilt = DiffPolynomial(XYZ, {DiffMonomial(reversed(u.factors)): c for u, c in f.items()})
    assert rebuilt == f
    assert hash(rebuilt) == hash(f)


@given(polys(), polys())
def test_leibniz_for_delta(f, g):
    assert (f * g).delta() == f.delta() * g + f * g.delta()


@given(polys())
def test_delta_matches_calculus(f):
    assert same(f.delta(), sympy.diff(to_sympy(f), T))


@given(polys(R2), polys(R2), st.integers(1, 2))
def test_leibniz_for_delta_two_derivations(f, g, i):
    assert (f * g).delta(i) == f.delta(i) * g + f * g.delta(i)


@settings(max_examples=30)
@given(polys(R2))
def test_deltas_commute(f):
    assert f.delta(1).delta(2) == f.delta(2).delta(1)
    assert same(f.delta(1).delta(2), sympy.diff(to_sympy(f), S1, S2))


@given(monomials(), monomials())
def test_grading_is_additive(u, v):
    w = mono_mul(u, v)
    assert w.deg == u.deg + v.deg
    assert w.d == u.d + v.d


@settings(max_examples=50)
@given(monomials(max_deg=3))
def test_delta_raises_d_by_one(u):
    f = DiffPolynomial.monomial(XYZ, u).delta()
    if u.deg:
        assert f.deg() == u.deg
        assert f.d() == u.d + 1
