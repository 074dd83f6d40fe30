from fractions import Fraction
from itertools import combinations_with_replacement

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import T, polys, same, to_sympy, weight_one_monomials, weight_one_polys
from novikov.algebra import (
    Leaf,
    NotNovikovError,
    NovikovElement,
    Prod,
    circ,
    eval_combination,
    eval_term,
    express_as_novikov,
    express_polynomial,
    format_combination,
    is_novikov,
    nov_mul,
    weight_one_monomials as enumerate_weight_one,
)
from novikov.core import XYZ, DerivativeVariable, DiffMonomial, DiffPolynomial, RingConfig
from novikov.syntax import parse_poly

x, y, z = DiffPolynomial.generators(XYZ)
X, Y, Z = (Leaf(i) for i in (1, 2, 3))


def P(text: str) -> DiffPolynomial:
    return parse_poly(text, XYZ)


def mono(text: str) -> DiffMonomial:
    (u,) = P(text).monomials()
    return u


def elements():
    return st.builds(NovikovElement, weight_one_polys(max_deg=2), st.fractions(-3, 3, max_denominator=2))


def test_circ_definition():
    assert circ(x, y) == x * y.delta()
    assert circ(x, DiffPolynomial.constant(XYZ, 5)) == 0


def test_w0_from_products():
    w0 = (2 * circ(y, y) - circ(x, z) - circ(z, x)) / 2
    assert w0 == P("y*y' - 1/2*x*z' - 1/2*z*x'")


def test_circ_needs_one_derivation():
    f = DiffPolynomial.generators(RingConfig(("x", "y"), 2))[0]
    with pytest.raises(ValueError):
        circ(f, f)


def test_membership():
    w = y**2 - x * z
    assert is_novikov(x + 2 * y * y.delta())
    assert not is_novikov(w)
    assert not is_novikov(w.delta(1, 2))
    assert is_novikov(y * w.delta(1, 2))


def test_unit_is_two_sided():
    one = NovikovElement.scalar(XYZ, 1)
    a = NovikovElement.lift(x * y.delta() + z)
    assert nov_mul(one, a) == a
    assert nov_mul(a, one) == a


def test_product_of_bodies():
    a = NovikovElement.generator(XYZ, "y")
    assert nov_mul(a, a) == NovikovElement.lift(y * y.delta())


def test_element_rejects_wrong_weight():
    with pytest.raises(NotNovikovError):
        NovikovElement(y**2 - x * z)


def test_decomposition_examples():
    assert eval_combination(express_as_novikov(mono("y*y'")), XYZ) == P("y*y'")
    assert format_combination(express_as_novikov(mono("y*y'")), XYZ) == "y o y"
    for text in ("x*x'*y'", "x*z*y''"):
        combo = express_as_novikov(mono(text))
        assert eval_combination(combo, XYZ) == P(text)


def test_spec_decomposition_is_also_valid():
    # x o (z o y) - (x o z) o y evaluates to x z y''
    combo = [(Fraction(1), Prod(X, Prod(Z, Y))), (Fraction(-1), Prod(Prod(X, Z), Y))]
    assert eval_combination(combo, XYZ) == P("x*z*y''")


def test_eval_term_examples():
    assert eval_term(X, XYZ).body == x
    assert eval_term(Prod(Prod(X, Y), Z), XYZ).body == P("x*y'*z'")
    assert eval_term(Prod(X, Prod(Y, Z)), XYZ).body == P("x*y'*z' + x*y*z''")
    assert eval_term(Prod(Prod(X, Y), X), XYZ).body == P("x*x'*y'")


def test_weight_one_enumeration_matches_brute_force():
    brute = set()
    for k in range(1, 6):
        symbols = [DerivativeVariable(v, (r,)) for v in (1, 2, 3) for r in range(k)]
        for combo in combinations_with_replacement(symbols, k):
            if sum(s.order for s in combo) == k - 1:
                brute.add(DiffMonomial((s, 1) for s in combo))
    monos = list(enumerate_weight_one(3, 5))
    assert len(monos) == len(brute) == 510
    assert set(monos) == brute


def test_exhaustive_round_trip():
    for u in enumerate_weight_one(3, 5):
        assert eval_combination(express_as_novikov(u), XYZ) == DiffPolynomial.monomial(XYZ, u)


def test_express_rejects_other_weights():
    with pytest.raises(NotNovikovError):
        express_polynomial(y**2)


@given(polys(), polys())
def test_circ_matches_calculus(f, g):
    assert same(circ(f, g), to_sympy(f) * sympy.diff(to_sympy(g), T))


@given(polys(), polys(), polys())
def test_left_symmetric_identity(f, g, h):
    assert circ(circ(f, g), h) - circ(f, circ(g, h)) == circ(circ(g, f), h) - circ(g, circ(f, h))


@given(polys(), polys(), polys())
def test_right_commutative_identity(f, g, h):
    assert circ(circ(f, g), h) == circ(circ(f, h), g)


@settings(max_examples=50)
@given(elements(), elements(), elements())
def test_left_symmetric_identity_with_unit(a, b, c):
    lhs = nov_mul(nov_mul(a, b), c) - nov_mul(a, nov_mul(b, c))
    rhs = nov_mul(nov_mul(b, a), c) - nov_mul(b, nov_mul(a, c))
    assert lhs == rhs


def test_right_commutativity_fails_once_the_unit_is_adjoined():
    one = NovikovElement.scalar(XYZ, 1)
    a, b = NovikovElement.generator(XYZ, "x"), NovikovElement.generator(XYZ, "y")
    assert nov_mul(nov_mul(one, a), b) != nov_mul(nov_mul(one, b), a)


@given(weight_one_monomials(max_deg=4), weight_one_monomials(max_deg=4))
def test_weight_one_span_is_closed(u, v):
    product = circ(DiffPolynomial.monomial(XYZ, u), DiffPolynomial.monomial(XYZ, v))
    assert product.is_zero() or product.weight() == 1


@given(weight_one_monomials(max_deg=7))
def test_round_trip_beyond_degree_five(u):
    assert eval_combination(express_as_novikov(u), XYZ) == DiffPolynomial.monomial(XYZ, u)


@given(weight_one_polys(max_deg=4))
def test_polynomial_round_trip(f):
    assert eval_combination(express_polynomial(f), XYZ) == f
