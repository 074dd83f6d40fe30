import sympy
from hypothesis import settings
from hypothesis import strategies as st

from novikov.core import XYZ, DerivativeVariable, DiffMonomial, DiffPolynomial, RingConfig

# exact arithmetic on growing polynomials has no useful per-example deadline
settings.register_profile("exact", deadline=None)
settings.load_profile("exact")

T = sympy.Symbol("t")
S1, S2 = sympy.symbols("s1 s2")


def to_sympy(f: DiffPolynomial):
    """Generators become functions of t (m = 1) or of (s1, s2) (m = 2); delta_i becomes d/dt or d/ds_i."""
    ring = f.ring
    args = (T,) if ring.m == 1 else (S1, S2)[: ring.m]
    funcs = [sympy.Function(name)(*args) for name in ring.names]
    out = sympy.Integer(0)
    for u, c in f.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for v, e in u.factors:
            base = funcs[v.var - 1]
            for s, k in zip(args, v.theta):
                if k:
                    base = sympy.diff(base, s, k)
            term *= base**e
        out += term
    return sympy.expand(out)


def same(f: DiffPolynomial, expr) -> bool:
    return sympy.expand(to_sympy(f) - expr) == 0


coefficients = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def monomials(draw, ring: RingConfig = XYZ, max_deg: int = 3, max_order: int = 2):
    n = draw(st.integers(0, max_deg))
    factors = []
    for _ in range(n):
        var = draw(st.integers(1, ring.n))
        theta = tuple(draw(st.integers(0, max_order)) for _ in range(ring.m))
        factors.append((DerivativeVariable(var, theta), 1))
    return DiffMonomial(factors)


@st.composite
def polys(draw, ring: RingConfig = XYZ, max_deg: int = 3, max_terms: int = 4):
    terms = draw(st.lists(st.tuples(monomials(ring, max_deg), coefficients), max_size=max_terms))
    out: dict = {}
    for u, c in terms:
        out[u] = out.get(u, 0) + c
    return DiffPolynomial(ring, out)


@st.composite
def weight_one_monomials(draw, ring: RingConfig = XYZ, max_deg: int = 3):
    deg = draw(st.integers(1, max_deg))
    orders = [0] * deg
    for _ in range(deg - 1):
        orders[draw(st.integers(0, deg - 1))] += 1
    vars_ = [draw(st.integers(1, ring.n)) for _ in range(deg)]
    return DiffMonomial([(DerivativeVariable(v, (k,)), 1) for v, k in zip(vars_, orders)])


@st.composite
def weight_one_polys(draw, ring: RingConfig = XYZ, max_deg: int = 3, max_terms: int = 3):
    terms = draw(st.lists(st.tuples(weight_one_monomials(ring, max_deg), coefficients), max_size=max_terms))
    out: dict = {}
    for u, c in terms:
        out[u] = out.get(u, 0) + c
    return DiffPolynomial(ring, out)
