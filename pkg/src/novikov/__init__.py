"""Exact arithmetic in differential polynomial algebras k{X}, the free Novikov
algebra inside them, derivations and automorphisms, and abelianization to k[X]."""

from .abelian import (
    CommDerivation,
    CommEndomorphism,
    CommPolynomial,
    comm_exp,
    induced_derivation,
    induced_endomorphism,
    nagata,
    theta,
)
from .algebra import (
    Leaf,
    NotNovikovError,
    NovikovElement,
    Prod,
    circ,
    eval_combination,
    eval_term,
    express_as_novikov,
    express_polynomial,
    is_novikov,
    nov_mul,
    weight_one_monomials,
)
from .core import (
    XYZ,
    DerivativeVariable,
    DiffMonomial,
    DiffPolynomial,
    RingConfig,
    RingMismatchError,
    apply_delta,
    mono_mul,
)
from .maps import (
    Derivation,
    ElementaryAuto,
    Endomorphism,
    NilpotencyError,
    apply_derivation,
    apply_endomorphism,
    apply_tame,
    compose,
    d1,
    elementary,
    exp_derivation,
    exp_series,
    invert_elementary,
    is_locally_nilpotent,
    is_triangular,
    nilpotency_index,
    partial1,
    psi,
)
from .syntax import ParseError, format_value, parse_poly

__all__ = [name for name in dir() if not name.startswith("_")]
