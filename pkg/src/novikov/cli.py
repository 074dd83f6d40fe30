"""Command line front end.

Exit status: 0 on success, 1 when an identity or property fails, 2 on usage
or parse errors.  Maps are composed as ``compose(phi, psi) = phi after psi``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import abelian
from .algebra import NovikovElement, eval_combination, express_polynomial, is_novikov
from .checks import Report, paper_check, run_properties
from .core import DiffPolynomial, RingConfig
from .maps import (
    Derivation,
    apply_endomorphism,
    d1,
    exp_derivation,
    is_locally_nilpotent,
    nilpotency_index,
    partial1,
    power,
    w0_element,
    w_element,
)
from .syntax import ParseError, format_value, parse_poly, value_to_json

DEFAULT_SEED = 42


class UsageError(Exception):
    pass


def _ring(args) -> RingConfig:
    names = tuple(s.strip() for s in args.names.split(","))
    return RingConfig(names, args.m)


def _env(ring: RingConfig) -> dict[str, DiffPolynomial]:
    """w and w0 are predefined on k{x, y, z}."""
    if ring.names != ("x", "y", "z") or ring.m != 1:
        return {}
    return {"w": w_element(ring), "w0": w0_element(ring)}


def _parse(text: str, ring: RingConfig) -> DiffPolynomial:
    return parse_poly(text, ring, _env(ring))


def _parse_images(text: str, ring: RingConfig, default) -> list[DiffPolynomial]:
    """'x=2*y; y=z' -> images, with ``default(i)`` for generators not listed."""
    images = [default(i) for i in range(1, ring.n + 1)]
    for chunk in filter(None, (c.strip() for c in text.split(";"))):
        name, sep, expr = chunk.partition("=")
        if not sep:
            raise UsageError(f"expected 'name=expression', got {chunk!r}")
        images[ring.index(name.strip()) - 1] = _parse(expr, ring)
    return images


def _derivation(args, ring: RingConfig) -> Derivation:
    if args.map:
        images = _parse_images(args.map, ring, lambda i: DiffPolynomial.zero(ring))
        novikov = ring.m == 1 and all(is_novikov(f) for f in images)
        return Derivation(ring, tuple(images), novikov)
    if args.named == "partial1":
        return partial1(ring)
    if args.named == "D1":
        return d1(ring)
    raise UsageError("give --named or --map")


def _emit(args, value, ring: RingConfig) -> None:
    if args.json:
        print(json.dumps(value_to_json(value, ring)))
    else:
        print(format_value(value, ring))


def cmd_eval(args) -> int:
    ring = _ring(args)
    f = _parse(args.expr, ring)
    if args.json:
        out = {"value": value_to_json(f, ring)}
        if not f.is_zero():
            out.update(deg=f.deg(), d=f.d(), weight=f.weight())
        if ring.m == 1:
            out["novikov"] = is_novikov(f.without_constant())
        print(json.dumps(out))
    else:
        print(format_value(f, ring))
    return 0


def cmd_derive(args) -> int:
    ring = _ring(args)
    D = _derivation(args, ring)
    f = _parse(args.expr, ring)
    if args.nilpotency:
        index = nilpotency_index(D, f, args.nilpotency)
        if args.json:
            print(json.dumps({"index": index}))
        else:
            print("unknown" if index is None else index)
        return 0
    _emit(args, power(D, f, args.power), ring)
    return 0


def cmd_exp(args) -> int:
    ring = _ring(args)
    D = _derivation(args, ring)
    nil = is_locally_nilpotent(D, args.cap)
    if not nil:
        shown = ", ".join("unknown" if i is None else str(i) for i in nil.indices)
        print(f"could not establish local nilpotency within cap {args.cap}: ({shown})", file=sys.stderr)
        return 1
    phi = exp_derivation(D, args.cap)
    if args.apply:
        _emit(args, apply_endomorphism(phi, _parse(args.apply, ring)), ring)
    else:
        _emit(args, phi, ring)
    return 0


def cmd_theta(args) -> int:
    ring = _ring(args)
    a = NovikovElement.lift(_parse(args.expr, ring))
    _emit(args, abelian.theta(a), ring)
    return 0


def cmd_decompose(args) -> int:
    ring = _ring(args)
    f = _parse(args.expr, ring)
    combo = express_polynomial(f)
    if eval_combination(combo, ring) != f:
        print("decomposition does not evaluate back to the input", file=sys.stderr)
        return 1
    _emit(args, combo, ring)
    return 0


def _report(args, reports: list[Report]) -> int:
    ok = all(r.passed for r in reports)
    if args.json:
        print(json.dumps([r.to_json() for r in reports]))
    else:
        for r in reports:
            line = f"{r.status.upper():4}  {r.name}"
            if r.detail and not r.passed:
                line += f"  ({r.detail})"
            print(line)
        print(f"{sum(r.passed for r in reports)}/{len(reports)} passed")
    return 0 if ok else 1


def cmd_check(args) -> int:
    if args.what == "paper":
        override = None
        if args.d1_map:
            ring = RingConfig(("x", "y", "z"), 1)
            images = _parse_images(args.d1_map, ring, lambda i: DiffPolynomial.zero(ring))
            override = Derivation(ring, tuple(images))
        return _report(args, paper_check(override))
    seed = args.seed if args.seed is not None else int(os.environ.get("NOVIKOV_SEED", DEFAULT_SEED))
    return _report(args, run_properties(seed, args.cases, args.max_deg))


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--names", default="x,y,z", help="comma separated generator names (default x,y,z)")
    common.add_argument("--m", type=_positive, default=1, help="number of commuting derivations (default 1)")
    common.add_argument("--json", action="store_true", help="machine readable output")

    parser = argparse.ArgumentParser(
        prog="novikov",
        description="Exact computations in differential polynomial algebras and free Novikov algebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate an expression to canonical form")
    p.add_argument("expr")
    p.set_defaults(func=cmd_eval)

    def map_options(p):
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--named", choices=["partial1", "D1"], help="built-in derivation on k{x,y,z}")
        group.add_argument("--map", help="generator images, e.g. 'x=2*y; y=z; z=0'")

    p = sub.add_parser("derive", parents=[common], help="apply a derivation")
    p.add_argument("expr")
    map_options(p)
    p.add_argument("--power", type=int, default=1, help="apply the derivation k times")
    p.add_argument("--nilpotency", type=_positive, metavar="CAP", help="report the nilpotency index up to CAP")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("exp", parents=[common], help="exponential of a locally nilpotent derivation")
    map_options(p)
    p.add_argument("--cap", type=_positive, default=20, help="iteration cap for nilpotency (default 20)")
    p.add_argument("--apply", metavar="EXPR", help="print the image of EXPR instead of the generator images")
    p.set_defaults(func=cmd_exp)

    p = sub.add_parser("theta", parents=[common], help="abelianize a Novikov element into k[X]")
    p.add_argument("expr")
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("decompose", parents=[common], help="write a weight-1 polynomial with o-words")
    p.add_argument("expr")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("check", parents=[common], help="run the identity checks")
    p.add_argument("what", choices=["paper", "identities"])
    p.add_argument("--seed", type=int, help="property seed (default $NOVIKOV_SEED or 42)")
    p.add_argument("--cases", type=_positive, default=200)
    p.add_argument("--max-deg", type=_positive, default=3)
    p.add_argument("--d1-map", help="replace D1 by these images (negative control for 'check paper')")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, UsageError, KeyError, ValueError) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {message}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
