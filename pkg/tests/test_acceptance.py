"""Acceptance criteria, one test each, each printing a PASS/FAIL line.

Run directly (``python tests/test_acceptance.py``) for the same lines
without pytest.  Every comparison is exact equality of canonical forms.
"""

from __future__ import annotations

import contextlib
import io
import sys
import time
from typing import Callable

from novikov.abelian import comm_exp, comm_w_partial, nagata
from novikov.algebra import eval_combination, express_as_novikov, is_novikov, weight_one_monomials
from novikov.checks import paper_check
from novikov.cli import main
from novikov.core import XYZ, DiffPolynomial
from novikov.maps import d1, is_triangular, w_element

CORRUPT_D1 = "x=(y o w0); y=(z o w0)"
BUDGET_SECONDS = 10.0

ELAPSED: dict[int, float] = {}

_paper: list = []


def _paper_reports() -> dict[str, bool]:
    if not _paper:
        _paper.append({r.name: r.passed for r in paper_check()})
    return _paper[0]


def _cli(*argv: str) -> int:
    with contextlib.redirect_stdout(io.StringIO()), contextlib.redirect_stderr(io.StringIO()):
        return main(list(argv))


def criterion_1() -> bool:
    names = [
        "partial1(w) = 0",
        "w'' = 2y'^2 + 2yy'' - x''z - 2x'z' - xz''",
        "D1(w) = 0",
        "D1(w'') = 0",
        "D1(x) = y w''",
        "D1^2(x) = z (w'')^2 / 2",
        "D1^3(x) = 0",
        "D1(y) = z w'' / 2",
        "D1^2(y) = 0",
        "D1(z) = 0",
        "D1(w0) = 0",
        "2 y o w0 = y w''",
        "z o w0 = z w'' / 2",
    ]
    reports = _paper_reports()
    return all(reports[n] for n in names)


def criterion_2() -> bool:
    reports = _paper_reports()
    return all(reports[n] for n in (
        "exp(D1)(x) = x + 2 y o w0 + (z o w0) o w0",
        "exp(D1)(y) = y + z o w0",
        "exp(D1)(z) = z",
    ))


def criterion_3() -> bool:
    reports = _paper_reports()
    named = all(reports[n] for n in (
        "theta(w0) = y^2 - xz",
        "theta(psi(x)) = x + 2yw + zw^2",
        "theta(psi(y)) = y + zw",
        "theta(psi(z)) = z",
        "D1 induces 2yw d/dx + zw d/dy",
    ))
    return named and comm_exp(comm_w_partial()) == nagata()


def criterion_4() -> bool:
    monos = list(weight_one_monomials(3, 5))
    return bool(monos) and all(
        eval_combination(express_as_novikov(u), XYZ) == DiffPolynomial.monomial(XYZ, u) for u in monos
    )


def criterion_5() -> bool:
    return _cli("check", "identities", "--seed", "42", "--cases", "200", "--max-deg", "3") == 0


def criterion_6() -> bool:
    w = w_element(XYZ)
    return (
        not is_novikov(w)
        and not is_novikov(w.delta(1, 2))
        and not is_triangular(d1(XYZ))
        and _cli("check", "paper", "--d1-map", CORRUPT_D1) == 1
    )


CRITERIA: list[tuple[int, str, Callable[[], bool]]] = [
    (1, "check paper: fixed identities for partial1, w'' and D1 hold exactly", criterion_1),
    (2, "exp(D1) by the series equals the closed form", criterion_2),
    (3, "theta(w0), theta after psi, induced D1, exp(w partial) = Nagata", criterion_3),
    (4, "every weight-1 monomial over 3 generators, deg <= 5, round trips", criterion_4),
    (5, "seeded property suite, 200 cases each, exits 0", criterion_5),
    (6, "negative controls", criterion_6),
]


def _verdict(index: int) -> tuple[bool, str]:
    number, title, check = CRITERIA[index]
    start = time.perf_counter()
    try:
        ok = check()
    except Exception as exc:  # a crash is a failure, reported like one
        ok, title = False, f"{title} ({type(exc).__name__}: {exc})"
    ELAPSED[number] = time.perf_counter() - start
    line = f"{'PASS' if ok else 'FAIL'}  criterion {number}: {title}  [{ELAPSED[number]:.2f}s]"
    return ok, line


def _report(index: int, capsys) -> None:
    ok, line = _verdict(index)
    with capsys.disabled():
        print(f"\n{line}")
    assert ok, line


def test_criterion_1(capsys):
    _report(0, capsys)


def test_criterion_2(capsys):
    _report(1, capsys)


def test_criterion_3(capsys):
    _report(2, capsys)


def test_criterion_4(capsys):
    _report(3, capsys)


def test_criterion_5(capsys):
    _report(4, capsys)


def test_criterion_6(capsys):
    _report(5, capsys)


def test_suite_runs_within_budget(capsys):
    missing = [n for n, _, _ in CRITERIA if n not in ELAPSED]
    for n in missing:
        _verdict(n - 1)
    total = sum(ELAPSED.values())
    ok = total < BUDGET_SECONDS
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'}  all criteria in {total:.2f}s (budget {BUDGET_SECONDS:.0f}s)")
    assert ok


if __name__ == "__main__":
    results = [_verdict(i) for i in range(len(CRITERIA))]
    for _, line in results:
        print(line)
    total = sum(ELAPSED.values())
    print(f"{'PASS' if total < BUDGET_SECONDS else 'FAIL'}  all criteria in {total:.2f}s (budget {BUDGET_SECONDS:.0f}s)")
    sys.exit(0 if all(ok for ok, _ in results) and total < BUDGET_SECONDS else 1)
