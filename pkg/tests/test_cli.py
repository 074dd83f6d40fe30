import json
import subprocess
import sys

import pytest

from novikov.cli import main

CORRUPT_D1 = "x=(y o w0); y=(z o w0)"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_prints_canonical_form(capsys):
    code, out, _ = run(capsys, "eval", "w0")
    assert code == 0
    assert out.strip() == "y*y' - 1/2*x'*z - 1/2*x*z'"
    code, out, _ = run(capsys, "eval", "(y^2 - x*z)''")
    assert out.strip() == "2*y'^2 + 2*y*y'' - x''*z - 2*x'*z' - x*z''"


def test_eval_json(capsys):
    code, out, _ = run(capsys, "eval", "--json", "y'^2")
    data = json.loads(out)
    assert data["value"]["terms"][0] == {"coeff": "1/1", "factors": [{"var": "y", "order": 1, "power": 2}]}
    assert (data["deg"], data["d"], data["weight"], data["novikov"]) == (2, 2, 0, False)


def test_parse_error_exits_2(capsys):
    code, _, err = run(capsys, "eval", "x o y o z")
    assert code == 2
    assert "chained" in err


def test_unknown_generator_exits_2(capsys):
    code, _, _ = run(capsys, "derive", "x", "--map", "q=1")
    assert code == 2


def test_derive(capsys):
    code, out, _ = run(capsys, "derive", "x", "--named", "D1", "--power", "3")
    assert (code, out.strip()) == (0, "0")
    code, out, _ = run(capsys, "derive", "x", "--named", "D1", "--nilpotency", "10")
    assert out.strip() == "3"
    code, out, _ = run(capsys, "derive", "y^2 - x*z", "--map", "x=2*y; y=z")
    assert out.strip() == "0"


def test_exp(capsys):
    code, out, _ = run(capsys, "exp", "--named", "D1", "--apply", "z")
    assert (code, out.strip()) == (0, "z")
    code, out, _ = run(capsys, "exp", "--named", "partial1")
    assert out.splitlines() == ["x -> z + 2*y + x", "y -> z + y", "z -> z"]


def test_exp_unknown_nilpotency_exits_1(capsys):
    code, _, err = run(capsys, "exp", "--map", "x=x", "--cap", "5")
    assert code == 1
    assert "unknown" in err


def test_theta_and_decompose(capsys):
    code, out, _ = run(capsys, "theta", "w0")
    assert (code, out.strip()) == (0, "y^2 - x*z")
    code, out, _ = run(capsys, "decompose", "y*y'")
    assert (code, out.strip()) == (0, "y o y")


def test_check_paper(capsys):
    code, out, _ = run(capsys, "check", "paper")
    assert code == 0
    assert out.strip().endswith("27/27 passed")


def test_check_paper_json(capsys):
    code, out, _ = run(capsys, "check", "paper", "--json")
    reports = json.loads(out)
    assert code == 0
    assert {r["status"] for r in reports} == {"pass"}
    assert set(reports[0]) == {"name", "status", "detail"}


def test_corrupted_d1_fails(capsys):
    code, out, _ = run(capsys, "check", "paper", "--d1-map", CORRUPT_D1)
    assert code == 1
    assert "FAIL" in out


def test_check_identities_small(capsys):
    code, out, _ = run(capsys, "check", "identities", "--cases", "5")
    assert code == 0
    assert out.strip().endswith("19/19 passed")


def test_seed_determinism(capsys, monkeypatch):
    first = run(capsys, "check", "identities", "--cases", "3", "--seed", "7", "--json")[1]
    monkeypatch.setenv("NOVIKOV_SEED", "7")
    from_env = run(capsys, "check", "identities", "--cases", "3", "--json")[1]
    monkeypatch.setenv("NOVIKOV_SEED", "8")
    flag_wins = run(capsys, "check", "identities", "--cases", "3", "--seed", "7", "--json")[1]
    assert first == from_env == flag_wins


def test_missing_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "novikov", "eval", "x o y"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "x*y'"
