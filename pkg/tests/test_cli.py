from __future__ import annotations

import json

import pytest

from ccx import cli
from ccx import cohomology as coh
from ccx.conformal import heisenberg_virasoro_extended
from ccx.specfile import parse_spec

BAD_POLY = """
[algebra]
name = "bad"
generators = ["L"]

[[bracket]]
left = "L"
right = "L"
value = "(D+2*x"
"""

WRONG_ALGEBRA = """
[algebra]
name = "wrong"
generators = ["L", "M"]

[[bracket]]
left = "L"
right = "L"
value = "(D+2*x)*L"

[[bracket]]
left = "M"
right = "M"
value = "x*M"
"""

COCYCLES = """
[[cocycle]]
central = "C"
scale = "-1/24"
values = [ { args = ["L", "L"], value = "-x1^3+x2^3" } ]
"""


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check(capsys, tmp_path):
    code, out, _ = run(capsys, "check", "builtin:HV")
    assert code == 0 and out.startswith("HV: PASS")
    assert run(capsys, "check", "builtin:HVext")[0] == 0
    assert run(capsys, "check", "builtin:HV", "--coeff", "MDeltaAlphaBeta")[0] == 0
    bad = tmp_path / "bad.toml"
    bad.write_text(BAD_POLY, encoding="utf-8")
    code, _, err = run(capsys, "check", str(bad))
    assert code == 2
    assert "unbalanced parenthesis at 1:6" in err
    wrong = tmp_path / "wrong.toml"
    wrong.write_text(WRONG_ALGEBRA, encoding="utf-8")
    code, out, _ = run(capsys, "check", str(wrong))
    assert code == 1 and "FAIL" in out
    assert run(capsys, "check", str(tmp_path / "missing.toml"))[0] == 2
    assert run(capsys, "check", "builtin:Witt")[0] == 2


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["cohomology", "--basic", "--reduced"])
    assert info.value.code == 2
    capsys.readouterr()
    assert run(capsys, "cohomology", "--max-q", "-1")[0] == 2


def test_basic_and_reduced_tables(capsys):
    code, out, _ = run(capsys, "cohomology", "builtin:HV", "--coeff", "trivial", "--basic", "--json")
    assert code == 0
    data = json.loads(out)
    assert [r["dim"] for r in data["basic"]] == [1, 0, 0, 3, 2, 0, 0]
    code, out, _ = run(capsys, "cohomology", "builtin:HV", "--reduced", "--max-q", "4", "--json")
    assert code == 0
    rows = json.loads(out)["reduced"]
    assert [r["dim"] for r in rows] == [1, 0, 3, 5, 2]
    assert [r["direct"] for r in rows] == [1, 0, 3, 5, 2]


def test_output_independent_of_jobs(capsys):
    args = ["cohomology", "builtin:HV", "--max-q", "4", "--verify"]
    one = run(capsys, *args)
    two = run(capsys, *args, "--jobs", "2")
    again = run(capsys, *args)
    assert one == two == again
    assert one[0] == 0


def test_unstable_exit_code(capsys, monkeypatch):
    def unstable(q, bound, algebra=None):
        raise coh.Unstable(bound, "forced")

    monkeypatch.setattr(coh, "reduced_dim_direct", unstable)
    code, _, err = run(capsys, "cohomology", "--max-q", "2")
    assert code == 3
    assert "--degree-bound" in err


def test_vanishing_command(capsys):
    code, out, _ = run(capsys, "cohomology", "builtin:HV", "--coeff", "Ca", "--max-q", "2", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["passed"] and data["side_condition"] == "a != 0"


def test_dump_matrices(capsys, tmp_path):
    code, _, _ = run(capsys, "cohomology", "--basic", "--max-q", "3", "--dump-matrices", str(tmp_path))
    assert code == 0
    files = sorted(p.name for p in tmp_path.iterdir())
    assert "d_q=3_(L-M-M)_deg=1.json" in files
    data = json.loads((tmp_path / "d_q=3_(L-M-M)_deg=1.json").read_text(encoding="utf-8"))
    assert data["cols"] == 1


@pytest.mark.parametrize("op, extra", [("tau", ["--max-q", "3"]), ("tau2", ["--max-q", "3"]), ("tau3", ["--max-q", "2"])])
def test_homotopy_command(capsys, op, extra):
    code, out, _ = run(capsys, "homotopy", "builtin:HV", "--op", op, *extra)
    assert code == 0
    assert "PASS" in out


def test_extend_command(capsys, tmp_path):
    code, out, _ = run(capsys, "extend", "builtin:HV")
    assert code == 0
    body = "\n".join(line for line in out.splitlines() if not line.startswith("#"))
    E = parse_spec(body).algebra
    assert E.bracket == heisenberg_virasoro_extended().bracket
    path = tmp_path / "c.toml"
    path.write_text(COCYCLES, encoding="utf-8")
    code, out, _ = run(capsys, "extend", "builtin:Vir", "--cocycles", str(path), "--name", "VirC")
    assert code == 0 and 'name = "VirC"' in out
    assert run(capsys, "extend", "builtin:Vir")[0] == 2
    path.write_text(COCYCLES.replace("-x1^3+x2^3", "x1^5-x2^5"), encoding="utf-8")
    assert run(capsys, "extend", "builtin:Vir", "--cocycles", str(path))[0] == 2
