import json

import pytest

from mzv.cli import main, parse_grid
from mzv.errors import DomainError
from mzv.suites import SuiteReport
from mzv.transport import ProofTrace


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("arg, expected", [("1,2", "3"), ("2", "2"), ("2,3", "1,2,2")])
def test_dual(capsys, arg, expected):
    code, out, _ = run(capsys, "dual", arg)
    assert code == 0 and out.strip() == expected


@pytest.mark.parametrize("arg", ["2,1", "", "1,x", "0,2"])
def test_dual_bad_input_exit_2(capsys, arg):
    code, _, err = run(capsys, "dual", arg)
    assert code == 2 and err.startswith("mzv:")


def test_eval_zeta3(capsys):
    code, out, _ = run(capsys, "eval", "zeta", "3", "--trunc", "2000", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["truncation_used"] == 2000
    assert abs(float(data["value"]) - 1.202056903) < 2e-7
    assert abs(float(data["limit"]) - 1.2020569031595942) < 1e-12


def test_eval_conn_euler_state(capsys):
    code, out, _ = run(capsys, "eval", "conn", "1,1", "1", "--q", "1", "--x", "0", "--json")
    assert code == 0
    assert abs(float(json.loads(out)["limit"]) - 1.2020569031595942) < 1e-10


def test_eval_ohno_text(capsys):
    code, out, _ = run(capsys, "eval", "ohno", "1,2", "--c", "1", "--q", "1")
    assert code == 0
    lines = dict(line.split(None, 1) for line in out.strip().splitlines())
    assert abs(float(lines["limit"].split()[0]) - 1.0823232337111382) < 1e-10


def test_eval_exact_regime(capsys):
    code, out, _ = run(capsys, "eval", "qzeta", "2", "--q", "1/2", "--trunc", "3", "--exact", "--json")
    assert code == 0
    # 1/2 + (1/4)/(3/2)^2 + (1/8)/(7/4)^2 = 1/2 + 1/9 + 2/49
    assert json.loads(out)["value"] == "575/882"


def test_eval_gen_and_qzeta(capsys):
    code, out, _ = run(capsys, "eval", "gen", "1,2", "--q", "1/2", "--x", "1/3", "--json")
    a = json.loads(out)["limit"]
    code2, out, _ = run(capsys, "eval", "gen", "3", "--q", "1/2", "--x", "1/3", "--json")
    assert code == code2 == 0
    assert abs(float(a) - float(json.loads(out)["limit"])) < 1e-30


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "zeta", "3", "--trunc", "0"],
        ["eval", "zeta", "3", "--prec", "40"],
        ["eval", "qzeta", "2", "--q", "0"],
        ["eval", "qzeta", "2", "--q", "3/2"],
        ["eval", "gen", "2", "--x", "1"],
        ["eval", "conn", "1"],
        ["eval", "zeta", "abc"],
        ["eval", "conn", "1", ""],
    ],
)
def test_eval_domain_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


@pytest.mark.parametrize("kind", ["zeta", "qzeta", "gen", "ohno"])
def test_eval_divergent_exit_3(capsys, kind):
    code, _, err = run(capsys, "eval", kind, "2,1", "--q", "1/2")
    assert code == 3 and "diverges" in err


def test_argparse_usage_error_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["eval", "nonsense", "2"])
    assert exc.value.code == 2


def test_prove_emits_trace(capsys):
    code, out, _ = run(capsys, "prove", "1,2")
    assert code == 0
    trace = ProofTrace.from_json(out.strip())
    assert [m.value for m in trace.moves] == ["B", "A", "A"]
    assert len(trace.states) == 4
    code, out, _ = run(capsys, "prove", "2")
    assert len(json.loads(out)["states"]) == 3


def test_prove_verify(capsys):
    code, out, _ = run(capsys, "prove", "1,2", "--verify", "--q", "1", "--x", "0")
    trace_line, report_line = out.strip().splitlines()
    assert code == 0
    assert ProofTrace.from_json(trace_line).dual == (3,)
    report = json.loads(report_line)
    assert report["passed"] and report["max_deviation"] < 1e-6


def test_prove_verify_failure_exit_1(capsys):
    code, _, _ = run(capsys, "prove", "1,2", "--verify", "--trunc", "50", "--tol", "0")
    assert code == 1


def test_prove_non_admissible_exit_2(capsys):
    assert run(capsys, "prove", "1")[0] == 2


def test_check_telescope_json_round_trip(capsys):
    code, out, _ = run(capsys, "check", "telescope", "--grid", "1/2:1/3,1:0", "--a-max", "10", "--json")
    report = SuiteReport.from_json(out)
    assert code == 0 and report.passed
    assert len(report.cases) == 2 * 6 * 5
    assert all(c.deviation == "0" for c in report.cases)
    assert SuiteReport.from_json(report.dumps()) == report


def test_check_duality(capsys):
    code, out, _ = run(capsys, "check", "duality", "--max-weight", "4", "--q", "1", "--x", "0")
    assert code == 0
    assert out.strip().splitlines()[-1] == "duality: 7/7 passed"
    assert "dev=" in out


def test_check_sumformula_single(capsys):
    code, out, _ = run(capsys, "check", "sumformula", "--weight", "4", "--depth", "2", "--json")
    report = json.loads(out)
    assert code == 0
    assert report["summary"] == {"total": 1, "passed": 1, "failed": 0}
    assert float(report["cases"][0]["deviation"]) < 1e-4


def test_check_failure_exit_1(capsys):
    code, out, _ = run(capsys, "check", "ohno", "--max-weight", "3", "--max-c", "1", "--q", "1", "--trunc", "40", "--tol", "1e-30")
    assert code == 1
    assert "FAIL" in out


def test_check_sumformula_flag_errors(capsys):
    assert run(capsys, "check", "sumformula", "--weight", "4")[0] == 2
    assert run(capsys, "check", "sumformula", "--weight", "4", "--depth", "4")[0] == 2


def test_env_precision(capsys, monkeypatch):
    monkeypatch.setenv("MZV_DEFAULT_PREC", "256")
    code, out, _ = run(capsys, "eval", "qzeta", "2", "--q", "1/2", "--json")
    assert code == 0 and len(json.loads(out)["value"]) > 70
    monkeypatch.setenv("MZV_DEFAULT_PREC", "lots")
    assert run(capsys, "eval", "qzeta", "2", "--q", "1/2")[0] == 2


def test_repeat_runs_identical(capsys):
    argv = ["eval", "conn", "1,2", "2", "--q", "1", "--x", "1/4", "--trunc", "300", "--json"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]
    argv = ["eval", "conn", "1,2", "2", "--q", "1/2", "--trunc", "12", "--exact", "--json"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_parse_grid():
    assert parse_grid("1:0,1/2:-1/2") == [(1, 0), (0.5, -0.5)]
    with pytest.raises(DomainError):
        parse_grid("a:b")
