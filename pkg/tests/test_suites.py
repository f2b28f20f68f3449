from fractions import Fraction as F

from mzv.series import EvalConfig
from mzv.suites import SuiteReport, run_duality, run_ohno, run_sumformula, run_telescope


def test_duality_suite_lists_cases_in_input_order():
    report = run_duality(max_weight=4, grid=[(F(1, 2), F(1, 3)), (1, 0)])
    labels = [c.input for c in report.cases]
    assert len(labels) == 2 * 7
    assert labels[0].startswith("k=2 dual=2 q=1/2")
    assert labels[7].startswith("k=2 dual=2 q=1 ")
    assert report.passed
    # deviations are reported even though every case passes
    assert all(c.deviation for c in report.cases)


def test_ohno_suite_small():
    report = run_ohno(max_weight=3, max_c=2, qs=[F(1, 2)])
    assert len(report.cases) == 3 * 3
    assert report.passed


def test_sumformula_pairs_default():
    report = run_sumformula(max_weight=4, cfg=EvalConfig(trunc=800))
    assert [c.input for c in report.cases] == ["w=2 d=1", "w=3 d=1", "w=3 d=2", "w=4 d=1", "w=4 d=2", "w=4 d=3"]
    assert report.passed


def test_failed_case_named_in_render():
    report = run_sumformula(pairs=[(3, 2)], cfg=EvalConfig(trunc=50), tol=1e-40)
    assert not report.passed
    text = report.render()
    assert "FAIL  w=3 d=2" in text
    assert text.endswith("1 FAILED")


def test_report_round_trip():
    report = run_telescope(grid=[(F(1, 2), F(0))], m_max=1, n_max=1, a_max=5)
    again = SuiteReport.from_json(report.dumps())
    assert again == report
    assert again.to_json()["summary"] == {"total": 2, "passed": 2, "failed": 0}
