from ckernel.report import checks_to_text, checks_to_tsv, render_figure
from ckernel.witnesses import CheckResult

CHECKS = [
    CheckResult("alpha", True, 12.5),
    CheckResult("beta.gamma", False, 3.25, "boom"),
]


def test_text_report():
    text = checks_to_text("demo", CHECKS)
    assert text.splitlines()[0] == "demo"
    assert "alpha" in text and "pass" in text
    assert "beta.gamma" in text and "FAIL" in text and "boom" in text
    assert text.rstrip().endswith("result: FAIL")


def test_text_report_without_timings():
    text = checks_to_text("demo", CHECKS, timings=False)
    assert "12.5" not in text
    again = checks_to_text("demo", CHECKS, timings=False)
    assert text == again


def test_tsv_report():
    tsv = checks_to_tsv("demo", CHECKS)
    rows = [r.split("\t") for r in tsv.strip().split("\n")]
    assert rows[0] == ["demo", "alpha", "pass", "12.5", ""]
    assert rows[1][2] == "FAIL" and rows[1][4] == "boom"
    no_t = checks_to_tsv("demo", CHECKS, timings=False)
    assert all(r.split("\t")[3] == "-" for r in no_t.strip().split("\n"))


def test_render_figure(tmp_path):
    out = tmp_path / "report.png"
    render_figure("demo", CHECKS, str(out))
    assert out.stat().st_size > 1000
