import io
import sys
from pathlib import Path

import pytest

from ckernel.cli import main

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def run(*argv, capsys=None):
    code = main(list(argv))
    return code


def test_parse_command(capsys):
    assert main(["parse", "--p"]) == 0
    out = capsys.readouterr().out
    assert out == "p\ndegree: 0\n"
    assert main(["parse", "(p, q => r)"]) == 0
    out = capsys.readouterr().out
    assert out == "(p, q => r)\ndegree: 1\n"


def test_parse_error_exit(capsys):
    assert main(["parse", "p &"]) == 2
    err = capsys.readouterr().err
    assert "error" in err


def test_prove_exit_codes(capsys):
    assert main(["prove", "=> ~(p -> ~p)"]) == 0
    assert capsys.readouterr().out == "found\n"
    assert main(["prove", "=> (p -> q) -> (q -> p)"]) == 1
    assert capsys.readouterr().out == "unprovable\n"
    assert main(["prove", "=> (p & ~p) -> p", "--budget", "1"]) == 3
    assert capsys.readouterr().out == "budget exceeded\n"


def test_prove_emit_then_check(tmp_path, capsys):
    out = tmp_path / "proof.sexp"
    assert main(["prove", "=> ~(~p -> p)", "--emit", str(out)]) == 0
    capsys.readouterr()
    assert main(["check", str(out), "--calculus", "g3c"]) == 0
    assert capsys.readouterr().out == "accepted\n"
    # calculus mismatch is a usage error
    assert main(["check", str(out), "--calculus", "nc"]) == 2


def test_prove_with_hypotheses(capsys):
    assert main(["prove", "p => r", "--hyp", "p => q", "--hyp", "q => r"]) == 0
    assert capsys.readouterr().out == "found\n"


def test_hypothesis_proof_emit_roundtrip(tmp_path, capsys):
    out = tmp_path / "hyp.proof"
    assert main(["prove", "p => r", "--hyp", "p => q", "--hyp", "q => r",
                 "--emit", str(out)]) == 0
    assert "(hyps" in out.read_text()
    capsys.readouterr()
    assert main(["check", str(out), "--calculus", "g3c"]) == 0
    assert capsys.readouterr().out == "accepted\n"


def test_check_rejected(tmp_path, capsys):
    bad = tmp_path / "bad.sexp"
    bad.write_text('(derivation (calculus g3c) (node Rf (seq "q" "p")))')
    assert main(["check", str(bad), "--calculus", "g3c"]) == 1
    out = capsys.readouterr().out
    assert out.startswith("rejected at root:")


def test_check_env_hash_guard(tmp_path, capsys):
    defs = CORPUS / "defs" / "example_f.cdef"
    proof = CORPUS / "scinf" / "schema_instance.proof"
    assert main(["check", str(proof), "--calculus", "scinf",
                 "--defs", str(defs)]) == 0
    capsys.readouterr()
    # a different definitions file fails the pinned hash
    other = tmp_path / "other.cdef"
    other.write_text("connective f/2 { group { A1 } }\n")
    assert main(["check", str(proof), "--calculus", "scinf",
                 "--defs", str(other)]) == 2
    # and the file cannot be checked without definitions at all
    assert main(["check", str(proof), "--calculus", "scinf"]) == 2


def test_define_output(capsys):
    defs = CORPUS / "defs" / "example_f.cdef"
    assert main(["define", str(defs)]) == 0
    out = capsys.readouterr().out
    assert "defining-formula: A1 | ~A2" in out
    assert "I.f.1" in out and "IV.f" in out
    assert out.startswith("env-hash: ")


def test_verify_command(tmp_path, capsys):
    defs = CORPUS / "defs" / "example_f.cdef"
    tsv = tmp_path / "report.tsv"
    assert main(["verify", str(defs), "--no-timings", "--tsv", str(tsv)]) == 0
    out = capsys.readouterr().out
    assert "result: pass" in out
    rows = tsv.read_text().strip().split("\n")
    assert all(row.split("\t")[3] == "-" for row in rows)
    assert any("rule.I.f.1" in row for row in rows)


def test_verify_emit_dir(tmp_path, capsys):
    defs = CORPUS / "defs" / "example_f.cdef"
    out = tmp_path / "witnesses"
    assert main(["verify", str(defs), "--emit-dir", str(out)]) == 0
    capsys.readouterr()
    files = sorted(f.name for f in out.iterdir())
    assert files == ["f.bwd.proof", "f.bwd_neg.proof",
                     "f.fwd.proof", "f.fwd_neg.proof"]
    # each dump is pinned to the definitions file and re-checkable
    for f in files:
        assert main(["check", str(out / f), "--calculus", "scinf",
                     "--defs", str(defs)]) == 0
        assert capsys.readouterr().out.endswith("accepted\n")


def test_verify_deterministic_without_timings(capsys):
    defs = CORPUS / "defs" / "example_f.cdef"
    assert main(["verify", str(defs), "--no-timings"]) == 0
    first = capsys.readouterr().out
    assert main(["verify", str(defs), "--no-timings"]) == 0
    second = capsys.readouterr().out
    assert first == second


def test_theses_command(capsys):
    assert main(["theses"]) == 0
    out = capsys.readouterr().out
    assert "result: pass" in out
    assert "AT: => ~(~p -> p)" in out
    # deterministic output stream
    assert main(["theses"]) == 0
    assert capsys.readouterr().out == out


def test_theses_plot_and_tsv(tmp_path, capsys):
    png = tmp_path / "battery.png"
    tsv = tmp_path / "battery.tsv"
    assert main(["theses", "--plot", str(png), "--tsv", str(tsv)]) == 0
    capsys.readouterr()
    assert png.stat().st_size > 0
    assert tsv.stat().st_size > 0


def test_verify_standard_definitions(tmp_path, capsys):
    defs = CORPUS / "defs" / "standard.cdef"
    png = tmp_path / "standard.png"
    assert main(["verify", str(defs), "--no-timings", "--plot", str(png)]) == 0
    out = capsys.readouterr().out
    assert "result: pass" in out
    for name in ("neg", "and", "or", "imp"):
        assert f"{name}.witness.fwd" in out
    assert png.stat().st_size > 0


def test_missing_file_is_usage_error(capsys):
    assert main(["check", "no-such-file.sexp", "--calculus", "g3c"]) == 2
    assert main(["verify", "no-such-file.cdef"]) == 2
