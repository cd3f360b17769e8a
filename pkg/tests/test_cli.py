import json

import pytest

from saitobasis import cli
from saitobasis.errors import BadParams, ExprSyntaxError, IncidenceFailed, MissingBranch, PrecisionExhausted
from saitobasis.forms import OneForm
from saitobasis.saito import make_basis
from saitobasis.series import BiSeries, parse_biseries

from conftest import CORPUS

CUSP = """
# ordinary cusp
[curve]
name = cusp
f = y^2 - x^3
expected.mu = 2
expected.tau = 2
expected.lambda_gaps = none

[branch]
x = t^2
y = t^3
"""


def write(tmp_path, text, name="c.curve"):
    p = tmp_path / name
    p.write_text(text)
    return p


def strip_timings(report):
    report = dict(report)
    report.pop("timings", None)
    return report


class TestParsing:
    def test_sections(self):
        cf = cli.parse_curve_text(CUSP)
        assert cf.name == "cusp" and cf.f == "y^2 - x^3"
        assert cf.branches == [("t^2", "t^3")]
        assert cf.expected == {"mu": "2", "tau": "2", "lambda_gaps": "none"}

    def test_load_family_fixture(self):
        cf = cli.load_curve(CORPUS / "family_3_10_2.curve")
        ctx = cli.CurveContext(cf)
        assert ctx.branch_at(0, 40).multiplicity == 3

    def test_errors(self):
        with pytest.raises(ExprSyntaxError):
            cli.parse_curve_text("f = x")
        with pytest.raises(BadParams):
            cli.parse_curve_text("[curve]\nname = a\n[curve]\nf = x")
        with pytest.raises(BadParams):
            cli.parse_curve_text("[curve]\nf = x\n[branch]\nx = t")
        with pytest.raises(BadParams):
            cli.parse_curve_text("[curve]\nf = x\n[other]\na = 1")

    def test_incidence(self, tmp_path):
        bad = CUSP.replace("y = t^3", "y = t^5")
        with pytest.raises(IncidenceFailed):
            cli.load_curve(write(tmp_path, bad))

    def test_missing_branch(self):
        cf = cli.parse_curve_text("[curve]\nf = y^3 - x^10 + x^8*y\nconstruction = algorithm2")
        with pytest.raises(MissingBranch):
            cli.run_report(cf, "stdbasis")


class TestReports:
    def test_saito_family(self):
        cf = cli.parse_curve_text((CORPUS / "family_3_10_2.curve").read_text())
        rep = cli.run_report(cf, "saito")
        assert rep["saito"]["u_normalized"] == "-4"
        assert rep["saito"]["h1"] == "-90*y - 24*x^6"

    def test_all_cusp(self):
        rep = cli.run_report(cli.parse_curve_text(CUSP), "all")
        inv = rep["invariants"]
        assert inv["mu"] == inv["tau"] == 2 and inv["lambda_gaps"] == []

    def test_invariants_case_2bii(self):
        cf = cli.parse_curve_text((CORPUS / "table_m3_r2_case2bii.curve").read_text())
        rep = cli.run_report(cf, "invariants")
        n, m = 5, 1
        assert rep["invariants"]["tau"] == (5 * n + 2 * m - 3) // 2

    def test_determinism(self):
        text = (CORPUS / "family_3_10_3.curve").read_text()
        a = cli.to_machine(strip_timings(cli.run_report(cli.parse_curve_text(text), "all")))
        b = cli.to_machine(strip_timings(cli.run_report(cli.parse_curve_text(text), "all")))
        assert a == b

    def test_round_trip_of_printed_basis(self):
        cf = cli.parse_curve_text((CORPUS / "family_3_10_2.curve").read_text())
        rep = json.loads(cli.to_machine(cli.run_report(cf, "saito")))
        forms = rep["saito"]["forms"]
        n = 20

        def series(entries):
            return BiSeries({(i, j): parse_biseries(c, 1).constant() for i, j, c in entries}, n)

        w1 = OneForm(series(forms["omega1"]["dx"]), series(forms["omega1"]["dy"]))
        w2 = OneForm(series(forms["omega2"]["dx"]), series(forms["omega2"]["dy"]))
        f = parse_biseries(cf.f, n)
        basis = make_basis(w1.truncate(12), w2.truncate(12), f.truncate(12))
        assert basis.u.constant() == int(rep["saito"]["u0"])

    def test_machine_format_is_sorted_json(self):
        rep = cli.run_report(cli.parse_curve_text(CUSP), "semigroup")
        text = cli.to_machine(rep)
        assert json.loads(text)["semigroup"]["generators"] == [2, 3]
        assert text == json.dumps(json.loads(text), sort_keys=True, ensure_ascii=False, indent=1)


class TestCorpus:
    def test_full_corpus_passes(self):
        summary = cli.run_corpus(CORPUS, jobs=2)
        failing = [k for k, v in summary.items() if not v["pass"]]
        assert failing == []
        assert list(summary) == sorted(summary)

    def test_one_corrupted_expectation(self, tmp_path):
        write(tmp_path, CUSP, "a.curve")
        write(tmp_path, CUSP.replace("expected.tau = 2", "expected.tau = 3").replace("cusp", "bad"), "b.curve")
        summary = cli.run_corpus(tmp_path)
        assert [k for k, v in summary.items() if not v["pass"]] == ["bad"]

    def test_empty_dir(self, tmp_path, capsys):
        assert cli.run_corpus(tmp_path) == {}
        assert cli.main(["corpus", "--dir", str(tmp_path)]) == 0


class TestExitCodes:
    def test_ok(self, tmp_path, capsys):
        assert cli.main(["all", "--input", str(write(tmp_path, CUSP))]) == 0
        assert "tau: 2" in capsys.readouterr().out

    def test_input_error(self, tmp_path, capsys):
        assert cli.main(["all", "--input", str(write(tmp_path, "[curve]\nf = x +"))]) == 2
        assert cli.main(["all", "--input", str(tmp_path / "missing.curve")]) == 2

    def test_mismatch(self, tmp_path, capsys):
        p = write(tmp_path, CUSP.replace("expected.mu = 2", "expected.mu = 5"))
        assert cli.main(["verify", "--input", str(p)]) == 3

    def test_corpus_failure(self, tmp_path, capsys):
        write(tmp_path, CUSP.replace("expected.mu = 2", "expected.mu = 5"))
        assert cli.main(["corpus", "--dir", str(tmp_path)]) == 3

    def test_precision_cap(self, tmp_path, monkeypatch, capsys):
        def exhausted(*args, **kwargs):
            raise PrecisionExhausted("forced")

        monkeypatch.setattr(cli, "standard_basis", exhausted)
        assert cli.main(["stdbasis", "--input", str(write(tmp_path, CUSP))]) == 4
        assert "PrecisionExhausted" in capsys.readouterr().err
