"""Tests for the command-line frontend."""

import json
import logging

import pytest

from cremona.cli import main
from cremona.services.model_files import load_conic_bundle, read_model_file

Y1 = """kind: conic_bundle
A: (t-1)*(t-2)*(t^2+1)
B: 0
C: (t-3)*(t-4)*(t^2+2)
H: t
"""

Y2 = """kind: conic_bundle
A: (t-1)*(t-3)*(t^2+1)
B: 0
C: (t-2)*(t-4)*(t^2+2)
H: t
"""

TREPALIN_R1 = """kind: trepalin
twist: 0
epsilons: 0, 1
lambda1: -1
lambda2: 1/2
"""

SPLIT = """kind: conic_bundle
A: 1
B: 0
C: t*(t-2)*(t^2+3)
H: -(t-1)*(t-5)
"""

I1 = "kind: conic_bundle\nA: 1\nB: 0\nC: t^4-1\nH: -1\n"
DJ1 = "kind: dejonquieres\nf: (t+1)*(t-1)*(t+2)*(t-2)\ndeg: 4\n"


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return _write


def run_json(capsys, argv):
    code = main(["--json", *argv])
    return code, json.loads(capsys.readouterr().out)


def test_classify_trepalin(capsys, write):
    code, report = run_json(capsys, ["classify", write("trepalin_r1.model", TREPALIN_R1)])
    assert code == 0
    assert report["command"] == "classify"
    assert report["classification"]["name"] == "T(4)"
    assert report["classification"]["label"] == "𝔗₄"
    assert report["invariants"]["singular_fibres"] == 4


def test_conjugate_reparametrized_pair(capsys, write):
    code, report = run_json(capsys, ["conjugate", write("y1.model", Y1), write("y2.model", Y2)])
    assert code == 0
    assert report["verdicts"] == {"conjugacy": "NotConjugate"}
    assert report["conjugacy"]["reason"] == "arcs: 1 vs 2"
    assert report["witnesses"]["left_reparametrization"]["point"] == "-1"
    assert report["witnesses"]["right_reparametrization"]["point"] == "-1"


def test_raw_model_fails_without_reparametrization(capsys, write):
    code = main(["--no-reparam", "classify", write("y1.model", Y1)])
    assert code == 3
    assert "non_empty_fibre_at_infinity" in capsys.readouterr().err


def test_unknown_verdict_exits_4(capsys, write):
    code, report = run_json(capsys, ["conjugate", write("dj1.model", DJ1), write("i1.model", I1)])
    assert code == 4
    assert report["verdicts"] == {"conjugacy": "Unknown"}
    assert sorted(report["conjugacy"]["classes"]) == ["I(1)", "dJ(1)"]
    assert len(report["citations"]) == 1


def test_equiv_forms_both(capsys):
    code, report = run_json(capsys, ["equiv-forms", "--left", "1;-1", "--right", "t;-t", "--both"])
    assert code == 0
    assert report["forms"]["criterion"] is True
    assert report["forms"]["oracle"] is True
    assert report["verdicts"] == {"equivalent": "true", "agree": "true"}


def test_equiv_forms_default_decider(capsys):
    code, report = run_json(capsys, ["equiv-forms", "--left", "1;1", "--right", "1;-1"])
    assert code == 0
    assert report["forms"]["mode"] == "criterion"
    assert report["forms"]["equivalent"] is False
    assert "oracle" not in report["forms"]


def test_equiv_forms_rejects_ternary_literal(capsys):
    assert main(["equiv-forms", "--left", "1;1;1", "--right", "1;1"]) == 2


def test_normalize_writes_stanza(capsys, write, tmp_path, P):
    out = tmp_path / "normal.model"
    code, report = run_json(capsys, ["normalize", write("split.model", SPLIT), "-o", str(out)])
    assert code == 0
    assert report["verdicts"] == {"changed": "true"}
    assert report["invariants"] == {"idempotent": True}
    assert report["conic_bundle"]["special_fibres"] == 1
    model, _ = load_conic_bundle(read_model_file(out))
    assert model.coefficients == (P("t-1"), P("4"), P("t^3-t^2+2*t-4"), P("-(t-5)"))

    code, again = run_json(capsys, ["normalize", str(out)])
    assert code == 0
    assert again["verdicts"] == {"changed": "false"}


def test_parse_error_exits_2(capsys, write):
    assert main(["validate", write("bad.model", "kind: conic_bundle\nA: 1 +\nB: 0\nC: t\nH: -1\n")]) == 2
    assert "parse_error" in capsys.readouterr().err


def test_invalid_model_exits_3(capsys, write):
    code, report = run_json(capsys, ["validate", write("sq.model", "kind: conic_bundle\nA: 1\nB: 0\nC: (t-1)^2\nH: 1\n")])
    assert code == 3
    assert report["verdicts"] == {"valid": "false"}
    assert report["conic_bundle"]["errors"][0].startswith("not_square_free")


def test_error_in_json_mode_is_a_document(capsys, write):
    code = main(["--json", "classify", write("bad.model", "kind: spline\n")])
    assert code == 2
    document = json.loads(capsys.readouterr().out)
    assert document["error"]["code"] == "parse_error"


@pytest.mark.parametrize(
    "argv",
    [
        ["frobnicate"],
        ["equiv-forms", "--left", "1;-1"],
        ["equiv-forms", "--left", "1;-1", "--right", "t;-t", "--both", "--oracle"],
        ["curve", "components", "t^6-1", "--sign", "2"],
        [],
    ],
)
def test_usage_errors_exit_1(argv):
    assert main(argv) == 1


def test_help_exits_0(capsys):
    assert main(["--help"]) == 0
    assert "equiv-forms" in capsys.readouterr().out


def test_text_and_json_agree(capsys, write):
    path = write("split.model", SPLIT)
    assert main(["validate", path]) == 0
    text = capsys.readouterr().out
    code, report = run_json(capsys, ["validate", path])
    assert text.startswith("cremona validate\n")
    assert "  valid: true\n" in text
    assert report["verdicts"]["valid"] == "true"
    assert f"arcs:\n    - {report['conic_bundle']['arcs'][0]}\n" in text


def test_reports_are_byte_stable(capsys, write):
    path = write("split.model", SPLIT)
    main(["--json", "invariants", path])
    first = capsys.readouterr().out
    main(["--json", "invariants", path])
    assert capsys.readouterr().out == first
    assert "timing_ms" not in first


def test_timing_flag(capsys, write):
    code, report = run_json(capsys, ["--timing", "validate", write("split.model", SPLIT)])
    assert code == 0
    assert report["timing_ms"] >= 0


def test_curve_commands(capsys):
    form = "t*(t-1)*(t-2)*(t^2+1)"
    code, report = run_json(capsys, ["curve", "gaussian", form])
    assert code == 0 and report["verdicts"] == {"gaussian": "false"}

    code, report = run_json(capsys, ["curve", "iso", "--", form, f"-({form})"])
    assert report["verdicts"] == {"isomorphic": "false"}
    assert report["invariants"] == {"projectively_equivalent": True}
    assert report["witnesses"]["sign"] == -1

    code, report = run_json(capsys, ["curve", "components", "--", "-(t-1)*(t-2)*(t-3)*(t-4)*(t-5)*(t-6) deg=6"])
    assert report["curve"]["components"] == 3


def test_curve_ovals(capsys, write):
    stanza = "kind: kowalevskaya\na: 27\nb: -27\nc: 6\ns: 2\nsign: +\n"
    code, report = run_json(capsys, ["curve", "ovals", write("k.model", stanza)])
    assert code == 0
    assert report["curve"]["ovals"] == 2
    assert report["curve"]["nested"] is True


def test_family_corollary(capsys):
    argv = ["family", "corollary", "--r", "2", "--eps", "1,2,3,4", "--a", "0", "--b", "5", "--count", "3"]
    code, report = run_json(capsys, argv)
    assert code == 0
    assert report["family"]["classes"] == ["I''(1)"] * 3
    assert report["family"]["pairwise_not_conjugate"] is True
    assert report["family"]["members"][0]["H"] == "-t^2 + 5*t"


def test_family_rejects_parameters(capsys):
    argv = ["family", "corollary", "--r", "2", "--eps", "1,2,3,4", "--a", "2", "--b", "5", "--count", "2"]
    assert main(argv) == 3


def test_matrix(capsys, write):
    files = [write("trepalin.model", TREPALIN_R1), write("i1.model", I1), write("dj1.model", DJ1)]
    code, report = run_json(capsys, ["matrix", *files])
    assert code == 4
    verdicts = report["matrix"]["verdicts"]
    assert report["matrix"]["classes"] == ["T(4)", "I(1)", "dJ(1)"]
    assert verdicts[0][1] == verdicts[1][0] == "NotConjugate"
    assert verdicts[1][2] == verdicts[2][1] == "Unknown"


def test_selfcheck(capsys):
    code, report = run_json(capsys, ["selfcheck", "--samples", "25"])
    assert code == 0
    assert report["selfcheck"]["agreements"] == 25
    assert report["selfcheck"]["paired_fraction"] == 0.0


def test_selfcheck_paired_fraction(capsys):
    code, report = run_json(capsys, ["selfcheck", "--samples", "20", "--paired", "0.5"])
    assert code == 0
    assert report["selfcheck"]["paired_fraction"] == 0.5
    assert report["selfcheck"]["agreements"] == 20


def test_selfcheck_rejects_bad_paired_fraction(capsys):
    assert main(["selfcheck", "--samples", "1", "--paired", "2"]) == 3


def test_failure_is_logged_with_lazy_arguments(caplog):
    with caplog.at_level(logging.DEBUG, logger="cremona"):
        assert main(["-vv", "selfcheck", "--samples", "1", "--paired", "2"]) == 3
    record = next(r for r in caplog.records if r.name == "cremona.cli" and r.getMessage() == "selfcheck failed")
    assert record.args == ("selfcheck",)
    assert record.exc_info is not None
