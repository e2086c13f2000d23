"""Tests for report assembly and rendering."""

import json

import pytest

from cremona.core.errors import InvalidParameters
from cremona.models.reports import MatrixReport, Report
from cremona.services.model_files import parse_stanza
from cremona.services.reporting import (
    classify_report,
    conjugate_report,
    curve_ovals_report,
    execute,
    invariants_report,
    render_json,
    render_text,
)


def test_render_text_outline():
    report = Report(
        command="matrix",
        verdicts={"unknown_pairs": "0"},
        citations=[],
        matrix=MatrixReport(files=["a", "b"], classes=["L", "Q"], verdicts=[["Conjugate", "NotConjugate"]]),
    )
    assert render_text(report) == (
        "cremona matrix\n"
        "verdicts:\n"
        "  unknown_pairs: 0\n"
        "matrix:\n"
        "  files:\n"
        "    - a\n"
        "    - b\n"
        "  classes:\n"
        "    - L\n"
        "    - Q\n"
        "  verdicts:\n"
        "    - Conjugate, NotConjugate\n"
    )


def test_render_json_skips_unset_payloads():
    data = json.loads(render_json(Report(command="validate", verdicts={"valid": "true"})))
    assert data == {"command": "validate", "verdicts": {"valid": "true"}, "invariants": {}, "witnesses": {}, "citations": []}


def test_execute_attaches_timing_on_request():
    stanza = parse_stanza("kind: linear")
    assert execute(classify_report, stanza).timing_ms is None
    assert execute(classify_report, stanza, timing=True).timing_ms >= 0


def test_quadric_invariants():
    report = invariants_report(parse_stanza("kind: quadric\nsurface: Q31\naction: -,+,+,+"))
    assert report.invariants["real_fixed_locus"] == "empty"
    assert report.invariants["representative"] == "antipodal"


def test_label_invariants_use_tables():
    report = classify_report(parse_stanza("kind: geiser\ntopology: 2 nested ovals"))
    assert report.classification.name == "G3"
    assert report.invariants["real_loci"] == ["S^1 x S^1", "S^2 u #2 RP^2"]


def test_kowalevskaya_ovals_report():
    report = curve_ovals_report(parse_stanza("kind: kowalevskaya\na: 27\nb: -27\nc: 6\ns: 2\nsign: -"))
    assert report.curve.ovals == 0
    assert report.curve.topology == "empty"
    with pytest.raises(InvalidParameters):
        curve_ovals_report(parse_stanza("kind: hyperelliptic\nf: t^6-1"))


def test_hyperelliptic_invariants():
    report = invariants_report(parse_stanza("kind: hyperelliptic\nf: t^6-1\nsign: +"))
    assert report.invariants["gaussian"] is True
    assert report.invariants["genus"] == 2


IRRATIONAL_SPLIT = "kind: conic_bundle\nA: 1\nB: 0\nC: (t^2-3)*(t^2-1)*(t^2+1)\nH: -(t^2-2)"


def test_conic_bundle_report_without_rational_normal_form():
    report = classify_report(parse_stanza(IRRATIONAL_SPLIT))
    assert report.classification.name == "I(2)"
    assert report.conic_bundle.normalized is False
    assert report.conic_bundle.special_fibres == 0
    assert report.conic_bundle.k2 == 2


def test_fixed_base_conjugacy_without_rational_normal_form():
    stanza = parse_stanza(IRRATIONAL_SPLIT)
    report = conjugate_report(stanza, stanza, fix_base=True)
    assert report.verdicts == {"conjugacy": "Conjugate"}
    assert report.conjugacy.fibrewise["lambda"] == "1"
