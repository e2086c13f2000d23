"""Tests for model file stanzas."""

from fractions import Fraction

import pytest

from cremona.core.errors import InvalidAction, InvalidParameters, NonEmptyFibreAtInfinity, ParseError
from cremona.services.involutions import ClassKind, InvolutionClass, ModelKind, classify_model
from cremona.services.model_files import (
    format_conic_bundle,
    load_conic_bundle,
    load_curve,
    load_involution,
    parse_quadric,
    parse_stanza,
    read_model_file,
)
from cremona.services.realcurves import BinaryForm, KowalevskayaQuartic

I_DOUBLE_STANZA = """
# four special fibres
kind: conic_bundle
A: 1
B: 0
C: (t-1)*(t-2)*(t-3)*(t-4)
H: -t*(t-5)
"""


def test_parse_conic_bundle_stanza():
    mf = parse_stanza(I_DOUBLE_STANZA)
    assert mf.kind == "conic_bundle"
    assert mf.fields["C"] == "(t-1)*(t-2)*(t-3)*(t-4)"
    loaded = load_involution(mf)
    assert loaded.reparametrization is None
    assert loaded.model.kind == ModelKind.CONIC_BUNDLE
    assert classify_model(loaded.model) == InvolutionClass(ClassKind.I_DOUBLE, 1)


@pytest.mark.parametrize(
    "source, fragment",
    [
        ("A: 1\nB: 0", "missing 'kind:'"),
        ("kind: conic_bundle\nkind: linear", "second 'kind:'"),
        ("kind: spline", "unknown kind"),
        ("kind: conic_bundle\nA: 1\nB: 0\nC: t\nH: -1\nD: 3", "unknown keys"),
        ("kind: conic_bundle\nA: 1\nB: 0", "missing keys"),
        ("kind: conic_bundle\nA: 1\nA: 2", "duplicate key"),
        ("kind: linear\nthis is not a field", "expected 'key: value'"),
    ],
)
def test_malformed_stanzas(source, fragment):
    with pytest.raises(ParseError) as info:
        parse_stanza(source)
    assert fragment in info.value.message
    assert info.value.exit_code == 2


def test_bad_polynomial_names_the_key():
    mf = parse_stanza("kind: conic_bundle\nA: 1\nB: 0\nC: t^^2\nH: -1")
    with pytest.raises(ParseError) as info:
        load_involution(mf)
    assert info.value.message.startswith("C:")


def test_read_model_file(tmp_path):
    path = tmp_path / "model.txt"
    path.write_text(I_DOUBLE_STANZA, encoding="utf-8")
    mf = read_model_file(path)
    assert mf.path == str(path)
    with pytest.raises(ParseError) as info:
        read_model_file(tmp_path / "missing.txt")
    assert "cannot read" in info.value.message


def test_unbounded_real_fibres_are_moved():
    source = "kind: conic_bundle\nA: (t-1)*(t-2)*(t^2+1)\nB: 0\nC: (t-3)*(t-4)*(t^2+2)\nH: t"
    mf = parse_stanza(source)
    with pytest.raises(NonEmptyFibreAtInfinity):
        load_conic_bundle(mf, reparametrize=False)
    model, moved = load_conic_bundle(mf)
    assert moved is not None and moved.point == -1
    assert model is moved.model


def test_format_conic_bundle_reads_back():
    model, _ = load_conic_bundle(parse_stanza(I_DOUBLE_STANZA))
    text = format_conic_bundle(model)
    assert text.startswith("kind: conic_bundle\n")
    again, _ = load_conic_bundle(parse_stanza(text))
    assert again.coefficients == model.coefficients


def test_trepalin_stanza():
    mf = parse_stanza("kind: trepalin\ntwist: 0\nepsilons: 1, 3, 5, 7\nlambda1: -1\nlambda2: 2")
    model = load_involution(mf).model
    assert model.data.epsilons == (1, 3, 5, 7)
    assert classify_model(model) == InvolutionClass(ClassKind.T, 2)


def test_trepalin_stanza_rejects_bad_lists():
    mf = parse_stanza("kind: trepalin\ntwist: 0\nepsilons: 1,,5\nlambda1: -1\nlambda2: 2")
    with pytest.raises(ParseError):
        load_involution(mf)
    mf = parse_stanza("kind: trepalin\ntwist: one\nepsilons: 1,3\nlambda1: -1\nlambda2: 2")
    with pytest.raises(ParseError):
        load_involution(mf)
    mf = parse_stanza("kind: trepalin\ntwist: 0\nepsilons: 1,3\nlambda1: 5\nlambda2: 6")
    with pytest.raises(InvalidParameters):
        load_involution(mf)


def test_dejonquieres_stanza():
    mf = parse_stanza("kind: dejonquieres\nf: t^5 - t\ndeg: 6")
    model = load_involution(mf).model
    assert model.data.hom_degree == 6
    assert classify_model(model) == InvolutionClass(ClassKind.DJ, 2)


@pytest.mark.parametrize(
    "surface, action, expected",
    [
        ("Q31", "-,+,+,+", (-1, 1, 1, 1)),
        ("Q31", "- - + +", (-1, -1, 1, 1)),
    ],
)
def test_quadric_sign_patterns(surface, action, expected):
    assert parse_quadric(surface, action).signs == expected


def test_quadric_actions():
    assert parse_quadric("Q22", "swap").swap
    q = parse_quadric("Q22", "id; 0 1 1 0")
    assert q.factors[1] == (0, 1, 1, 0)
    with pytest.raises(ParseError):
        parse_quadric("Q13", "swap")
    with pytest.raises(ParseError):
        parse_quadric("Q31", "-,x,+,+")
    with pytest.raises(ParseError):
        parse_quadric("Q22", "0 1 1 0")
    with pytest.raises(ParseError):
        parse_quadric("Q22", "id; 0 1 1")
    with pytest.raises(InvalidAction):
        parse_quadric("Q22", "id; id")


def test_label_stanzas():
    mf = parse_stanza("kind: geiser\ntopology: 4 ovals\nequation: x^4 + y^4 - 1")
    model = load_involution(mf).model
    assert model.data.normalized_equation() == "x^4+y^4-1"
    with pytest.raises(InvalidParameters):
        load_involution(parse_stanza("kind: bertini\ntopology: 9 ovals"))


def test_linear_stanza():
    assert load_involution(parse_stanza("kind: linear")).model.kind == ModelKind.LINEAR


def test_curve_stanzas():
    form, sign = load_curve(parse_stanza("kind: hyperelliptic\nf: t^6 - 1\nsign: -"))
    assert isinstance(form, BinaryForm) and sign == -1
    quartic = load_curve(parse_stanza("kind: kowalevskaya\na: 1\nb: 0\nc: 1\ns: 3\nsign: -"))
    assert isinstance(quartic, KowalevskayaQuartic)
    assert quartic.s == Fraction(3)
    with pytest.raises(ParseError):
        load_curve(parse_stanza("kind: linear"))
    with pytest.raises(ParseError):
        load_involution(parse_stanza("kind: hyperelliptic\nf: t^6 - 1"))
    with pytest.raises(ParseError):
        load_curve(parse_stanza("kind: hyperelliptic\nf: t^6 - 1\nsign: 2"))
