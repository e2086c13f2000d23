"""Tests for hyperelliptic fixed curves and Kowalevskaya quartics."""

import pytest

from cremona.core.errors import DegreeMismatch, DegreeTooSmall, InvalidParameters, NotSquareFree, SingularQuartic
from cremona.services.projline import Moebius, pullback_ratio
from cremona.services.realcurves import (
    BERTINI_TABLE,
    GEISER_TABLE,
    BinaryForm,
    KowalevskayaQuartic,
    OvalProfile,
    Verdict,
    binary_form_projective_equiv,
    dejonquieres_conjugate,
    hyperelliptic_components,
    is_gaussian,
    kowalevskaya_oval_profile,
    kowalevskaya_surface_topology,
)

# zt(z - t)(z - 2t)(z^2 + t^2), dehomogenized with a root at infinity
NON_GAUSSIAN = "t*(t-1)*(t-2)*(t^2+1)"


def form(P, text, degree=None):
    return BinaryForm.of(P(text), degree)


def test_binary_form_validation(P):
    assert form(P, NON_GAUSSIAN).hom_degree == 6
    assert form(P, NON_GAUSSIAN).root_at_infinity
    assert form(P, "t^4+1").genus == 1
    with pytest.raises(NotSquareFree):
        form(P, "(t-1)^2*(t^2+1)")
    with pytest.raises(NotSquareFree):
        form(P, "t^2+1", 4)
    with pytest.raises(DegreeMismatch):
        form(P, "t^4+1", 5)
    with pytest.raises(DegreeTooSmall):
        form(P, "t^2+1", 2)


@pytest.mark.parametrize(
    "text, degree, sign, expected",
    [
        ("(1-t^2)*(4-t^2)", 4, 1, 2),
        ("(1-t^2)*(4-t^2)", 4, -1, 2),
        ("-(t^4+1)", 4, 1, 0),
        ("t^4+1", 4, 1, 2),
        ("t^6+1", 6, 1, 1),
        ("t^3-t", 4, 1, 2),
        ("-4*(t-1)*(t-2)*(t-3)*(t-4)*(t^2+1)", 6, 1, 2),
        ("-(t-1)*(t-2)*(t-3)*(t-4)*(t-5)*(t-6)", 6, 1, 3),
    ],
)
def test_hyperelliptic_components(P, text, degree, sign, expected):
    assert hyperelliptic_components(form(P, text, degree), sign) == expected


def test_components_ignore_positive_square_factor(P):
    f = form(P, "(1-t^2)*(4-t^2)", 4)
    g = form(P, "(1-t^2)*(4-t^2)*(t^2+9)", 6)
    assert hyperelliptic_components(f, 1) == hyperelliptic_components(g, 1)


def test_projective_equivalence_of_pullback(P):
    f = form(P, NON_GAUSSIAN)
    g = f.pullback(Moebius(2, -1, 0, 1))
    witness = binary_form_projective_equiv(f, g)
    assert witness is not None
    m, sign = witness
    assert sign == 1
    assert pullback_ratio(g.poly, f.poly, m, 6) > 0


def test_projective_equivalence_with_sign(P):
    f = form(P, NON_GAUSSIAN)
    witness = binary_form_projective_equiv(f, -f)
    assert witness is not None and witness[1] == -1


def test_projective_equivalence_fails_on_cross_ratio(P):
    f = form(P, NON_GAUSSIAN)
    g = form(P, "t*(t-1)*(t-5)*(t^2+1)")
    assert binary_form_projective_equiv(f, g) is None


def test_gaussian_test(P):
    assert not is_gaussian(form(P, NON_GAUSSIAN))
    # t -> 1/t sends t^6 - 1 to its negative
    assert is_gaussian(form(P, "t^6-1"))
    with pytest.raises(DegreeTooSmall):
        is_gaussian(form(P, "t^4+1"))


def test_dejonquieres_conjugacy(P):
    f = form(P, NON_GAUSSIAN)
    assert dejonquieres_conjugate(f, f.pullback(Moebius(2, -1, 0, 1))) == Verdict.CONJUGATE
    assert dejonquieres_conjugate(f, f.pullback(Moebius.swap())) == Verdict.CONJUGATE
    assert dejonquieres_conjugate(f, -f) == Verdict.NOT_CONJUGATE
    assert dejonquieres_conjugate(f, form(P, "t*(t-1)*(t-5)*(t^2+1)")) == Verdict.NOT_CONJUGATE
    gauss = form(P, "t^6-1")
    assert dejonquieres_conjugate(gauss, -gauss) == Verdict.CONJUGATE
    with pytest.raises(DegreeTooSmall):
        dejonquieres_conjugate(form(P, "t^4+1"), form(P, "t^4+2"))


def test_forms_without_real_roots(P):
    f = form(P, "(t^2+1)*(t^2+2)*(t^2+3)")
    witness = binary_form_projective_equiv(f, f)
    assert witness is not None and witness[1] == 1
    assert not is_gaussian(f)
    assert dejonquieres_conjugate(f, f.pullback(Moebius.scaling(2))) == Verdict.CONJUGATE
    assert dejonquieres_conjugate(f, form(P, "(t^2+1)*(t^2+2)*(t^2+5)")) == Verdict.NOT_CONJUGATE


def test_dejonquieres_invariant_under_rescaling(P):
    f = form(P, NON_GAUSSIAN)
    g = form(P, "t*(t-1)*(t-5)*(t^2+1)")
    scaled = BinaryForm(f.poly * 7, 6)
    assert dejonquieres_conjugate(scaled, f) == Verdict.CONJUGATE
    assert dejonquieres_conjugate(scaled, g) == dejonquieres_conjugate(f, g)


@pytest.mark.parametrize(
    "params, expected",
    [
        ((1, 0, 1, 2, -1), OvalProfile(1, False)),
        ((27, -27, 6, 2, 1), OvalProfile(2, True)),
        ((27, -27, 6, 2, -1), OvalProfile(0, False)),
    ],
)
def test_kowalevskaya_ovals(params, expected):
    assert kowalevskaya_oval_profile(KowalevskayaQuartic(*params)) == expected


def test_kowalevskaya_surface_topology():
    assert kowalevskaya_surface_topology(OvalProfile(1, False)) == "S^2"
    assert kowalevskaya_surface_topology(OvalProfile(2, True)) == "S^1 x S^1"
    assert GEISER_TABLE["2 nested ovals"][0] == "S^1 x S^1"
    assert GEISER_TABLE["1 oval"][0] == "S^2"


@pytest.mark.parametrize("params", [(0, 0, 1, 2, 1), (1, 0, 1, 1, 1), (1, 0, 1, 2, 0)])
def test_kowalevskaya_rejects_parameters(params):
    with pytest.raises(InvalidParameters):
        KowalevskayaQuartic(*params)


def test_kowalevskaya_rejects_singular_quartic():
    # q^2 - h has a double root at x = 2
    with pytest.raises(SingularQuartic):
        KowalevskayaQuartic("1", "-9/4", "3/2", "3/2", 1)


def test_reference_tables():
    assert len(BERTINI_TABLE) == 5
    assert len(GEISER_TABLE) == 6
    assert BERTINI_TABLE["big circle"] == ("RP^2", "RP^2")
