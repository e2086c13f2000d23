"""Tests for conic bundle models: validation, invariants, normal form and conjugacy."""

from fractions import Fraction

import pytest

from cremona.core.errors import (
    DegenerateBinaryPart,
    DegreeMismatch,
    IrrationalSplitRequired,
    NonEmptyFibreAtInfinity,
    NotNormalized,
    NotSquareFree,
    OddDiscriminantDegree,
)
from cremona.services.conicbundle import (
    ConicBundleModel,
    balance_binary_part,
    canonical_degree,
    conjugate_invariants,
    conjugate_mod_pgl2,
    declared_degrees,
    diagonalize,
    discriminant,
    fibre_is_empty,
    fibrewise_conjugate,
    fixed_curve,
    fixed_curve_genus,
    is_exceptional_image,
    is_normalized,
    is_r_rational,
    normal_form_invariants,
    normalize,
    pullback_model,
    real_image_arcs,
    reparametrize_to_infinity,
    special_fibre_count,
    validate_model,
)
from cremona.services.exactnum import RatPoly, isolate_real_roots, root_bound, sign_at, square_class
from cremona.services.projline import Moebius, PointConfig
from cremona.services.realcurves import hyperelliptic_components
from tests.conftest import random_conic_bundle

# Two models with the same discriminant and special fibres; the first has a connected real locus
FIRST = ("(t-1)*(t-2)*(t^2+1)", "0", "(t-3)*(t-4)*(t^2+2)", "t")
SECOND = ("(t-1)*(t-3)*(t^2+1)", "0", "(t-2)*(t-4)*(t^2+2)", "t")


def model(P, *texts):
    return validate_model(*(P(t) for t in texts))


def raw(P, *texts):
    return ConicBundleModel.unchecked(*(P(t) for t in texts))


@pytest.fixture
def quartic(P):
    return model(P, "1", "0", "(t^2-1)*(t^2-4)", "-(t+3)*(t-3)")


def family(P, a, b):
    return model(P, "1", "0", "(t-1)*(t-2)*(t-3)*(t-4)", f"-(t-({a}))*(t-({b}))")


# Validation

def test_validate_accepts_and_computes_discriminant(P, quartic):
    assert quartic.validated
    assert discriminant(quartic) == P("4*(t^2-1)*(t^2-4)")


def test_validate_rejects_unbounded_real_fibres(P):
    with pytest.raises(NonEmptyFibreAtInfinity):
        validate_model(*(P(t) for t in FIRST))


@pytest.mark.parametrize(
    "texts, error",
    [
        (("1", "0", "(t-1)^2", "1"), NotSquareFree),
        (("1", "0", "t^2+1", "-(t^2+1)"), NotSquareFree),
        (("1", "0", "t", "-1"), OddDiscriminantDegree),
        (("0", "1", "t", "-1"), DegenerateBinaryPart),
        (("1", "0", "1", "-1"), DegenerateBinaryPart),
        (("1", "2", "1", "-1"), DegenerateBinaryPart),
    ],
)
def test_validate_rejections(P, texts, error):
    with pytest.raises(error):
        validate_model(*(P(t) for t in texts))


def test_discriminant_examples(P):
    assert discriminant(raw(P, "t", "t", "t+1", "-1")) == P("3*t^2 + 4*t")
    assert discriminant(raw(P, *FIRST)) == P("4*(t-1)*(t-2)*(t-3)*(t-4)*(t^2+1)*(t^2+2)")
    assert discriminant(raw(P, *FIRST)) == discriminant(raw(P, *SECOND))


# Invariants

def test_genus_and_fixed_curve(P, quartic):
    assert fixed_curve_genus(quartic) == 1
    assert fixed_curve(quartic).poly == -discriminant(quartic)
    rational = model(P, "1", "0", "t^2+1", "-1")
    assert fixed_curve_genus(rational) is None
    assert fixed_curve(rational) is None


def test_genus_of_degree_eight_discriminant(P):
    # deg 8 gives genus 3, not the genus 2 sometimes quoted for this pair
    assert fixed_curve_genus(raw(P, *FIRST)) == 3


def test_special_fibres_and_k2(P, quartic):
    assert special_fibre_count(quartic) == 2
    assert canonical_degree(quartic) == 2
    assert special_fibre_count(model(P, "1", "0", "t^2+1", "-1")) == 0
    assert canonical_degree(model(P, "1", "0", "t^2+1", "-1")) == 6
    assert canonical_degree(raw(P, *FIRST)) == -1


def test_special_fibre_count_requires_normalized(P):
    m = model(P, "1", "0", "t*(t-2)*(t^2+3)", "-(t-1)*(t-5)")
    assert not is_normalized(m)
    with pytest.raises(NotNormalized):
        special_fibre_count(m)


def test_fibre_emptiness(P, quartic):
    assert fibre_is_empty(quartic, 5)
    assert not fibre_is_empty(quartic, 0)
    assert not fibre_is_empty(quartic, 3)


def test_arcs_of_validated_models(P, quartic):
    assert real_image_arcs(quartic).to_list() == ["[-3,3]"]
    assert real_image_arcs(family(P, 0, 5)).to_list() == ["[0,5]"]
    empty = real_image_arcs(model(P, "1", "0", "t^2+1", "-1"))
    assert empty.is_empty and empty.count == 0


def test_raw_arcs_of_the_pair(P):
    assert real_image_arcs(raw(P, *FIRST)).to_list() == ["[0,inf]"]
    assert real_image_arcs(raw(P, *SECOND)).to_list() == ["[0,2]", "[3,inf]"]


def test_full_circle_on_raw_path(P):
    arcs = real_image_arcs(raw(P, "1", "0", "-1", "t^2+1"))
    assert arcs.full
    assert is_exceptional_image(arcs)
    assert not is_exceptional_image(real_image_arcs(raw(P, *FIRST)))


def test_r_rationality(P):
    assert is_r_rational(family(P, 0, 5))
    assert is_r_rational(family(P, "-1/2", 7))
    assert not is_r_rational(model(P, "1", "0", "t^2+1", "-1"))


def test_fixed_curve_components_match_family(P):
    curve = fixed_curve(family(P, 0, 5))
    assert hyperelliptic_components(curve, 1) == 2


# Reparametrization

def test_reparametrize_the_pair(P):
    first = reparametrize_to_infinity(*(P(t) for t in FIRST))
    second = reparametrize_to_infinity(*(P(t) for t in SECOND))
    assert first.point == -1 and second.point == -1
    assert first.model.H == P("-t^2 + t")
    assert real_image_arcs(first.model).to_list() == ["[0,1]"]
    assert real_image_arcs(second.model).to_list() == ["[0,1/4]", "[1/3,1]"]
    assert is_r_rational(first.model)
    assert not is_r_rational(second.model)
    assert fixed_curve_genus(first.model) == 3
    assert canonical_degree(first.model) == -2

    verdict = fibrewise_conjugate(first.model, second.model)
    assert not verdict.conjugate
    assert verdict.failing == "arcs"
    assert verdict.lam == 1 and verdict.mu == 1


def test_reparametrize_gives_up(P):
    with pytest.raises(NonEmptyFibreAtInfinity):
        reparametrize_to_infinity(P("1"), P("0"), P("-1"), P("t^2+1"), height=3)


# Diagonalization

def test_diagonalize_keeps_discriminant_class_and_arcs(P):
    m = raw(P, "t", "t", "t+1", "-1")
    out = diagonalize(m)
    assert out.B.is_zero
    assert out.A == P("t+1")
    assert square_class(out.delta) == square_class(m.delta)
    assert real_image_arcs(out) == real_image_arcs(m)


def test_diagonalize_diagonal_input(P):
    m = family(P, 0, 5)
    out = diagonalize(m)
    assert out == m


# Normal form

def test_normalize_real_root_split(P):
    m = model(P, "1", "0", "t*(t-2)*(t^2+3)", "-(t-1)*(t-5)")
    out = normalize(m)
    assert (out.A, out.B, out.C, out.H) == (P("t-1"), P("4"), P("t^3-t^2+2*t-4"), P("-(t-5)"))
    assert out.delta == m.delta
    assert special_fibre_count(out) == 1
    assert real_image_arcs(out) == real_image_arcs(m)
    assert real_image_arcs(out).to_list() == ["[0,5]"]


def test_normalize_complex_pair_split(P):
    m = model(P, "1", "0", "(t^2-1)*(t^2-7)", "-(t^2+1)*(t^2-9)")
    out = normalize(m)
    assert (out.A, out.B, out.C, out.H) == (P("t^2+1"), P("8*t"), P("t^2+7"), P("-(t^2-9)"))
    assert out.delta == m.delta
    assert is_normalized(out)
    assert real_image_arcs(out) == real_image_arcs(m)


def test_normalize_is_idempotent(P, quartic):
    assert normalize(quartic) == quartic
    once = normalize(model(P, "1", "0", "t*(t-2)*(t^2+3)", "-(t-1)*(t-5)"))
    assert normalize(once) == once


def test_normalize_needs_irrational_split(P):
    with pytest.raises(IrrationalSplitRequired):
        normalize(model(P, "1", "0", "(t^2-3)*(t^2-1)", "-(t^2-2)"))


@pytest.mark.parametrize(
    "C, arcs",
    [
        ("(t^2+2)*(t^2+3)", []),
        ("(t^2-1)*(t^2+2)*(t^2+5)", ["[-1,1]"]),
    ],
)
def test_normalize_divides_out_pair_without_rational_split(P, C, arcs):
    m = model(P, "1", "0", C, "-(t^2+1)")
    out = normalize(m)
    assert (out.A, out.B, out.C, out.H) == (P("1"), P("0"), P(C), P("-1"))
    assert is_normalized(out)
    assert out.delta == m.delta
    assert real_image_arcs(out) == real_image_arcs(m)
    assert real_image_arcs(out).to_list() == arcs
    assert normal_form_invariants(m).special_points == ()


def test_normal_form_invariants(P):
    m = model(P, "1", "0", "t*(t-2)*(t^2+3)", "-(t-1)*(t-5)")
    nf = normal_form_invariants(m)
    assert nf.special_points == (5,)
    assert nf.arcs == real_image_arcs(normalize(m))


# Conjugacy

def test_fibrewise_scaled_model(P, quartic):
    scaled = model(P, "3", "0", "3*(t^2-1)*(t^2-4)", "-2*(t+3)*(t-3)")
    verdict = fibrewise_conjugate(scaled, quartic)
    assert verdict.conjugate
    assert (verdict.lam, verdict.mu) == (9, 2)
    assert fibrewise_conjugate(quartic, scaled).conjugate


def test_fibrewise_requires_normalized(P, quartic):
    m = model(P, "1", "0", "t*(t-2)*(t^2+3)", "-(t-1)*(t-5)")
    with pytest.raises(NotNormalized):
        fibrewise_conjugate(m, quartic)


def test_fibrewise_distinguishes_special_fibres(P):
    verdict = fibrewise_conjugate(family(P, 0, 5), family(P, 0, 6))
    assert not verdict.conjugate
    assert verdict.failing == "special_fibres"


@pytest.mark.parametrize("phi", [Moebius.translation(1), Moebius.scaling(2), Moebius(2, 1, 0, 1)])
def test_conjugate_under_base_change(P, quartic, phi):
    pulled = pullback_model(quartic, phi)
    other = validate_model(*pulled.coefficients)
    verdict = conjugate_mod_pgl2(quartic, other)
    assert verdict.conjugate
    assert verdict.candidates >= 1
    witness_pullback = pullback_model(other, verdict.witness)
    if witness_pullback.H.lc > 0:
        witness_pullback = witness_pullback.negated()
    assert fibrewise_conjugate(quartic, witness_pullback).conjugate


def test_conjugate_reflexive(P, quartic):
    assert conjugate_mod_pgl2(quartic, quartic).conjugate


def test_family_members_not_conjugate(P):
    assert not conjugate_mod_pgl2(family(P, 0, 5), family(P, 0, 6)).conjugate
    assert not conjugate_mod_pgl2(family(P, "-1/2", 5), family(P, 0, 5)).conjugate


def test_pair_not_conjugate_up_to_base_change(P):
    first = reparametrize_to_infinity(*(P(t) for t in FIRST)).model
    second = reparametrize_to_infinity(*(P(t) for t in SECOND)).model
    assert not conjugate_mod_pgl2(first, second).conjugate


def test_balance_binary_part_with_cancelling_leading_terms(P):
    m = model(P, "t", "2*t^2", "t^3+t+1", "-(t-5)")
    assert m.delta == P("4*t^2+4*t")
    with pytest.raises(DegreeMismatch):
        declared_degrees(m)
    balanced = balance_binary_part(m)
    assert (balanced.A, balanced.B, balanced.C, balanced.H) == (P("t"), P("0"), P("t+1"), m.H)
    assert balanced.delta == m.delta
    assert real_image_arcs(balanced) == real_image_arcs(m)
    assert declared_degrees(balanced) == (1, 1, 1, 1)
    assert balance_binary_part(balanced) is balanced
    assert conjugate_mod_pgl2(m, m).conjugate
    assert conjugate_mod_pgl2(m, balanced).conjugate


def test_declared_degrees_round_odd_discriminant_up(P):
    assert declared_degrees(raw(P, "1", "0", "t", "-1")) == (0, 1, 2, 0)
    assert declared_degrees(raw(P, "t", "1", "t^2", "-t")) == (1, 2, 3, 1)


# Seeded corpora

def test_normalize_corpus(rng):
    for _ in range(100):
        m = random_conic_bundle(rng)
        out = normalize(m)
        assert normalize(out) == out
        assert is_normalized(out)
        assert out.H.lc < 0
        assert all(sign_at(out.delta, r) > 0 for r in isolate_real_roots(out.H))
        assert out.delta == m.delta
        assert square_class(out.delta) == square_class(m.delta)
        assert real_image_arcs(out) == real_image_arcs(m)
        nf = normal_form_invariants(m)
        assert nf == normal_form_invariants(out)
        assert nf.special_points == tuple(isolate_real_roots(out.H))
        assert nf.delta == out.delta.normalized()
        assert special_fibre_count(out) == len(nf.special_points)


def _far_point(m):
    b = balance_binary_part(m)
    return int(root_bound(b.A * b.C * m.delta * m.H)) + 1


def _random_base_change(rng, m):
    affine = Moebius(rng.choice([-3, -2, -1, Fraction(1, 2), 1, 2, 3]), rng.randint(-4, 4), 0, 1)
    if rng.random() < 0.5:
        return affine
    return Moebius(_far_point(m), 1, 1, 0).compose(affine)


def _pulled_back(rng, m, phi):
    pulled = pullback_model(m, phi)
    if pulled.H.lc > 0:
        pulled = pulled.negated()
    lam, mu = rng.choice([1, 2, Fraction(1, 3)]), rng.choice([1, 3, Fraction(1, 2)])
    return validate_model(pulled.A * lam, pulled.B * lam, pulled.C * lam, pulled.H * mu)


def test_conjugacy_corpus(rng):
    conjugate = not_conjugate = attempts = 0
    while conjugate < 100 and attempts < 1000:
        attempts += 1
        m = normalize(random_conic_bundle(rng, split_discriminant=True))
        if PointConfig.from_polynomial(m.delta * m.H).real_count < 3:
            continue
        other = _pulled_back(rng, m, _random_base_change(rng, m))
        verdict = conjugate_mod_pgl2(m, other)
        assert verdict.conjugate
        witness_pullback = pullback_model(other, verdict.witness)
        if witness_pullback.H.lc > 0:
            witness_pullback = witness_pullback.negated()
        assert fibrewise_conjugate(m, witness_pullback).conjugate
        assert conjugate_invariants(m, other).conjugate
        conjugate += 1

        p = _far_point(other)
        extra = validate_model(other.A, other.B, other.C, other.H * RatPoly.from_roots([p, p + 1]))
        assert is_normalized(extra)
        verdict = conjugate_mod_pgl2(m, extra)
        assert not verdict.conjugate
        assert verdict.failing == "configuration"
        not_conjugate += 1
    assert conjugate == not_conjugate == 100
