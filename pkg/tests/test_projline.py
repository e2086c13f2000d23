"""Tests for Moebius maps, pullbacks and configuration matching."""

from fractions import Fraction

import pytest

from cremona.core.errors import DegreeMismatch, TooFewPoints
from cremona.services.exactnum import INF, AlgReal
from cremona.services.projline import (
    Moebius,
    PointConfig,
    config_maps,
    cross_ratio,
    hessian_form,
    jacobian_form,
    pullback_form,
    pullback_ratio,
)


def test_pullback_form(P):
    assert pullback_form(P("t"), Moebius.swap(), 1) == P("1")
    assert pullback_form(P("t^2-1"), Moebius(1, 1, 0, 1), 2) == P("t^2+2*t")
    f = P("t*(t-1)*(t-2)*(t^2+1)")
    assert pullback_form(f, Moebius.identity(), 6) == f

    with pytest.raises(DegreeMismatch):
        pullback_form(P("t^3"), Moebius.identity(), 2)


def test_pullback_inverse_round_trip(P):
    f = P("t^4 - 3*t + 7")
    m = Moebius(2, -1, 3, 5)
    back = pullback_form(pullback_form(f, m, 4), m.inverse(), 4)
    assert back.monic() == f.monic()


def test_moebius_canonical_form():
    m = Moebius(2, 4, 6, 8)
    assert m.entries == (1, 2, 3, 4)
    assert Moebius(0, 3, 3, 0) == Moebius.swap()
    assert m.compose(m.inverse()) == Moebius.identity()


def test_apply_rational_map_to_algebraic_point():
    m = Moebius(2, 1, 0, 1)
    assert m.apply(AlgReal.sqrt(2)) == AlgReal.sqrt(8) + 1
    assert Moebius.to_infinity(Fraction(3)).apply(Fraction(3)) is INF
    assert Moebius.swap().apply(INF) == 0


def test_cross_ratio():
    assert cross_ratio(Fraction(0), Fraction(1), INF, Fraction(2)) == 2
    assert cross_ratio(INF, Fraction(0), Fraction(1), Fraction(2)) == -1


def test_anharmonic_group():
    config = PointConfig.from_points([Fraction(0), Fraction(1), INF])
    maps = config_maps(config, config)
    assert len(maps) == 6
    assert Moebius.identity() in maps
    assert Moebius.swap() in maps
    for m in maps:
        assert m.inverse() in maps
        for n in maps:
            assert m.compose(n) in maps


def test_config_maps_scaling(P):
    src = PointConfig.from_polynomial(P("t*(t-1)*(t-2)*(t-3)"))
    dst = PointConfig.from_polynomial(P("t*(t-2)*(t-4)*(t-6)"))
    maps = config_maps(src, dst)
    assert Moebius.scaling(2) in maps
    assert Moebius(-2, 6, 0, 1) in maps
    assert len(maps) == 2
    for m in maps:
        assert pullback_ratio(P("t*(t-1)*(t-2)*(t-3)"), P("t*(t-2)*(t-4)*(t-6)"), m, 4) is not None


def test_config_maps_incompatible_cross_ratios():
    src = PointConfig.from_points([Fraction(x) for x in (0, 1, 2, 4)])
    dst = PointConfig.from_points([Fraction(x) for x in (0, 1, 2, 5)])
    assert config_maps(src, dst) == []


def test_config_maps_too_few_points():
    small = PointConfig.from_points([Fraction(0), Fraction(1)])
    with pytest.raises(TooFewPoints):
        config_maps(small, small)


def test_config_maps_with_conjugate_pair(P):
    src = PointConfig.from_polynomial(P("t*(t^2+1)"))
    dst = PointConfig.from_polynomial(P("(t-1)*(t^2-2*t+5)"))
    maps = config_maps(src, dst)
    assert len(maps) == 2
    assert Moebius(2, 1, 0, 1) in maps
    assert Moebius(-2, 1, 0, 1) in maps


def test_config_maps_with_irrational_entries(P):
    src = PointConfig.from_polynomial(P("t^3 - t"), 4)
    dst = PointConfig.from_polynomial(P("t^3 - 2*t"), 4)
    maps = config_maps(src, dst)
    assert len(maps) == 8
    assert Moebius.scaling(AlgReal.sqrt(2)) in maps


def test_infinity_marker_from_degree_deficiency(P):
    config = PointConfig.from_polynomial(P("t*(t-1)*(t-2)*(t^2+1)"), 6)
    assert config.infinity
    assert config.real_count == 4
    assert config.complex_cardinality == 6


def test_config_maps_without_real_points(P):
    config = PointConfig.from_polynomial(P("(t^2+1)*(t^2+2)*(t^2+3)"))
    assert config.real_count == 0
    maps = config_maps(config, config)
    assert len(maps) == 2
    assert Moebius.identity() in maps
    assert Moebius.scaling(-1) in maps


def test_config_maps_between_pair_only_configurations(P):
    src = PointConfig.from_polynomial(P("(t^2+1)*(t^2+4)"))
    dst = PointConfig.from_polynomial(P("(t^2+4)*(t^2+16)"))
    maps = config_maps(src, dst)
    assert Moebius.scaling(2) in maps
    for m in maps:
        assert pullback_ratio(src.pair_polynomial, dst.pair_polynomial, m, 4) is not None


def test_config_maps_anchor_on_hessian(P):
    config = PointConfig.from_polynomial(P("t*(t^4+1)"))
    assert config.real_count == 1 and not config.conj_pairs
    assert config_maps(config, config) == sorted([Moebius.identity(), Moebius.scaling(-1)], key=str)


def test_covariant_forms(P):
    jac, degree = jacobian_form(P("t^2+1"), 2, P("t^2+2"), 2)
    assert (jac, degree) == (P("4*t"), 2)
    assert hessian_form(P("t^4+1"), 4) == (P("48*t^2"), 4)
