"""Shared fixtures for the test suite."""

import random
from fractions import Fraction

import pytest

from cremona.core.config import settings
from cremona.services.polytext import parse_poly


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-size randomized runs; deselect with -m \"not slow\"")


@pytest.fixture
def rng() -> random.Random:
    """Seeded generator; every randomized suite is reproducible."""
    return random.Random(settings.DEFAULT_SEED)


def random_poly(rng: random.Random, max_degree: int = 6, bound: int = 9, min_degree: int = 0):
    """Random nonzero polynomial with integer coefficients in [-bound, bound]."""
    from cremona.services.exactnum import RatPoly

    while True:
        degree = rng.randint(min_degree, max_degree)
        coeffs = [rng.randint(-bound, bound) for _ in range(degree)] + [rng.choice([c for c in range(-bound, bound + 1) if c])]
        p = RatPoly(coeffs)
        if not p.is_zero:
            return p


def random_square_free(rng: random.Random, max_degree: int = 6, bound: int = 9):
    from cremona.services.exactnum import is_square_free

    while True:
        p = random_poly(rng, max_degree, bound)
        if p.degree == 0 or is_square_free(p):
            return p


@pytest.fixture
def P():
    """Shorthand polynomial parser."""
    return parse_poly


def _interpolate(nodes, values):
    """Lagrange interpolant through the points (nodes[i], values[i])."""
    from cremona.services.exactnum import RatPoly

    total = RatPoly()
    for x, y in zip(nodes, values):
        term = RatPoly([y])
        for u in nodes:
            if u != x:
                term = term * RatPoly([Fraction(-u, x - u), Fraction(1, x - u)])
        total = total + term
    return total


def _interpolated_discriminant(rng: random.Random):
    from cremona.services.exactnum import RatPoly

    roots = rng.sample(range(-6, 7), rng.choice([0, 2, 2, 4]))
    values = [rng.randint(1, 9) if rng.random() < 0.5 else -rng.randint(1, 4) ** 2 for _ in roots]
    width = rng.choice([0, 2]) if roots else rng.choice([2, 4])
    if len(roots) == 4:
        width = 0
    W = RatPoly([rng.randint(-5, 5) for _ in range(width)] + [rng.randint(1, 5)])
    return _interpolate(roots, values) + RatPoly.from_roots(roots) * W, roots


def _split_discriminant(rng: random.Random):
    from cremona.services.exactnum import RatPoly, rational_sqrt

    zeros = rng.sample(range(-6, 7), rng.choice([2, 4]))
    C0 = RatPoly.from_roots(zeros) * rng.choice([1, 1, 2, 4])
    eligible = [
        x for x in range(-7, 8)
        if x not in zeros and (C0.evaluate(x) > 0 or rational_sqrt(-C0.evaluate(x)) is not None)
    ]
    count = min(rng.choice([0, 2, 2, 4]), len(eligible) - len(eligible) % 2)
    return C0, rng.sample(eligible, count)


def random_conic_bundle(rng: random.Random, split_discriminant: bool = False):
    """Validated model x^2 + 2r xy + (C0 + r^2) y^2 = H z^2 that normalizes over Q.

    Here 4AC - B^2 = 4 C0. At every real root of H, C0 is positive or minus a
    rational square; H may also carry an irreducible quadratic factor. With
    ``split_discriminant`` C0 is a product of rational linear factors.
    """
    from cremona.core.errors import ModelError
    from cremona.services.conicbundle import validate_model
    from cremona.services.exactnum import RatPoly

    while True:
        C0, roots = _split_discriminant(rng) if split_discriminant else _interpolated_discriminant(rng)
        H = RatPoly.from_roots(roots) * -rng.randint(1, 3)
        if rng.random() < 0.3:
            u = rng.randint(-3, 3)
            H = H * RatPoly([u * u + rng.randint(1, 4), -2 * u, 1])
        r = RatPoly([rng.randint(-3, 3), rng.randint(-2, 2)])
        try:
            return validate_model(RatPoly([1]), r * 2, C0 + r * r, H)
        except ModelError:
            continue
