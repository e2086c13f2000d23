"""Exact real Moebius transformations, pullbacks of binary forms and point configuration matching."""

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import permutations
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from cremona.core.errors import ArithmeticDomainError, DegreeMismatch, NonRationalPullback, TooFewPoints
from cremona.services.exactnum import (
    INF,
    AlgReal,
    Exact,
    RatPoly,
    _Infinity,
    inverse,
    isolate_real_roots,
    nonreal_factors,
    select_root,
    sign,
    simplify,
    square_free_part,
)
from cremona.services.polytext import format_exact

logger = logging.getLogger(__name__)

Point = Union[Fraction, AlgReal, _Infinity]

# Width used by the interval pre-filter of config_maps
_FILTER_WIDTH = Fraction(1, 2 ** 40)


def _exact(value) -> Exact:
    return simplify(value)


def _is_rational(value) -> bool:
    return isinstance(value, Fraction)


class Moebius:
    """Real Moebius map t -> (a t + b) / (c t + d), stored with its first nonzero entry equal to 1."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        a, b, c, d = (_exact(x) for x in (a, b, c, d))
        if simplify(a * d - b * c) == 0:
            raise ArithmeticDomainError("singular matrix does not define a Moebius map")
        pivot = next(x for x in (a, b, c, d) if sign(x) != 0)
        if pivot != 1:
            inv = inverse(pivot)
            a, b, c, d = (simplify(x * inv) for x in (a, b, c, d))
        self.a, self.b, self.c, self.d = a, b, c, d

    # === CONSTRUCTORS ===

    @classmethod
    def identity(cls) -> "Moebius":
        return cls(1, 0, 0, 1)

    @classmethod
    def translation(cls, r) -> "Moebius":
        return cls(1, r, 0, 1)

    @classmethod
    def scaling(cls, r) -> "Moebius":
        return cls(r, 0, 0, 1)

    @classmethod
    def swap(cls) -> "Moebius":
        """t -> 1/t, exchanging the two homogeneous coordinates."""
        return cls(0, 1, 1, 0)

    @classmethod
    def to_infinity(cls, p: Point) -> "Moebius":
        """t -> 1/(t - p), sending p to infinity."""
        if p is INF:
            return cls.identity()
        return cls(0, 1, 1, -p)

    @classmethod
    def to_standard(cls, z1: Point, z2: Point, z3: Point) -> "Moebius":
        """The map sending z1, z2, z3 to 0, 1, infinity."""
        if z1 is INF:
            return cls(0, z2 - z3, 1, -z3)
        if z2 is INF:
            return cls(1, -z1, 1, -z3)
        if z3 is INF:
            return cls(1, -z1, 0, z2 - z1)
        u = z2 - z3
        v = z2 - z1
        return cls(u, -(z1 * u), v, -(z3 * v))

    @classmethod
    def from_triples(cls, src: Sequence[Point], dst: Sequence[Point]) -> "Moebius":
        """The unique map sending src[i] to dst[i] for i = 0, 1, 2."""
        return cls.to_standard(*dst).inverse().compose(cls.to_standard(*src))

    # === GROUP OPERATIONS ===

    @property
    def entries(self) -> Tuple[Exact, Exact, Exact, Exact]:
        return self.a, self.b, self.c, self.d

    @property
    def is_rational(self) -> bool:
        return all(_is_rational(x) for x in self.entries)

    @property
    def det(self) -> Exact:
        return simplify(self.a * self.d - self.b * self.c)

    def compose(self, other: "Moebius") -> "Moebius":
        """self o other."""
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return Moebius(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> "Moebius":
        return Moebius(self.d, -self.b, -self.c, self.a)

    def apply(self, point: Point) -> Point:
        a, b, c, d = self.entries
        if point is INF:
            return INF if sign(c) == 0 else simplify(a * inverse(c))
        point = _exact(point)
        den = simplify(c * point + d)
        if sign(den) == 0:
            return INF
        if isinstance(point, AlgReal) and self.is_rational:
            return _apply_rational(self, point)
        return simplify((a * point + b) * inverse(den))

    __call__ = apply

    def __eq__(self, other) -> bool:
        if not isinstance(other, Moebius):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __str__(self) -> str:
        a, b, c, d = (format_exact(x) for x in self.entries)
        return f"t -> ({a}*t + {b})/({c}*t + {d})"

    def __repr__(self) -> str:
        return f"Moebius({self})"


def _apply_rational(m: Moebius, x: AlgReal) -> Exact:
    """Image of an algebraic point under a rational map via the pulled-back minimal polynomial."""
    inv = m.inverse()
    target = pullback_form(x.minpoly, inv, x.minpoly.degree)
    a, b, c, d = m.entries

    def enclosure():
        while True:
            lo, hi = x.interval
            den_lo, den_hi = sorted((c * lo + d, c * hi + d))
            if den_lo > 0 or den_hi < 0:
                break
            x.refine()
        lo, hi = x.interval
        values = [(a * v + b) / (c * v + d) for v in (lo, hi)]
        return min(values), max(values)

    return select_root(target, enclosure, [x])


# === PULLBACKS ===

def _poly_mul(p: List[Exact], q: List[Exact]) -> List[Exact]:
    out: List[Exact] = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        if sign(x) == 0:
            continue
        for j, y in enumerate(q):
            out[i + j] = simplify(out[i + j] + x * y)
    return out


def pullback_coefficients(coeffs: Sequence[Exact], m: Moebius, degree: int) -> List[Exact]:
    """Coefficients (constant first) of sum f_k (a t + b)^k (c t + d)^(degree - k)."""
    a, b, c, d = m.entries
    num = [b, a]
    den = [d, c]
    total: List[Exact] = [Fraction(0)] * (degree + 1)
    for k, f in enumerate(coeffs):
        if sign(f) == 0:
            continue
        term: List[Exact] = [f]
        for _ in range(k):
            term = _poly_mul(term, num)
        for _ in range(degree - k):
            term = _poly_mul(term, den)
        for i, x in enumerate(term):
            total[i] = simplify(total[i] + x)
    return total


def pullback_form(F: RatPoly, m: Moebius, degree: int) -> RatPoly:
    """F(a t + b s, c t + d s) for F read as a binary form of the declared degree, dehomogenized at s = 1.

    For maps with irrational entries the result is only defined up to a constant
    and is returned with leading coefficient 1.
    """
    if F.degree > degree:
        raise DegreeMismatch(f"declared degree {degree} is below deg {F.degree}")
    if m.is_rational:
        num = RatPoly([m.b, m.a])
        den = RatPoly([m.d, m.c])
        total = RatPoly()
        for k, f in enumerate(F.coeffs):
            if f != 0:
                total = total + (num ** k) * (den ** (degree - k)) * f
        return total
    coeffs = pullback_coefficients(F.coeffs, m, degree)
    lead = next(x for x in reversed(coeffs) if sign(x) != 0)
    scaled = [simplify(x * inverse(lead)) for x in coeffs]
    if not all(_is_rational(x) for x in scaled):
        raise NonRationalPullback(f"pullback of {F} by {m} is not rational")
    return RatPoly(scaled)


def proportional(p: Sequence[Exact], q: Sequence[Exact]) -> Optional[Exact]:
    """The constant c with p = c q, or None."""
    n = max(len(p), len(q))
    p = list(p) + [Fraction(0)] * (n - len(p))
    q = list(q) + [Fraction(0)] * (n - len(q))
    pivot = next((i for i, x in enumerate(q) if sign(x) != 0), None)
    if pivot is None:
        return None
    ratio = simplify(p[pivot] * inverse(q[pivot]))
    if sign(ratio) == 0:
        return None
    for x, y in zip(p, q):
        if simplify(x - ratio * y) != 0:
            return None
    return ratio


def pullback_ratio(P: RatPoly, Q: RatPoly, m: Moebius, degree: int) -> Optional[Exact]:
    """c with pullback(Q, m) = c P as forms of the declared degree, or None."""
    if m.is_rational:
        return proportional(pullback_form(Q, m, degree).coeffs, P.coeffs)
    return proportional(pullback_coefficients(Q.coeffs, m, degree), P.coeffs)


# === POINT CONFIGURATIONS ===

@dataclass(frozen=True)
class PointConfig:
    """Finite configuration on the real projective line: real points, infinity and conjugate pairs."""

    real_points: Tuple[Exact, ...] = ()
    infinity: bool = False
    conj_pairs: Tuple[RatPoly, ...] = ()
    complex_cofactor: RatPoly = field(default_factory=lambda: RatPoly([1]))  # nonreal factors of degree > 2

    def __post_init__(self):
        pts = [simplify(p) for p in self.real_points]
        pts.sort()
        for x, y in zip(pts, pts[1:]):
            if x == y:
                raise ArithmeticDomainError("repeated real point in configuration")
        object.__setattr__(self, "real_points", tuple(pts))
        for q in self.conj_pairs:
            if q.degree != 2 or q.coeff(1) ** 2 - 4 * q.coeff(0) * q.coeff(2) >= 0:
                raise ArithmeticDomainError(f"{q} does not define a conjugate pair")
        for i, q in enumerate(self.conj_pairs):
            for r in self.conj_pairs[i + 1:]:
                if q.gcd(r).degree > 0:
                    raise ArithmeticDomainError("conjugate pairs must be distinct")

    @classmethod
    def from_polynomial(cls, p: RatPoly, degree: Optional[int] = None) -> "PointConfig":
        """Root configuration of p read as a binary form of the declared degree."""
        core = square_free_part(p)
        degree = p.degree if degree is None else degree
        if degree < p.degree:
            raise DegreeMismatch(f"declared degree {degree} is below deg {p.degree}")
        pairs = []
        cofactor = RatPoly([1])
        for f in nonreal_factors(core):
            if f.degree == 2:
                pairs.append(f)
            else:
                cofactor = cofactor * f
        return cls(
            real_points=tuple(isolate_real_roots(core)),
            infinity=degree > p.degree,
            conj_pairs=tuple(pairs),
            complex_cofactor=cofactor,
        )

    @classmethod
    def from_points(cls, points: Iterable[Point]) -> "PointConfig":
        pts = list(points)
        return cls(real_points=tuple(p for p in pts if p is not INF), infinity=any(p is INF for p in pts))

    @property
    def points(self) -> List[Point]:
        """Real points including infinity, infinity first."""
        return ([INF] if self.infinity else []) + list(self.real_points)

    @property
    def real_count(self) -> int:
        return len(self.real_points) + int(self.infinity)

    @property
    def complex_cardinality(self) -> int:
        return self.real_count + 2 * len(self.conj_pairs) + max(self.complex_cofactor.degree, 0)

    @property
    def pair_polynomial(self) -> RatPoly:
        result = RatPoly([1])
        for q in self.conj_pairs:
            result = result * q
        return result

    def anchor_order(self) -> List[Point]:
        """Real points ordered infinity first, then rationals, then irrationals."""
        rational = [p for p in self.real_points if _is_rational(p)]
        irrational = [p for p in self.real_points if not _is_rational(p)]
        return ([INF] if self.infinity else []) + rational + irrational

    def contains(self, point: Point) -> bool:
        if point is INF:
            return self.infinity
        return simplify(point) in self.real_points


# === INTERVAL PRE-FILTER ===

def _point_interval(p: Exact) -> Tuple[Fraction, Fraction]:
    if isinstance(p, AlgReal):
        p.refine_to(_FILTER_WIDTH)
        return p.interval
    return p, p


def _iv_sub(x, y):
    return x[0] - y[1], x[1] - y[0]


def _iv_mul(x, y):
    products = (x[0] * y[0], x[0] * y[1], x[1] * y[0], x[1] * y[1])
    return min(products), max(products)


def _iv_div(x, y):
    if y[0] <= 0 <= y[1]:
        return None
    return _iv_mul(x, (1 / y[1], 1 / y[0]))


def _interval_cross_ratio(z1: Point, z2: Point, z3: Point, z: Point):
    """Enclosure of the image of z under the map sending z1, z2, z3 to 0, 1, infinity."""
    iv = {id(p): None if p is INF else _point_interval(p) for p in (z1, z2, z3, z)}
    a, b, c, x = iv[id(z1)], iv[id(z2)], iv[id(z3)], iv[id(z)]
    if z1 is INF:
        return _iv_div(_iv_sub(b, c), _iv_sub(x, c))
    if z2 is INF:
        return _iv_div(_iv_sub(x, a), _iv_sub(x, c))
    if z3 is INF:
        return _iv_div(_iv_sub(x, a), _iv_sub(b, a))
    if z is INF:
        return _iv_div(_iv_sub(b, c), _iv_sub(b, a))
    num = _iv_mul(_iv_sub(x, a), _iv_sub(b, c))
    den = _iv_mul(_iv_sub(x, c), _iv_sub(b, a))
    return _iv_div(num, den)


def _overlap(x, y) -> bool:
    if x is None or y is None:
        return True
    return x[0] <= y[1] and y[0] <= x[1]


def cross_ratio(z1: Point, z2: Point, z3: Point, z: Point) -> Point:
    """Exact image of z under the map sending z1, z2, z3 to 0, 1, infinity."""
    return Moebius.to_standard(z1, z2, z3).apply(z)


def _passes_filter(src_triple, src_rest, dst_triple, dst_rest) -> bool:
    dst_values = [_interval_cross_ratio(*dst_triple, w) for w in dst_rest]
    for z in src_rest:
        value = _interval_cross_ratio(*src_triple, z)
        if not any(_overlap(value, w) for w in dst_values):
            return False
    return True


# === MAP ENUMERATION ===

def _images_match(m: Moebius, src: PointConfig, dst: PointConfig) -> bool:
    return all(dst.contains(m.apply(p)) for p in src.points)


def _complex_part_matches(m: Moebius, src: PointConfig, dst: PointConfig) -> bool:
    for P, Q in ((src.pair_polynomial, dst.pair_polynomial), (src.complex_cofactor, dst.complex_cofactor)):
        if Q.degree <= 0:
            continue
        if pullback_ratio(P, Q, m, Q.degree) is None:
            return False
    return True


def _verify(m: Moebius, src: PointConfig, dst: PointConfig) -> bool:
    return _images_match(m, src, dst) and _complex_part_matches(m, src, dst)


def _rational_guess(src_triple, dst_triple) -> Optional[Moebius]:
    """Try to recognise a map with small rational entries from interval data."""
    try:
        approx = []
        for p in list(src_triple) + list(dst_triple):
            if p is INF:
                approx.append(INF)
            else:
                lo, hi = _point_interval(p)
                approx.append((lo + hi) / 2)
        guess = Moebius.from_triples(approx[:3], approx[3:])
    except ArithmeticDomainError:
        return None
    entries = [Fraction(x).limit_denominator(10 ** 6) for x in guess.entries]
    try:
        return Moebius(*entries)
    except ArithmeticDomainError:
        return None


def _triple_candidates(src: PointConfig, dst: PointConfig) -> List[Moebius]:
    src_pts = src.anchor_order()
    src_triple, src_rest = src_pts[:3], src_pts[3:]
    dst_pts = dst.anchor_order()
    all_rational = all(p is INF or _is_rational(p) for p in src_pts + dst_pts)
    found = []
    tried = 0
    for dst_triple in permutations(dst_pts, 3):
        tried += 1
        dst_rest = [p for p in dst_pts if not any(p is q or p == q for q in dst_triple)]
        if not all_rational and not _passes_filter(src_triple, src_rest, dst_triple, dst_rest):
            continue
        if not all_rational:
            guess = _rational_guess(src_triple, dst_triple)
            if guess is not None and all(guess.apply(z) == w for z, w in zip(src_triple, dst_triple)):
                if _verify(guess, src, dst):
                    found.append(guess)
                    continue
        m = Moebius.from_triples(src_triple, dst_triple)
        if _verify(m, src, dst):
            found.append(m)
    logger.debug("config_maps: %d ordered triples tried, %d maps found", tried, len(found))
    return found


def _normalized_pair(coeffs: Sequence[Exact]) -> Tuple[Exact, Exact]:
    """Center and discriminant of a quadratic given by exact coefficients (constant first)."""
    c0, c1, c2 = coeffs
    inv = inverse(c2)
    e1 = simplify(c1 * inv)
    e0 = simplify(c0 * inv)
    center = simplify(e1 * Fraction(-1, 2))
    disc = simplify(e1 * e1 - 4 * e0)
    return center, disc


def _pair_candidates(src: PointConfig, dst: PointConfig) -> List[Moebius]:
    r = src.anchor_order()[0]
    P = src.conj_pairs[0]
    t_src = Moebius.to_infinity(r)
    p_center, p_disc = _normalized_pair(pullback_coefficients(P.coeffs, t_src.inverse(), 2))
    found = []
    for r2 in dst.anchor_order():
        t_dst = Moebius.to_infinity(r2)
        for Q in dst.conj_pairs:
            q_center, q_disc = _normalized_pair(pullback_coefficients(Q.coeffs, t_dst.inverse(), 2))
            alpha = AlgReal.sqrt(simplify(q_disc * inverse(p_disc)))
            for a in (alpha, simplify(-alpha)):
                psi = Moebius(a, simplify(q_center - a * p_center), 0, 1)
                m = t_dst.inverse().compose(psi).compose(t_src)
                if _verify(m, src, dst):
                    found.append(m)
    return found


# === COVARIANT ANCHORS ===

def jacobian_form(f: RatPoly, n: int, g: RatPoly, m: int) -> Tuple[RatPoly, int]:
    """Jacobian f_t g_s - f_s g_t of forms of declared degrees n and m, dehomogenized, with its degree."""
    return f.derivative() * g * m - f * g.derivative() * n, n + m - 2


def hessian_form(f: RatPoly, n: int) -> Tuple[RatPoly, int]:
    """Hessian of a form of declared degree n divided by n - 1, dehomogenized, with its degree."""
    df = f.derivative()
    return f * df.derivative() * n - df * df * (n - 1), 2 * n - 4


def _form_roots(form: RatPoly, degree: int) -> List[Point]:
    if form.is_zero or degree < 1:
        return []
    roots: List[Point] = [simplify(r) for r in isolate_real_roots(square_free_part(form))] if form.degree > 0 else []
    if form.degree < degree:
        roots.append(INF)
    return roots


def _covariant_forms(config: PointConfig) -> Iterator[List[Tuple[RatPoly, int]]]:
    """Groups of covariants of the nonreal part; a map carrying one configuration onto another carries each group's roots."""
    pairs = config.conj_pairs
    # two distinct pairs have a Jacobian with two real roots
    yield [jacobian_form(q, 2, r, 2) for i, q in enumerate(pairs) for r in pairs[i + 1:]]
    cofactor = config.complex_cofactor
    if pairs and cofactor.degree > 0:
        yield [jacobian_form(config.pair_polynomial, 2 * len(pairs), cofactor, cofactor.degree)]
    F = config.pair_polynomial * cofactor
    n = F.degree
    if n >= 4:
        hess = hessian_form(F, n)
        yield [hess]
        yield [jacobian_form(F, n, *hess)]


def _augment(config: PointConfig, anchors: Sequence[Point]) -> PointConfig:
    extra: List[Point] = []
    for p in anchors:
        if not config.contains(p) and not any(p is q or p == q for q in extra):
            extra.append(p)
    return replace(
        config,
        real_points=config.real_points + tuple(p for p in extra if p is not INF),
        infinity=config.infinity or any(p is INF for p in extra),
    )


def _anchored(config: PointConfig) -> bool:
    return config.real_count >= 3 or (config.real_count >= 1 and bool(config.conj_pairs))


def with_covariant_anchors(src: PointConfig, dst: PointConfig) -> Optional[Tuple[PointConfig, PointConfig]]:
    """Add real roots of covariants until both configurations can anchor a map; None if they disagree."""
    for src_group, dst_group in zip(_covariant_forms(src), _covariant_forms(dst)):
        src = _augment(src, [p for f, n in src_group for p in _form_roots(f, n)])
        dst = _augment(dst, [p for g, m in dst_group for p in _form_roots(g, m)])
        if src.real_count != dst.real_count:
            return None
        if _anchored(src):
            logger.debug("config_maps: %d real points after covariant anchors", src.real_count)
            return src, dst
    raise ArithmeticDomainError("no covariant of the configuration has enough real roots to anchor a map")


def _candidates(src: PointConfig, dst: PointConfig) -> List[Moebius]:
    if src.real_count >= 3:
        return _triple_candidates(src, dst)
    return _pair_candidates(src, dst)


def config_maps(src: PointConfig, dst: PointConfig) -> List[Moebius]:
    """All real Moebius maps carrying src onto dst."""
    for config in (src, dst):
        if config.complex_cardinality < 3:
            raise TooFewPoints(f"configuration has complex cardinality {config.complex_cardinality} < 3")
    if (
        src.real_count != dst.real_count
        or len(src.conj_pairs) != len(dst.conj_pairs)
        or src.complex_cofactor.degree != dst.complex_cofactor.degree
    ):
        return []
    if _anchored(src):
        maps = _candidates(src, dst)
    else:
        augmented = with_covariant_anchors(src, dst)
        if augmented is None:
            return []
        maps = [m for m in _candidates(*augmented) if _verify(m, src, dst)]
    unique: Dict[Moebius, None] = {}
    for m in maps:
        unique.setdefault(m, None)
    return sorted(unique, key=str)
