"""Non-exceptional conic bundle models A x^2 + B xy + C y^2 = H z^2 over the real line.

Covers validation, invariants (discriminant, genus, special fibres, K^2,
real image arcs), diagonalization, normal-form reduction and the conjugacy
decision with a fixed base or up to base reparametrization.
"""

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import gcd
from typing import Iterator, List, Optional, Tuple

from cremona.core.config import settings
from cremona.core.errors import (
    DegenerateBinaryPart,
    DegreeMismatch,
    IrrationalSplitRequired,
    ModelError,
    NonEmptyFibreAtInfinity,
    NotNormalized,
    NotSquareFree,
    OddDiscriminantDegree,
)
from cremona.services.exactnum import (
    INF,
    Exact,
    RatPoly,
    as_poly,
    is_square_free,
    isolate_real_roots,
    rational_sqrt,
    region_samples,
    sign,
    sign_at,
    simplify,
    square_class,
)
from cremona.services.polytext import format_exact
from cremona.services.projline import Moebius, Point, PointConfig, config_maps, pullback_form, pullback_ratio
from cremona.services.realcurves import BinaryForm

logger = logging.getLogger(__name__)


# === MODEL ===

@dataclass(frozen=True)
class ConicBundleModel:
    """Coefficients of A x^2 + B xy + C y^2 = H z^2; ``validated`` is set only by validate_model."""

    A: RatPoly
    B: RatPoly
    C: RatPoly
    H: RatPoly
    validated: bool = field(default=False, compare=False)

    @classmethod
    def unchecked(cls, A, B, C, H) -> "ConicBundleModel":
        """Model built without validation, for raw data and intermediate results."""
        return cls(as_poly(A), as_poly(B), as_poly(C), as_poly(H))

    @property
    def delta(self) -> RatPoly:
        """4AC - B^2."""
        return self.A * self.C * 4 - self.B * self.B

    @property
    def coefficients(self) -> Tuple[RatPoly, RatPoly, RatPoly, RatPoly]:
        return self.A, self.B, self.C, self.H

    def negated(self) -> "ConicBundleModel":
        """Same surface, all four coefficients negated."""
        return ConicBundleModel(-self.A, -self.B, -self.C, -self.H, self.validated)

    def to_dict(self) -> dict:
        return {"A": str(self.A), "B": str(self.B), "C": str(self.C), "H": str(self.H)}

    def __str__(self) -> str:
        return f"({self.A})x^2 + ({self.B})xy + ({self.C})y^2 = ({self.H})z^2"


def _empty_at_infinity(m: ConicBundleModel, side: int) -> bool:
    return m.delta.sign_at_infinity(side) > 0 and m.A.sign_at_infinity(side) == -m.H.sign_at_infinity(side)


def validate_model(A, B, C, H) -> ConicBundleModel:
    """Check the non-exceptional model conditions and return a validated model."""
    A, B, C, H = (as_poly(p) for p in (A, B, C, H))
    if A.is_zero or C.is_zero:
        raise DegenerateBinaryPart("A and C must both be nonzero")
    if H.is_zero:
        raise DegenerateBinaryPart("H must be nonzero")
    m = ConicBundleModel(A, B, C, H)
    delta = m.delta
    if delta.is_zero:
        raise DegenerateBinaryPart("discriminant 4AC - B^2 vanishes identically")
    if not is_square_free(delta * H):
        raise NotSquareFree(f"(B^2 - 4AC)H has a multiple root")
    if delta.degree % 2 == 1:
        raise OddDiscriminantDegree(f"deg(4AC - B^2) = {delta.degree} is odd")
    if delta.degree == 0:
        raise DegenerateBinaryPart("discriminant is constant")
    for side in (1, -1):
        if not _empty_at_infinity(m, side):
            where = "+inf" if side > 0 else "-inf"
            raise NonEmptyFibreAtInfinity(f"fibres near {where} have real points")
    return ConicBundleModel(A, B, C, H, validated=True)


def _ensure_validated(m: ConicBundleModel) -> ConicBundleModel:
    return m if m.validated else validate_model(*m.coefficients)


# === INVARIANTS ===

def discriminant(m: ConicBundleModel) -> RatPoly:
    return m.delta


def fixed_curve_genus(m: ConicBundleModel) -> Optional[int]:
    """Genus of w^2 = B^2 - 4AC; None when deg = 2 and the fixed curve is empty."""
    degree = m.delta.degree
    if degree <= 2:
        return None
    return (degree - 2) // 2


def fixed_curve(m: ConicBundleModel) -> Optional[BinaryForm]:
    """The hyperelliptic fixed curve w^2 = -(4AC - B^2); None when it is empty."""
    if fixed_curve_genus(m) is None:
        return None
    return BinaryForm(-m.delta, m.delta.degree)


def _normalization_defects(m: ConicBundleModel) -> List[str]:
    defects = []
    H, delta = m.H, m.delta
    if H.degree > 0:
        roots = isolate_real_roots(H)
        if len(roots) < H.degree:
            defects.append("H has complex roots")
        for r in roots:
            if sign_at(delta, r) < 0:
                defects.append(f"4AC - B^2 < 0 at the root {format_exact(r)} of H")
    return defects


def is_normalized(m: ConicBundleModel) -> bool:
    """H real-rooted with 4AC - B^2 > 0 at its roots and negative leading coefficient."""
    return not _normalization_defects(m) and m.H.lc < 0


def special_fibre_count(m: ConicBundleModel) -> int:
    defects = _normalization_defects(m)
    if defects:
        raise NotNormalized("; ".join(defects))
    return max(m.H.degree, 0)


def canonical_degree(m: ConicBundleModel) -> int:
    """K^2 = 8 - deg(4AC - B^2) - deg H."""
    delta_special = special_fibre_count(m)
    k2 = 8 - m.delta.degree - delta_special
    genus = fixed_curve_genus(m)
    if genus is not None:
        assert k2 == 6 - 2 * genus - delta_special
    return k2


# === REAL IMAGE ===

def fibre_is_empty(m: ConicBundleModel, t) -> bool:
    """True if the fibre over the real point t has no real points."""
    if sign_at(m.delta, t) <= 0:
        return False
    return sign_at(m.A, t) == -sign_at(m.H, t)


@dataclass(frozen=True)
class Arc:
    """Closed arc of the real projective line, traversed in increasing direction (through inf if needed)."""

    start: Point
    end: Point

    def __str__(self) -> str:
        return f"[{format_exact(self.start)},{format_exact(self.end)}]"


@dataclass(frozen=True)
class ArcSet:
    arcs: Tuple[Arc, ...] = ()
    full: bool = False

    @property
    def count(self) -> int:
        return 1 if self.full else len(self.arcs)

    @property
    def is_empty(self) -> bool:
        return not self.full and not self.arcs

    def to_list(self) -> List[str]:
        if self.full:
            return ["[-inf,inf]"]
        return [str(a) for a in self.arcs]

    def __str__(self) -> str:
        return " u ".join(self.to_list()) if self.count else "empty"


def _arc_key(arc: Arc):
    return (0, 0) if arc.start is INF else (1, arc.start)


def real_image_arcs(m: ConicBundleModel) -> ArcSet:
    """Closure of the set of t whose fibre has a real point, as maximal arcs."""
    product = m.delta * m.H
    breakpoints = isolate_real_roots(product) if product.degree > 0 else []
    status = [not fibre_is_empty(m, s) for s in region_samples(breakpoints)]
    if not breakpoints:
        return ArcSet(full=status[0])

    segments: List[Tuple[Point, Point, bool]] = [
        (a, b, s) for a, b, s in zip(breakpoints, breakpoints[1:], status[1:-1])
    ]
    if status[0] == status[-1]:
        segments.append((breakpoints[-1], breakpoints[0], status[0]))
    else:
        segments.append((breakpoints[-1], INF, status[-1]))
        segments.append((INF, breakpoints[0], status[0]))

    if all(s for _, _, s in segments):
        return ArcSet(full=True)
    # Rotate so that the walk starts right after an empty segment
    k = next(i for i in range(len(segments)) if not segments[i - 1][2])
    segments = segments[k:] + segments[:k]
    arcs = []
    run: List[Tuple[Point, Point, bool]] = []
    for seg in segments + [(None, None, False)]:
        if seg[2]:
            run.append(seg)
        elif run:
            arcs.append(Arc(run[0][0], run[-1][1]))
            run = []
    return ArcSet(tuple(sorted(arcs, key=_arc_key)))


def is_exceptional_image(arcs: ArcSet) -> bool:
    """The real image is the whole line, as for exceptional conic bundles."""
    return arcs.full


def is_r_rational(m: ConicBundleModel) -> bool:
    """Connected nonempty real locus: exactly one arc in the real image."""
    defects = _normalization_defects(m)
    if defects:
        raise NotNormalized("; ".join(defects))
    return real_image_arcs(m).count == 1


# === DIAGONALIZATION ===

def _primitive_pairs(bound: int) -> Iterator[Tuple[int, int]]:
    for h in range(1, bound + 1):
        ring = [
            (a, c)
            for a in range(0, h + 1)
            for c in range(-h, h + 1)
            if max(a, abs(c)) == h and (a > 0 or c > 0) and gcd(a, c) == 1
        ]
        ring.sort(key=lambda p: (p[0] + abs(p[1]), p[1] < 0, -p[0]))
        yield from ring


def diagonalize(m: ConicBundleModel, bound: Optional[int] = None) -> ConicBundleModel:
    """Diagonal model (A', 0, C', H) with C' ~ A' (4AC - B^2) modulo squares.

    The output keeps the square class of the discriminant and the real image;
    it is returned unvalidated since 4A'C' need not be square-free.
    """
    bound = settings.DIAGONALIZE_SEARCH_BOUND if bound is None else bound
    A, B, C, H = m.coefficients
    delta = m.delta
    if B.is_zero:
        return ConicBundleModel.unchecked(square_class(A), RatPoly(), square_class(C), H)
    critical = delta * H
    for a, c in _primitive_pairs(bound):
        lead = A * (a * a) + B * (a * c) + C * (c * c)
        if lead.is_zero or lead.gcd(critical).degree > 0:
            continue
        logger.debug("diagonalize: new first basis vector (%d, %d)", a, c)
        return ConicBundleModel.unchecked(square_class(lead), RatPoly(), square_class(lead * delta), H)
    raise ModelError(f"no linear change with entries up to {bound} makes A nonvanishing at the roots of (4AC - B^2)H")


# === NORMAL FORM ===

def _sqrt_mod_quadratic(w: RatPoly, p: RatPoly) -> Optional[RatPoly]:
    """s with s^2 = w modulo the monic irreducible quadratic p, over Q; None if none exists."""
    b1, b0 = p.coeff(1), p.coeff(0)
    e = b0 - b1 * b1 / 4
    w = w % p
    # Work in t' = t + b1/2 where p = t'^2 + e
    u1 = w.coeff(1)
    u0 = w.coeff(0) - u1 * b1 / 2
    if u1 == 0:
        y0 = rational_sqrt(u0)
        if y0 is not None:
            return RatPoly([y0])
        y1 = rational_sqrt(-u0 / e)
        if y1 is None:
            return None
        y0 = Fraction(0)
    else:
        root = rational_sqrt(u0 * u0 + e * u1 * u1)
        if root is None:
            return None
        y0 = rational_sqrt((u0 + root) / 2)
        if y0 is None:
            return None
        y1 = u1 / (2 * y0)
    return RatPoly([y0 + y1 * b1 / 2, y1])


def _elementary_split(A: RatPoly, B: RatPoly, C: RatPoly, H: RatPoly, p: RatPoly, s: RatPoly):
    """Substitute x -> p x + r y, where r is a root of A r^2 + B r + C modulo p; divides H by p."""
    if A.gcd(p).degree == 0:
        r = ((s - B) * (A * 2).invert_mod(p)) % p
    else:
        r = ((-C) * B.invert_mod(p)) % p
    C_new = (A * r * r + B * r + C).exquo(p)
    return A * p, A * r * 2 + B, C_new, H.exquo(p)


def _next_split(A: RatPoly, B: RatPoly, C: RatPoly, H: RatPoly, delta: RatPoly):
    """Next step on H: (factor, square root of -(4AC - B^2) modulo it) to split, (factor, None) to drop, or None when done."""
    if H.degree < 1:
        return None
    _, factors = H.factor_list()
    for f, _ in factors:
        if f.degree == 1:
            t0 = -f.coeff(0)
            value = delta.evaluate(t0)
            if value > 0:
                continue
            s = rational_sqrt(-value)
            if s is None:
                raise IrrationalSplitRequired(f"B^2 - 4AC = {-value} is not a rational square at t = {t0}")
            return f, RatPoly([s])
    for f, _ in factors:
        if f.degree == 1:
            continue
        roots = isolate_real_roots(f)
        if not roots:
            s = _sqrt_mod_quadratic(-delta, f.monic()) if f.degree == 2 else None
            return f.monic(), s
        if len(roots) < f.degree:
            raise IrrationalSplitRequired(f"the nonreal roots of {f} do not form a factor over Q")
        if any(sign_at(delta, r) < 0 for r in roots):
            raise IrrationalSplitRequired(f"splitting along {f} needs an extension of Q")
    return None


def normalize(m: ConicBundleModel) -> ConicBundleModel:
    """Remove real roots of H with 4AC - B^2 < 0 and complex root pairs of H; make lc(H) negative.

    A factor of H without real roots is split off by an elementary transformation
    when that is possible over Q. Otherwise it is divided out of H: being positive
    on the real line it changes neither the real image nor the discriminant, so the
    result has the invariants of the split model.
    """
    m = _ensure_validated(m)
    A, B, C, H = m.coefficients
    delta = m.delta
    while True:
        step = _next_split(A, B, C, H, delta)
        if step is None:
            break
        p, s = step
        if s is None:
            logger.debug("normalize: no split along %s over Q, dividing it out of H", p)
            H = H.exquo(p)
            continue
        logger.debug("normalize: splitting along %s", p)
        A, B, C, H = _elementary_split(A, B, C, H, p, s)
    if H.lc > 0:
        A, B, C, H = -A, -B, -C, -H
    return validate_model(A, B, C, H)


@dataclass(frozen=True)
class NormalFormInvariants:
    """Invariant-level normal form: discriminant, special fibre points and real image."""

    delta: RatPoly
    special_points: Tuple[Exact, ...]
    arcs: ArcSet


def normal_form_invariants(m: ConicBundleModel) -> NormalFormInvariants:
    """Normal form data computed without performing any split."""
    m = _ensure_validated(m)
    delta = m.delta
    points = []
    if m.H.degree > 0:
        points = [r for r in isolate_real_roots(m.H) if sign_at(delta, r) > 0]
    return NormalFormInvariants(delta.normalized(), tuple(points), real_image_arcs(m))


# === CONJUGACY ===

@dataclass
class FibrewiseVerdict:
    conjugate: bool
    lam: Optional[Exact] = None
    mu: Optional[Exact] = None
    failing: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "conjugate": self.conjugate,
            "lambda": None if self.lam is None else format_exact(self.lam),
            "mu": None if self.mu is None else format_exact(self.mu),
            "failing": self.failing,
        }


@dataclass
class BaseConjugacyVerdict(FibrewiseVerdict):
    witness: Optional[Moebius] = None
    candidates: int = 0

    def to_dict(self) -> dict:
        data = super().to_dict()
        data["witness"] = None if self.witness is None else str(self.witness)
        data["candidates"] = self.candidates
        return data


def _require_normalized(*models: ConicBundleModel) -> None:
    for m in models:
        defects = _normalization_defects(m)
        if m.H.lc > 0:
            defects.append("H has a positive leading coefficient")
        if defects:
            raise NotNormalized("; ".join(defects))


def fibrewise_conjugate(m1: ConicBundleModel, m2: ConicBundleModel) -> FibrewiseVerdict:
    """Conjugacy over the identity of the base: Delta1 = lam Delta2, H1 = mu H2 with lam, mu > 0, equal arcs."""
    _require_normalized(m1, m2)
    lam = _ratio(m1.delta, m2.delta)
    if lam is None or lam <= 0:
        return FibrewiseVerdict(False, failing="discriminant")
    mu = _ratio(m1.H, m2.H)
    if mu is None or mu <= 0:
        return FibrewiseVerdict(False, lam=lam, failing="special_fibres")
    if real_image_arcs(m1) != real_image_arcs(m2):
        return FibrewiseVerdict(False, lam=lam, mu=mu, failing="arcs")
    return FibrewiseVerdict(True, lam=lam, mu=mu)


def _ratio(p: RatPoly, q: RatPoly) -> Optional[Fraction]:
    if p.degree != q.degree or q.is_zero:
        return None
    c = p.lc / q.lc
    return c if p == q * c else None


def balance_binary_part(m: ConicBundleModel) -> ConicBundleModel:
    """Same surface with deg A + deg C at most the even degree of 4AC - B^2.

    When the leading terms of 4AC and B^2 cancel, x -> x + r y (or y -> y + r x)
    with a monomial r lowers deg C (or deg A). Discriminant, H and real image are kept.
    """
    A, B, C, H = m.coefficients
    target = m.delta.degree + m.delta.degree % 2
    while A.degree + C.degree > target:
        half = (A.degree + C.degree) // 2
        if A.degree <= C.degree:
            r = RatPoly([0] * (half - A.degree) + [-B.coeff(half) / (2 * A.lc)])
            B, C = A * r * 2 + B, A * r * r + B * r + C
        else:
            r = RatPoly([0] * (half - C.degree) + [-B.coeff(half) / (2 * C.lc)])
            A, B = A + B * r + C * r * r, B + C * r * 2
    if (A, B, C) == m.coefficients[:3]:
        return m
    logger.debug("balanced binary part to (%s, %s, %s)", A, B, C)
    return ConicBundleModel(A, B, C, H, m.validated)


def declared_degrees(m: ConicBundleModel) -> Tuple[int, int, int, int]:
    """Homogeneous degrees of (A, B, C, H) used for base changes.

    The discriminant gets its degree rounded up to even; A keeps its own degree.
    """
    d = m.delta.degree + m.delta.degree % 2
    dA = m.A.degree
    dC = d - dA
    if dC < m.C.degree:
        raise DegreeMismatch("leading terms of 4AC and B^2 cancel; balance the binary part first")
    dB = d // 2
    if m.B.degree > dB:
        raise DegreeMismatch(f"deg B = {m.B.degree} exceeds deg(4AC - B^2)/2")
    dH = m.H.degree if (m.H.degree - dA) % 2 == 0 else m.H.degree + 1
    return dA, dB, dC, dH


def pullback_model(m: ConicBundleModel, phi: Moebius) -> ConicBundleModel:
    """Model over the new base coordinate u, with t = phi(u) and denominators cleared."""
    m = balance_binary_part(m)
    degrees = declared_degrees(m)
    pulled = [pullback_form(p, phi, d) for p, d in zip(m.coefficients, degrees)]
    return ConicBundleModel.unchecked(*pulled)


@dataclass(frozen=True)
class Reparametrization:
    model: ConicBundleModel
    substitution: Moebius
    point: Fraction


def _height_points(height: int) -> Iterator[Fraction]:
    """Rationals p/q by increasing height max(|p|, q), smaller absolute value first."""
    yield Fraction(0)
    for h in range(1, height + 1):
        ring = [
            Fraction(p, q)
            for q in range(1, h + 1)
            for p in range(-h, h + 1)
            if max(abs(p), q) == h and gcd(p, q) == 1
        ]
        yield from sorted(ring, key=lambda x: (abs(x), x < 0))


def reparametrize_to_infinity(A, B, C, H, height: Optional[int] = None) -> Reparametrization:
    """Move a small-height rational point with empty fibre to infinity and validate the result."""
    height = settings.REPARAM_SEARCH_HEIGHT if height is None else height
    raw = ConicBundleModel.unchecked(A, B, C, H)
    critical = raw.delta * raw.H
    for point in _height_points(height):
        if critical.evaluate(point) == 0 or not fibre_is_empty(raw, point):
            continue
        phi = Moebius.to_infinity(point).inverse()
        pulled = pullback_model(raw, phi)
        model = validate_model(*pulled.coefficients)
        logger.info("reparametrized base by t -> %s to empty the fibre at infinity", phi)
        return Reparametrization(model, phi, point)
    raise NonEmptyFibreAtInfinity(f"no rational point of height <= {height} has an empty fibre")


def _base_config(m: ConicBundleModel) -> PointConfig:
    _, _, _, dH = declared_degrees(balance_binary_part(m))
    return PointConfig.from_polynomial(m.delta * m.H, m.delta.degree + dH)


def _irrational_check(m1: ConicBundleModel, m2: ConicBundleModel, phi: Moebius) -> FibrewiseVerdict:
    """Fibrewise conditions for phi with irrational entries, decided on exact ratios and sample images."""
    _, _, _, dH = declared_degrees(balance_binary_part(m2))
    lam = pullback_ratio(m1.delta, m2.delta, phi, m2.delta.degree)
    if lam is None or sign(lam) <= 0:
        return FibrewiseVerdict(False, failing="discriminant")
    mu = pullback_ratio(m1.H, m2.H, phi, dH)
    if mu is None:
        return FibrewiseVerdict(False, lam=lam, failing="special_fibres")
    product = m1.delta * m1.H
    breakpoints = isolate_real_roots(product) if product.degree > 0 else []
    for s in region_samples(breakpoints):
        image = phi.apply(s)
        if image is INF:
            continue
        if fibre_is_empty(m1, s) != fibre_is_empty(m2, image):
            return FibrewiseVerdict(False, lam=lam, mu=mu, failing="arcs")
    return FibrewiseVerdict(True, lam=lam, mu=mu if sign(mu) > 0 else simplify(-mu))


def conjugate_mod_pgl2(m1: ConicBundleModel, m2: ConicBundleModel) -> BaseConjugacyVerdict:
    """Conjugacy allowing a real Moebius change of the base, with the base map as witness."""
    _require_normalized(m1, m2)
    maps = config_maps(_base_config(m1), _base_config(m2))
    logger.debug("conjugate_mod_pgl2: %d candidate base maps", len(maps))
    if not maps:
        return BaseConjugacyVerdict(False, failing="configuration")
    last = None
    for phi in maps:
        if phi.is_rational:
            pulled = pullback_model(m2, phi)
            if pulled.H.lc > 0:
                pulled = pulled.negated()
            verdict = fibrewise_conjugate(m1, pulled)
        else:
            verdict = _irrational_check(m1, m2, phi)
        if verdict.conjugate:
            return BaseConjugacyVerdict(True, verdict.lam, verdict.mu, witness=phi, candidates=len(maps))
        last = verdict.failing
    return BaseConjugacyVerdict(False, failing=last, candidates=len(maps))


# === INVARIANT-LEVEL CONJUGACY ===

def fibrewise_invariants(m1: ConicBundleModel, m2: ConicBundleModel) -> FibrewiseVerdict:
    """fibrewise_conjugate on normal form invariants, for models whose normal form needs an extension of Q."""
    nf1, nf2 = normal_form_invariants(m1), normal_form_invariants(m2)
    lam = _ratio(m1.delta, m2.delta)
    if lam is None or lam <= 0:
        return FibrewiseVerdict(False, failing="discriminant")
    if len(nf1.special_points) != len(nf2.special_points) or not all(p in nf2.special_points for p in nf1.special_points):
        return FibrewiseVerdict(False, lam=lam, failing="special_fibres")
    if nf1.arcs != nf2.arcs:
        return FibrewiseVerdict(False, lam=lam, failing="arcs")
    return FibrewiseVerdict(True, lam=lam)


def _invariant_config(nf: NormalFormInvariants) -> PointConfig:
    config = PointConfig.from_polynomial(nf.delta)
    return replace(config, real_points=config.real_points + nf.special_points)


def _invariant_check(
    m1: ConicBundleModel, m2: ConicBundleModel, phi: Moebius, nf1: NormalFormInvariants, nf2: NormalFormInvariants
) -> FibrewiseVerdict:
    lam = pullback_ratio(m1.delta, m2.delta, phi, m2.delta.degree)
    if lam is None or sign(lam) <= 0:
        return FibrewiseVerdict(False, failing="discriminant")
    images = [phi.apply(p) for p in nf1.special_points]
    if any(q is INF or q not in nf2.special_points for q in images):
        return FibrewiseVerdict(False, lam=lam, failing="special_fibres")
    product = m1.delta * m1.H
    for s in region_samples(isolate_real_roots(product)):
        image = phi.apply(s)
        if image is not INF and fibre_is_empty(m1, s) != fibre_is_empty(m2, image):
            return FibrewiseVerdict(False, lam=lam, failing="arcs")
    return FibrewiseVerdict(True, lam=lam)


def conjugate_invariants(m1: ConicBundleModel, m2: ConicBundleModel) -> BaseConjugacyVerdict:
    """conjugate_mod_pgl2 decided on normal form invariants; no normalized model is needed."""
    nf1, nf2 = normal_form_invariants(m1), normal_form_invariants(m2)
    if len(nf1.special_points) != len(nf2.special_points):
        return BaseConjugacyVerdict(False, failing="special_fibres")
    maps = config_maps(_invariant_config(nf1), _invariant_config(nf2))
    logger.debug("conjugate_invariants: %d candidate base maps", len(maps))
    if not maps:
        return BaseConjugacyVerdict(False, failing="configuration")
    last = None
    for phi in maps:
        verdict = _invariant_check(m1, m2, phi, nf1, nf2)
        if verdict.conjugate:
            return BaseConjugacyVerdict(True, verdict.lam, witness=phi, candidates=len(maps))
        last = verdict.failing
    return BaseConjugacyVerdict(False, failing=last, candidates=len(maps))
