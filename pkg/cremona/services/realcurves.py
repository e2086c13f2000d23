"""Real invariants of fixed curves.

Hyperelliptic curves w^2 = +-f(z, t) are handled through their binary forms:
real component counts, projective equivalence with sign, the Gaussian test
and the de Jonquieres conjugacy decision. The Kowalevskaya quartic family
gets a smoothness check and an exact oval count.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

from cremona.core.errors import (
    DegreeMismatch,
    DegreeTooSmall,
    InvalidParameters,
    NotSquareFree,
    SingularQuartic,
)
from cremona.services.exactnum import (
    Exact,
    RatPoly,
    as_poly,
    is_square_free,
    isolate_real_roots,
    lower_rational,
    rational_between,
    region_samples,
    sign,
    sign_at,
    upper_rational,
)
from cremona.services.projline import Moebius, PointConfig, config_maps, pullback_form, pullback_ratio

logger = logging.getLogger(__name__)


class Verdict(str, Enum):
    CONJUGATE = "Conjugate"
    NOT_CONJUGATE = "NotConjugate"
    FIBREWISE_ONLY = "FibrewiseConjugateOnly"
    UNKNOWN = "Unknown"


# === BINARY FORMS ===

@dataclass(frozen=True)
class BinaryForm:
    """Square-free binary form of even degree, stored dehomogenized at s = 1.

    A declared degree one above deg(poly) puts a simple root at infinity.
    """

    poly: RatPoly
    hom_degree: int

    def __post_init__(self):
        object.__setattr__(self, "poly", as_poly(self.poly))
        if self.hom_degree % 2:
            raise DegreeMismatch(f"binary form degree {self.hom_degree} is odd")
        if self.hom_degree < 4:
            raise DegreeTooSmall(f"binary form degree {self.hom_degree} < 4")
        deficiency = self.hom_degree - self.poly.degree
        if self.poly.is_zero or deficiency < 0:
            raise DegreeMismatch(f"declared degree {self.hom_degree} does not fit {self.poly}")
        if deficiency > 1 or not is_square_free(self.poly):
            raise NotSquareFree(f"{self} has a multiple root")

    @classmethod
    def of(cls, poly, hom_degree: Optional[int] = None) -> "BinaryForm":
        poly = as_poly(poly)
        if hom_degree is None:
            hom_degree = poly.degree + poly.degree % 2
        return cls(poly, hom_degree)

    @property
    def root_at_infinity(self) -> bool:
        return self.hom_degree > self.poly.degree

    @property
    def genus(self) -> int:
        return self.hom_degree // 2 - 1

    def config(self) -> PointConfig:
        return PointConfig.from_polynomial(self.poly, self.hom_degree)

    def pullback(self, m: Moebius) -> "BinaryForm":
        return BinaryForm(pullback_form(self.poly, m, self.hom_degree), self.hom_degree)

    def __neg__(self) -> "BinaryForm":
        return BinaryForm(-self.poly, self.hom_degree)

    def __str__(self) -> str:
        return f"{self.poly} deg={self.hom_degree}"


def hyperelliptic_components(f: BinaryForm, sign_: int = 1) -> int:
    """Connected components of the real locus of w^2 = sign * f in P(n, 1, 1)."""
    g = f.poly * sign_
    roots = isolate_real_roots(g)
    status = [sign_at(g, s) > 0 for s in region_samples(roots)]
    if not roots and not f.root_at_infinity:
        if not status[0]:
            return 0
        # Over a root-free circle the two sheets close up into one loop when n is odd
        return 2 if (f.hom_degree // 2) % 2 == 0 else 1
    segments = status[1:-1]
    if f.root_at_infinity:
        segments = [status[0]] + segments + [status[-1]]
    else:
        segments = segments + [status[0]]
    if all(segments):
        return 1
    # Count maximal runs of positive segments on the circle
    return sum(1 for i, s in enumerate(segments) if s and not segments[i - 1])


def _equivalence_witnesses(f: BinaryForm, g: BinaryForm) -> Iterator[Tuple[Moebius, int]]:
    """Maps m with pullback(f, m) = +-c g for c > 0, paired with the sign."""
    if f.hom_degree != g.hom_degree:
        return
    for m in config_maps(g.config(), f.config()):
        ratio = pullback_ratio(g.poly, f.poly, m, f.hom_degree)
        if ratio is not None:
            yield m, sign(ratio)


def binary_form_projective_equiv(f: BinaryForm, g: BinaryForm) -> Optional[Tuple[Moebius, int]]:
    """A real Moebius map and sign with pullback(f, m) = sign * c * g, c > 0; positive sign preferred."""
    negative = None
    for m, s in _equivalence_witnesses(f, g):
        if s > 0:
            return m, 1
        if negative is None:
            negative = (m, -1)
    return negative


def is_gaussian(f: BinaryForm) -> bool:
    """True if some real linear substitution sends f to -f up to a positive factor."""
    if f.hom_degree < 6:
        raise DegreeTooSmall(f"Gaussian test needs degree >= 6, got {f.hom_degree}")
    return any(s < 0 for _, s in _equivalence_witnesses(f, f))


def dejonquieres_conjugate(f: BinaryForm, g: BinaryForm) -> Verdict:
    """Conjugacy of de Jonquieres involutions with fixed curves w^2 = f and w^2 = g."""
    for form in (f, g):
        if form.hom_degree < 6:
            raise DegreeTooSmall(f"fixed curve of degree {form.hom_degree} has genus < 2")
    if f.hom_degree != g.hom_degree:
        return Verdict.NOT_CONJUGATE
    witness = binary_form_projective_equiv(f, g)
    if witness is None:
        return Verdict.NOT_CONJUGATE
    if witness[1] > 0 or is_gaussian(f):
        return Verdict.CONJUGATE
    return Verdict.NOT_CONJUGATE


# === KOWALEVSKAYA QUARTICS ===

@dataclass(frozen=True)
class KowalevskayaQuartic:
    """-(y^2 + a x^2 + b xz + c z^2)^2 + sign * xz(x - z)(x - sz) = 0."""

    a: Fraction
    b: Fraction
    c: Fraction
    s: Fraction
    sign: int = 1

    def __post_init__(self):
        for name in ("a", "b", "c", "s"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.a <= 0 or self.s <= 1 or self.sign not in (1, -1):
            raise InvalidParameters(f"need a > 0, s > 1 and sign +-1, got {self.parameters()}")
        if not is_square_free(self.critical_polynomial):
            raise SingularQuartic(f"quartic with parameters {self.parameters()} is singular")

    @property
    def q(self) -> RatPoly:
        return RatPoly([self.c, self.b, self.a])

    @property
    def h(self) -> RatPoly:
        """sign * x(x - 1)(x - s)."""
        return RatPoly.from_roots([0, 1, self.s]) * self.sign

    @property
    def critical_polynomial(self) -> RatPoly:
        """q^2 - h; its roots are the x-coordinates of real points on y = 0."""
        return self.q * self.q - self.h

    def parameters(self) -> dict:
        return {"a": str(self.a), "b": str(self.b), "c": str(self.c), "s": str(self.s), "sign": self.sign}

    def __str__(self) -> str:
        op = "+" if self.sign > 0 else "-"
        return f"-(y^2 + {self.a}x^2 + {self.b}xz + {self.c}z^2)^2 {op} xz(x - z)(x - {self.s}z)"


@dataclass(frozen=True)
class OvalProfile:
    ovals: int
    nested: bool

    def to_dict(self) -> dict:
        return {"ovals": self.ovals, "nested": self.nested}


@dataclass(frozen=True)
class _Piece:
    """Branch v = branch * sqrt(h) over the x-interval [lo, hi]; None bounds are infinite."""

    branch: int
    lo: Optional[Exact]
    hi: Optional[Exact]
    ascending: bool

    def key(self, x: Exact) -> Exact:
        return x if self.ascending else -x

    def x_of(self, key: Fraction) -> Fraction:
        return key if self.ascending else -key

    @property
    def start(self) -> Optional[Exact]:
        return self.lo if self.ascending else self.hi

    @property
    def start_key(self) -> Optional[Exact]:
        # None reads as -inf at a start and as +inf at an end
        return None if self.start is None else self.key(self.start)

    @property
    def end_key(self) -> Optional[Exact]:
        end = self.hi if self.ascending else self.lo
        return None if end is None else self.key(end)


@dataclass
class _Component:
    """One real component of v^2 = h(x): a closed loop, or a path with both ends at infinity."""

    pieces: List[_Piece]
    closed: bool
    marks: List[Tuple[int, Exact, Exact]] = field(default_factory=list)

    def contains(self, x: Exact) -> bool:
        lo, hi = self.pieces[0].lo, self.pieces[0].hi
        return (lo is None or lo <= x) and (hi is None or x <= hi)

    def junction_piece(self, x: Exact) -> Optional[int]:
        for k, piece in enumerate(self.pieces):
            if piece.start is not None and piece.start == x:
                return k
        return None


def _key_between(lo: Optional[Exact], hi: Optional[Exact]) -> Fraction:
    if lo is None:
        return lower_rational(hi)
    if hi is None:
        return upper_rational(lo)
    return rational_between(lo, hi)


def _components(h: RatPoly) -> List[_Component]:
    """Real components of v^2 = h(x) for a cubic h with three simple real roots."""
    e1, e2, e3 = isolate_real_roots(h)
    if h.lc > 0:
        loop = [_Piece(1, e1, e2, True), _Piece(-1, e1, e2, False)]
        path = [_Piece(-1, e3, None, False), _Piece(1, e3, None, True)]
    else:
        loop = [_Piece(1, e2, e3, True), _Piece(-1, e2, e3, False)]
        path = [_Piece(-1, None, e1, True), _Piece(1, None, e1, False)]
    return [_Component(loop, True), _Component(path, False)]


class _Sweep:
    """Sign of v - q(x) along the real components of v^2 = h(x)."""

    def __init__(self, q: RatPoly, h: RatPoly):
        self.q = q
        self.h = h

    def branch_sign(self, branch: int, x: Fraction) -> int:
        """Sign of branch * sqrt(h(x)) - q(x) at a rational x with h(x) >= 0."""
        qx, hx = self.q.evaluate(x), self.h.evaluate(x)
        if branch > 0:
            return 1 if qx < 0 else sign(hx - qx * qx)
        if qx >= 0:
            return -1 if (qx > 0 or hx > 0) else 0
        return sign(qx * qx - hx)

    def segment_sign(self, pieces: List[_Piece], first, second) -> int:
        """Sign on the open stretch between two path positions (piece index, key)."""
        (k1, key1), (k2, key2) = first, second
        piece = pieces[k1]
        if k1 == k2:
            return self.branch_sign(piece.branch, piece.x_of(_key_between(key1, key2)))
        following = pieces[k1 + 1]
        if k2 == k1 + 1 and key2 == following.start_key:
            return self.branch_sign(piece.branch, piece.x_of(_key_between(key1, piece.end_key)))
        # The stretch passes the junction, where v = 0
        return -sign_at(self.q, following.start)


def kowalevskaya_oval_profile(quartic: KowalevskayaQuartic) -> OvalProfile:
    """Number of ovals of the real quartic and whether two of them are nested.

    Real points satisfy (y^2 + q(x))^2 = h(x), so they lie over the arcs of
    v^2 = h(x) where u = v - q(x) >= 0, with y = +-sqrt(u). Each arc bounded
    by points with u = 0 gives one oval crossing y = 0 at its two ends.
    """
    q, h = quartic.q, quartic.h
    sweep = _Sweep(q, h)
    components = _components(h)
    for r in isolate_real_roots(quartic.critical_polynomial):
        comp = next(c for c in components if c.contains(r))
        k = comp.junction_piece(r)
        if k is None:
            k = next(i for i, p in enumerate(comp.pieces) if p.branch == sign_at(q, r))
        comp.marks.append((k, comp.pieces[k].key(r), r))

    ovals = 0
    crossings: List[Tuple[Exact, Exact]] = []
    for comp in components:
        marks = sorted(comp.marks, key=lambda m: (m[0], m[1]))
        pieces = list(comp.pieces)
        if comp.closed and not marks:
            if -sign_at(q, pieces[0].start) > 0:
                # The loop lies in u > 0: two mirror ovals y > 0 and y < 0
                ovals += 2
            continue
        positions = [(k, key) for k, key, _ in marks]
        xs: List[Optional[Exact]] = [x for _, _, x in marks]
        if comp.closed:
            pieces = pieces * 2
            positions.append((positions[0][0] + len(comp.pieces), positions[0][1]))
            xs.append(xs[0])
        else:
            positions = [(0, pieces[0].start_key)] + positions + [(len(pieces) - 1, None)]
            xs = [None] + xs + [None]
        for i in range(len(positions) - 1):
            if sweep.segment_sign(pieces, positions[i], positions[i + 1]) > 0:
                ovals += 1
                if xs[i] is not None and xs[i + 1] is not None:
                    crossings.append(tuple(sorted((xs[i], xs[i + 1]))))
    nested = False
    if ovals == 2 and len(crossings) == 2:
        (a1, b1), (a2, b2) = crossings
        nested = (a1 < a2 and b2 < b1) or (a2 < a1 and b1 < b2)
    logger.debug("kowalevskaya %s: %d ovals, nested=%s", quartic.parameters(), ovals, nested)
    return OvalProfile(ovals, nested)


def kowalevskaya_surface_topology(profile: OvalProfile) -> str:
    """Topology of the real locus of w^2 = f4 for the given oval profile."""
    if profile.ovals == 0:
        return "empty"
    if profile.ovals == 1:
        return "S^2"
    if profile.nested:
        return "S^1 x S^1"
    return " u ".join(["S^2"] * profile.ovals)


# === REFERENCE TABLES ===

# Real locus of the sextic branch curve -> real loci of the two double covers S+, S-
BERTINI_TABLE: Dict[str, Tuple[str, str]] = {
    "big circle": ("RP^2", "RP^2"),
    "big circle + 1 oval": ("RP^2 u S^2", "#3 RP^2"),
    "big circle + 2 ovals": ("RP^2 u 2 S^2", "#5 RP^2"),
    "big circle + 3 ovals": ("RP^2 u 3 S^2", "#7 RP^2"),
    "big circle + 4 ovals": ("RP^2 u 4 S^2", "#9 RP^2"),
}

# Real locus of the quartic branch curve -> real loci of S+ and S-
GEISER_TABLE: Dict[str, Tuple[str, str]] = {
    "empty": ("empty", "RP^2 u RP^2"),
    "1 oval": ("S^2", "#2 RP^2"),
    "2 non-nested ovals": ("S^2 u S^2", "#4 RP^2"),
    "2 nested ovals": ("S^1 x S^1", "S^2 u #2 RP^2"),
    "3 ovals": ("3 S^2", "#6 RP^2"),
    "4 ovals": ("4 S^2", "#8 RP^2"),
}
