"""Quadratic form equivalence over R(t).

Two deciders for binary diagonal forms: a residue criterion working root by
root with the second residue homomorphisms, and a signature-profile oracle
comparing rank, discriminant and signature at almost every real t.
"""

import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from cremona.core.config import settings
from cremona.core.errors import (
    CommonDivisor,
    DegenerateBinaryPart,
    InvalidParameters,
    NotSquareFree,
    ReducibleModulus,
    ResidueFieldUnsupported,
    ZeroPolynomial,
)
from cremona.services.exactnum import (
    AlgReal,
    Exact,
    RatPoly,
    as_poly,
    discriminant,
    is_square_free,
    isolate_real_roots,
    region_samples,
    sign_at,
    square_class,
)
from cremona.services.polytext import format_exact

logger = logging.getLogger(__name__)


class CriterionMode(str, Enum):
    ALL_ROOTS = "all_roots"
    PRINTED = "printed"


class Decider(str, Enum):
    CRITERION = "criterion"
    ORACLE = "oracle"
    BOTH = "both"


# === DOMAIN TYPES ===

@dataclass(frozen=True)
class DiagFormRt:
    """Diagonal quadratic form <p1, ..., pn> over R(t)."""

    entries: Tuple[RatPoly, ...]

    def __post_init__(self):
        if not self.entries:
            raise ValueError("a diagonal form needs at least one entry")
        if any(e.is_zero for e in self.entries):
            raise ZeroPolynomial("diagonal form entries must be nonzero")

    @classmethod
    def of(cls, *entries) -> "DiagFormRt":
        return cls(tuple(as_poly(e) for e in entries))

    @property
    def rank(self) -> int:
        return len(self.entries)

    @property
    def determinant(self) -> RatPoly:
        result = RatPoly([1])
        for e in self.entries:
            result = result * e
        return result

    def __add__(self, other: "DiagFormRt") -> "DiagFormRt":
        """Orthogonal sum."""
        return DiagFormRt(self.entries + other.entries)

    def signature_at(self, x) -> int:
        return sum(sign_at(e, x) for e in self.entries)

    def __str__(self) -> str:
        return "<" + ", ".join(str(e) for e in self.entries) + ">"


@dataclass(frozen=True)
class WittClassR:
    """Class in W(R), identified by its signature."""

    signature: int

    def __add__(self, other: "WittClassR") -> "WittClassR":
        return WittClassR(self.signature + other.signature)


@dataclass(frozen=True)
class WittClassC:
    """Class in W(C), identified by the parity of the rank."""

    parity: int

    def __post_init__(self):
        object.__setattr__(self, "parity", self.parity % 2)

    def __add__(self, other: "WittClassC") -> "WittClassC":
        return WittClassC(self.parity + other.parity)


WittClass = Union[WittClassR, WittClassC]


@dataclass(frozen=True)
class ProfileRegion:
    """Open region of the real line with constant signature.

    ``lo is None`` means -inf, ``hi is None`` means +inf; ``lo >= hi`` marks
    the arc through infinity (``lo == hi`` when a single breakpoint is cut out).
    """

    lo: Optional[Exact]
    hi: Optional[Exact]
    signature: int

    @property
    def wraps(self) -> bool:
        return self.lo is not None and self.hi is not None and self.lo >= self.hi

    def contains(self, x) -> bool:
        if self.wraps:
            return x > self.lo or x < self.hi
        return (self.lo is None or x > self.lo) and (self.hi is None or x < self.hi)

    def to_dict(self) -> dict:
        return {
            "from": "-inf" if self.lo is None else format_exact(self.lo),
            "to": "inf" if self.hi is None else format_exact(self.hi),
            "signature": self.signature,
        }


@dataclass(frozen=True)
class SignatureProfile:
    breakpoints: Tuple[AlgReal, ...]
    regions: Tuple[ProfileRegion, ...]

    @property
    def signatures(self) -> Tuple[int, ...]:
        return tuple(r.signature for r in self.regions)

    def signature_at(self, x) -> int:
        for region in self.regions:
            if region.contains(x):
                return region.signature
        raise ValueError(f"{format_exact(x)} is a breakpoint of the profile")

    def to_dict(self) -> dict:
        return {"regions": [r.to_dict() for r in self.regions]}


# === RESIDUES ===

def square_class_equal(p: RatPoly, q: RatPoly) -> bool:
    """True if p and q agree modulo squares of R(t)."""
    return square_class(p * q) == RatPoly([1])


def _check_modulus(pi: RatPoly) -> RatPoly:
    if pi.is_zero:
        raise ZeroPolynomial("residue at the zero polynomial")
    if pi.degree < 1:
        raise ReducibleModulus(f"{pi} is a unit")
    _, factors = pi.factor_list()
    if len(factors) != 1 or factors[0][1] != 1:
        raise ReducibleModulus(f"{pi} is reducible over Q")
    pi = pi.monic()
    if pi.degree > 2:
        raise ResidueFieldUnsupported(f"residue field of {pi} has degree {pi.degree}")
    if pi.degree == 2 and discriminant(pi) >= 0:
        raise ReducibleModulus(f"{pi} splits over R")
    return pi


def second_residue(form: DiagFormRt, pi: RatPoly) -> WittClass:
    """Second residue of the form at the prime pi (degree 1 or 2)."""
    pi = _check_modulus(as_poly(pi))
    total = 0
    for entry in form.entries:
        u = square_class(entry)
        if not pi.divides(u):
            continue
        v = u // pi
        if pi.degree == 1:
            total += sign_at(v, -pi.coeffs[0])
        else:
            total += 1
    if pi.degree == 1:
        return WittClassR(total)
    return WittClassC(total)


def residue_at_infinity(form: DiagFormRt) -> WittClassR:
    """Splitting of W(R) -> W(R(t)) at infinity: leading signs of even-degree entries."""
    return WittClassR(sum((1 if e.lc > 0 else -1) for e in form.entries if e.degree % 2 == 0))


# === SIGNATURE PROFILES ===

def _distinct_roots(polys: Iterable[RatPoly]) -> List[AlgReal]:
    product = RatPoly([1])
    for p in polys:
        product = product * p
    return isolate_real_roots(product)


def signature_profile(form: DiagFormRt) -> SignatureProfile:
    """Signature of the evaluated form on every region between real roots of its entries."""
    breakpoints = _distinct_roots(form.entries)
    samples = region_samples(breakpoints)
    signatures = [form.signature_at(s) for s in samples]
    if not breakpoints:
        return SignatureProfile((), (ProfileRegion(None, None, signatures[0]),))

    bounded = [
        ProfileRegion(a, b, s) for a, b, s in zip(breakpoints, breakpoints[1:], signatures[1:-1])
    ]
    plus = tuple(e.sign_at_infinity(1) for e in form.entries)
    minus = tuple(e.sign_at_infinity(-1) for e in form.entries)
    if plus != minus:
        regions = (
            [ProfileRegion(None, breakpoints[0], signatures[0])]
            + bounded
            + [ProfileRegion(breakpoints[-1], None, signatures[-1])]
        )
    elif len(breakpoints) == 1:
        regions = [ProfileRegion(breakpoints[0], breakpoints[0], signatures[0])]
    else:
        regions = bounded + [ProfileRegion(breakpoints[-1], breakpoints[0], signatures[-1])]
    return SignatureProfile(tuple(breakpoints), tuple(regions))


# === BINARY DECIDERS ===

def _require_square_free(*polys: RatPoly) -> None:
    for p in polys:
        if p.is_zero:
            raise ZeroPolynomial("form entries must be nonzero")
        if p.degree > 0 and not is_square_free(p):
            raise NotSquareFree(f"{p} has a multiple root")


def _leading_coefficient_table(A: RatPoly, B: RatPoly, C: RatPoly, D: RatPoly) -> bool:
    odd = [p.degree % 2 == 1 for p in (A, B, C, D)]
    lam = [1 if p.lc > 0 else -1 for p in (A, B, C, D)]
    if odd[0] != odd[1] and odd[2] != odd[3]:
        even_signs = [s for s, o in zip(lam, odd) if not o]
        return even_signs[0] == even_signs[1]
    if all(odd):
        return True
    if odd[0] and odd[1] and not odd[2] and not odd[3]:
        return lam[2] * lam[3] < 0
    if not odd[0] and not odd[1] and odd[2] and odd[3]:
        return lam[0] * lam[1] < 0
    if not any(odd):
        mixed = lam[0] * lam[1] < 0 and lam[2] * lam[3] < 0
        return mixed or len(set(lam)) == 1
    return False


def _root_condition(entries: Sequence[RatPoly], eps: AlgReal) -> bool:
    """Sign conditions at a real root of the first entry.

    At a simple root, Q_eps(eps) = Q'(eps), so every sign is read off the derivative.
    """
    A, B, C, D = entries
    vanish = [sign_at(p, eps) == 0 for p in entries]
    local = [sign_at(p.derivative(), eps) for p in entries]
    if vanish[0] and not vanish[1]:
        if vanish[2] and local[0] * local[2] <= 0:
            return False
        if vanish[3] and local[0] * local[3] <= 0:
            return False
        return vanish[2] != vanish[3]
    if vanish[0] and vanish[1] and not vanish[2] and not vanish[3]:
        return local[0] * local[1] < 0
    if all(vanish):
        mixed = local[0] * local[1] < 0 and local[2] * local[3] < 0
        return mixed or len(set(local)) == 1
    return False


def _renamed(entries: Sequence[RatPoly], eps: AlgReal) -> Optional[List[RatPoly]]:
    """Reorder so that the first entry vanishes at eps; None if no entry does."""
    A, B, C, D = entries
    for order in ((A, B, C, D), (B, A, D, C), (C, D, A, B), (D, C, B, A)):
        if sign_at(order[0], eps) == 0:
            return list(order)
    return None


def _root_verdicts(A: RatPoly, B: RatPoly, C: RatPoly, D: RatPoly) -> Tuple[bool, bool]:
    """Root conditions at the real roots of A, and at every real root of ABCD."""
    entries = [A, B, C, D]
    printed = True
    every = True
    for eps in _distinct_roots(entries):
        renamed = _renamed(entries, eps)
        ok = _root_condition(renamed, eps)
        if sign_at(A, eps) == 0:
            printed = printed and _root_condition(entries, eps)
        every = every and ok
    return printed, every


def equiv_binary_criterion(
    A: RatPoly,
    B: RatPoly,
    C: RatPoly,
    D: RatPoly,
    mode: CriterionMode = CriterionMode.ALL_ROOTS,
) -> bool:
    """Residue criterion for <A, B> ~ <C, D> with square-free entries."""
    A, B, C, D = (as_poly(p) for p in (A, B, C, D))
    _require_square_free(A, B, C, D)
    if square_class(A * B * C * D) != RatPoly([1]):
        return False
    if not _leading_coefficient_table(A, B, C, D):
        return False

    printed, every = _root_verdicts(A, B, C, D)
    if printed != every:
        logger.warning(
            "root conditions over roots of A only give %s, over all roots %s for <%s, %s> vs <%s, %s>",
            printed, every, A, B, C, D,
        )
    return printed if CriterionMode(mode) is CriterionMode.PRINTED else every


def equiv_binary_oracle(A: RatPoly, B: RatPoly, C: RatPoly, D: RatPoly) -> bool:
    """Rank, discriminant and signature comparison on the common refinement."""
    A, B, C, D = (as_poly(p) for p in (A, B, C, D))
    left, right = DiagFormRt.of(A, B), DiagFormRt.of(C, D)
    if not square_class_equal(A * B, C * D):
        return False
    left_profile = signature_profile(left)
    right_profile = signature_profile(right)
    common = sorted(set(left_profile.breakpoints) | set(right_profile.breakpoints))
    return all(
        left_profile.signature_at(x) == right_profile.signature_at(x)
        for x in region_samples(common)
    )


def equiv_ternary_G(
    A: RatPoly, B: RatPoly, E: RatPoly, C: RatPoly, D: RatPoly, F: RatPoly
) -> bool:
    """<A, B, E> ~ <C, D, F> equivariantly for the sign change of the last variable."""
    A, B, E, C, D, F = (as_poly(p) for p in (A, B, E, C, D, F))
    _require_square_free(A, B, E, C, D, F)
    if A.gcd(B).gcd(E).degree > 0:
        raise CommonDivisor(f"{A}, {B}, {E} share a factor")
    if C.gcd(D).gcd(F).degree > 0:
        raise CommonDivisor(f"{C}, {D}, {F} share a factor")
    if F.degree != E.degree or F * E.lc != E * F.lc or F.lc / E.lc <= 0:
        return False
    return equiv_binary_criterion(A, B, C, D)


@dataclass
class FormVerdict:
    """Outcome of one or both deciders."""

    criterion: Optional[bool] = None
    oracle: Optional[bool] = None

    @property
    def agree(self) -> bool:
        return self.criterion is None or self.oracle is None or self.criterion == self.oracle

    @property
    def verdict(self) -> bool:
        return self.criterion if self.criterion is not None else bool(self.oracle)


def decide_binary(
    A: RatPoly,
    B: RatPoly,
    C: RatPoly,
    D: RatPoly,
    decider: Decider = Decider.CRITERION,
    mode: CriterionMode = CriterionMode.ALL_ROOTS,
) -> FormVerdict:
    decider = Decider(decider)
    result = FormVerdict()
    if decider in (Decider.CRITERION, Decider.BOTH):
        result.criterion = equiv_binary_criterion(A, B, C, D, mode)
    if decider in (Decider.ORACLE, Decider.BOTH):
        result.oracle = equiv_binary_oracle(A, B, C, D)
    if not result.agree:
        logger.warning(
            "decider disagreement on <%s, %s> vs <%s, %s>: criterion=%s oracle=%s",
            A, B, C, D, result.criterion, result.oracle,
        )
    return result


# === DIAGONALIZATION ===

def diagonalize_binary(a: RatPoly, b: RatPoly, c: RatPoly) -> DiagFormRt:
    """Complete the square in a x^2 + b xy + c y^2; entries reduced to square classes."""
    a, b, c = (as_poly(p) for p in (a, b, c))
    disc = a * c * 4 - b * b
    if disc.is_zero:
        raise DegenerateBinaryPart("binary form is degenerate")
    if a.is_zero and c.is_zero:
        return DiagFormRt.of(1, -1)
    lead = a if not a.is_zero else c
    return DiagFormRt.of(square_class(lead), square_class(lead * disc))


# === DIFFERENTIAL TESTING ===

_FACTOR_POOL = [
    RatPoly([-r, 1]) for r in range(-4, 5)
] + [RatPoly([k, 0, 1]) for k in (1, 2, 3)] + [RatPoly([k, 1, 1]) for k in (1, 2)]


def random_square_free(rng: random.Random, max_degree: int = 6, bound: int = 9) -> RatPoly:
    """Random square-free polynomial with coefficients in [-bound, bound]."""
    while True:
        degree = rng.randint(0, max_degree)
        coeffs = [rng.randint(-bound, bound) for _ in range(degree)]
        coeffs.append(rng.choice([c for c in range(-bound, bound + 1) if c != 0]))
        p = RatPoly(coeffs)
        if p.degree == 0 or is_square_free(p):
            return p


def _paired_quadruple(rng: random.Random, max_degree: int = 6) -> Tuple[RatPoly, ...]:
    """Quadruple with ABCD a square up to a constant: each factor lands in an even number of entries."""
    while True:
        entries = [RatPoly([rng.choice([-3, -2, -1, 1, 2, 3])]) for _ in range(4)]
        for f in rng.sample(_FACTOR_POOL, rng.randint(1, 5)):
            for k in rng.sample(range(4), rng.choice([2, 2, 4])):
                entries[k] = entries[k] * f
        if all(e.degree <= max_degree for e in entries):
            return tuple(entries)


def sample_quadruple(rng: random.Random, max_degree: int = 6, bound: int = 9, paired: float = 0.0) -> Tuple[RatPoly, ...]:
    """Four square-free polynomials with uniform coefficients in [-bound, bound].

    With probability ``paired`` the quadruple is drawn from a small factor pool
    instead, so that ABCD is a square up to a constant and equivalent pairs are common.
    """
    if paired and rng.random() < paired:
        return _paired_quadruple(rng, max_degree)
    return tuple(random_square_free(rng, max_degree, bound) for _ in range(4))


@dataclass
class SelfCheckResult:
    samples: int
    seed: int
    paired_fraction: float = 0.0
    agreements: int = 0
    equivalent: int = 0
    mismatches: List[Tuple[str, str, str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> Dict[str, object]:
        return {
            "samples": self.samples,
            "seed": self.seed,
            "paired_fraction": self.paired_fraction,
            "agreements": self.agreements,
            "equivalent": self.equivalent,
            "mismatches": [list(m) for m in self.mismatches],
        }


def decider_self_check(
    samples: Optional[int] = None, seed: Optional[int] = None, paired: Optional[float] = None
) -> SelfCheckResult:
    """Run both deciders on seeded random square-free quadruples and collect disagreements."""
    samples = settings.DIFFERENTIAL_SAMPLES if samples is None else samples
    seed = settings.DEFAULT_SEED if seed is None else seed
    paired = settings.SELFCHECK_PAIRED_FRACTION if paired is None else paired
    if not 0 <= paired <= 1:
        raise InvalidParameters(f"paired fraction must lie in [0, 1], got {paired}")
    rng = random.Random(seed)
    result = SelfCheckResult(samples=samples, seed=seed, paired_fraction=paired)
    for _ in range(samples):
        A, B, C, D = sample_quadruple(rng, paired=paired)
        criterion = equiv_binary_criterion(A, B, C, D)
        oracle = equiv_binary_oracle(A, B, C, D)
        if criterion == oracle:
            result.agreements += 1
            result.equivalent += int(oracle)
        else:
            logger.warning("decider disagreement on <%s, %s> vs <%s, %s>", A, B, C, D)
            result.mismatches.append((str(A), str(B), str(C), str(D)))
    logger.info("self-check: %d/%d agreements (%d equivalent)", result.agreements, samples, result.equivalent)
    return result
