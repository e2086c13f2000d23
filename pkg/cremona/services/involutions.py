"""Classes of real birational involutions of the plane and conjugacy between them.

Involutions are given through regularised model data: the linear involution,
quadric involutions, Trepalin double covers, conic bundle models, de Jonquieres
binary forms and labels for the del Pezzo cases of degree 1 and 2. Every model
is classified into one of the twelve families; conjugacy is decided inside a
family where a criterion is known and reported as Unknown, with the open
statement attached, where it is not.
"""

import logging
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from cremona.core.config import settings
from cremona.core.errors import DeltaOutOfRange, InvalidAction, InvalidParameters, IrrationalSplitRequired, NotRRational
from cremona.services.conicbundle import (
    BaseConjugacyVerdict,
    ConicBundleModel,
    conjugate_invariants,
    conjugate_mod_pgl2,
    fixed_curve_genus,
    is_normalized,
    normal_form_invariants,
    normalize,
    real_image_arcs,
    validate_model,
)
from cremona.services.exactnum import RatPoly, as_poly
from cremona.services.projline import Moebius, PointConfig, config_maps, pullback_ratio
from cremona.services.realcurves import (
    BERTINI_TABLE,
    GEISER_TABLE,
    BinaryForm,
    KowalevskayaQuartic,
    Verdict,
    dejonquieres_conjugate,
    kowalevskaya_oval_profile,
)

logger = logging.getLogger(__name__)

# Open statements attached to Unknown verdicts
CITATION_DJ1_I1 = (
    "involutions from dJ_1 can be conjugate to involutions from I_1; "
    "it is not known whether these two classes coincide"
)
CITATION_OPEN_CLASSES = (
    "for the classes T_4'', dJ_1, I_1 and I_1' it is not known how to decide "
    "whether two involutions inside the class are conjugate"
)
CITATION_T4 = (
    "the PGL_2 criterion for 0-twisted Trepalin involutions is stated for "
    "4n singular fibres with n >= 2 only"
)
CITATION_DEL_PEZZO = (
    "B_4, G_3 and K_1 involutions are conjugate if and only if the del Pezzo "
    "surfaces are equivariantly isomorphic; no isomorphism was found among the "
    "coordinate changes searched"
)


# === CLASSES ===

class ClassKind(str, Enum):
    L = "L"
    Q = "Q"
    T = "T"
    T_PRIME = "T'"
    T_DOUBLE = "T''"
    B = "B"
    G = "G"
    K = "K"
    DJ = "dJ"
    I = "I"
    I_PRIME = "I'"
    I_DOUBLE = "I''"


_PARAMETRIZED = {
    ClassKind.T, ClassKind.T_PRIME, ClassKind.T_DOUBLE,
    ClassKind.DJ, ClassKind.I, ClassKind.I_PRIME, ClassKind.I_DOUBLE,
}
_FIXED_SUBSCRIPT = {ClassKind.B: 4, ClassKind.G: 3, ClassKind.K: 1}
_FRAKTUR = {
    ClassKind.L: "𝔏",
    ClassKind.Q: "𝔔",
    ClassKind.T: "𝔗",
    ClassKind.T_PRIME: "𝔗",
    ClassKind.T_DOUBLE: "𝔗",
    ClassKind.B: "𝔅",
    ClassKind.G: "𝔊",
    ClassKind.K: "𝔎",
    ClassKind.DJ: "𝔡𝔍",
    ClassKind.I: "ℑ",
    ClassKind.I_PRIME: "ℑ",
    ClassKind.I_DOUBLE: "ℑ",
}
_PRIMES = {
    ClassKind.T_PRIME: "′",
    ClassKind.T_DOUBLE: "″",
    ClassKind.I_PRIME: "′",
    ClassKind.I_DOUBLE: "″",
}
_SUBSCRIPT_DIGITS = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


@dataclass(frozen=True)
class InvolutionClass:
    """One of the twelve families of real plane involutions.

    n is the family parameter: 4n singular fibres for T and T'', 4n + 2 for T',
    the genus of the fixed curve for dJ, I, I' and I''.
    """

    kind: ClassKind
    n: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", ClassKind(self.kind))
        if self.kind in _PARAMETRIZED:
            if not isinstance(self.n, int) or self.n < 1:
                raise InvalidParameters(f"class {self.kind.value} needs a parameter n >= 1, got {self.n}")
        elif self.n is not None:
            raise InvalidParameters(f"class {self.kind.value} takes no parameter")

    @property
    def subscript(self) -> Optional[int]:
        if self.kind in (ClassKind.T, ClassKind.T_DOUBLE):
            return 4 * self.n
        if self.kind == ClassKind.T_PRIME:
            return 4 * self.n + 2
        if self.kind in _FIXED_SUBSCRIPT:
            return _FIXED_SUBSCRIPT[self.kind]
        return self.n

    @property
    def genus(self) -> Optional[int]:
        """Genus of the fixed curve; None when no irrational curve is fixed."""
        if self.kind in _FIXED_SUBSCRIPT:
            return _FIXED_SUBSCRIPT[self.kind]
        if self.kind in (ClassKind.DJ, ClassKind.I, ClassKind.I_PRIME, ClassKind.I_DOUBLE):
            return self.n
        return None

    @property
    def label(self) -> str:
        text = _FRAKTUR[self.kind]
        if self.subscript is not None:
            text += str(self.subscript).translate(_SUBSCRIPT_DIGITS)
        return text + _PRIMES.get(self.kind, "")

    @property
    def name(self) -> str:
        if self.kind in _PARAMETRIZED:
            return f"{self.kind.value}({self.subscript})"
        if self.kind in _FIXED_SUBSCRIPT:
            return f"{self.kind.value}{self.subscript}"
        return self.kind.value

    def __str__(self) -> str:
        return self.name


def special_fibre_twist(delta: int) -> ClassKind:
    """Iskovskikh family for delta special fibres: 0, 1, 2 -> I, I', I''."""
    kinds = {0: ClassKind.I, 1: ClassKind.I_PRIME, 2: ClassKind.I_DOUBLE}
    if delta not in kinds:
        raise DeltaOutOfRange(f"{delta} special fibres; a rational model has 0, 1 or 2")
    return kinds[delta]


# === VERDICTS ===

@dataclass
class ConjugacyVerdict:
    verdict: Verdict
    reason: Optional[str] = None
    witness: Optional[str] = None
    citation: Optional[str] = None
    fibrewise: Optional[dict] = None
    classes: Tuple[str, str] = ("", "")

    @property
    def is_unknown(self) -> bool:
        return self.verdict == Verdict.UNKNOWN

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "reason": self.reason,
            "witness": self.witness,
            "citation": self.citation,
            "fibrewise": self.fibrewise,
            "classes": list(self.classes),
        }


def _unknown(citation: str, **kwargs) -> ConjugacyVerdict:
    logger.info("conjugacy undecided: %s", citation)
    return ConjugacyVerdict(Verdict.UNKNOWN, citation=citation, **kwargs)


# === QUADRIC INVOLUTIONS ===

class QuadricSurface(str, Enum):
    Q31 = "Q31"  # x^2 + y^2 + z^2 = w^2
    Q22 = "Q22"  # x^2 + y^2 = z^2 + w^2, i.e. P^1 x P^1


class QuadricRepresentative(str, Enum):
    LINEAR = "linear"
    ANTIPODAL = "antipodal"
    ROTATION = "rotation"


Matrix = Tuple[Fraction, Fraction, Fraction, Fraction]

IDENTITY: Matrix = (Fraction(1), Fraction(0), Fraction(0), Fraction(1))
ALPHA: Matrix = (Fraction(0), Fraction(1), Fraction(1), Fraction(0))  # [x:y] -> [y:x]
ALPHA_PRIME: Matrix = (Fraction(0), Fraction(1), Fraction(-1), Fraction(0))  # [x:y] -> [y:-x]

# Diagonal coefficients of the Q31 form in the order w, x, y, z
_Q31_FORM = (-1, 1, 1, 1)


def _matrix(entries: Sequence) -> Matrix:
    if len(entries) != 4:
        raise InvalidAction(f"a 2x2 matrix needs 4 entries, got {len(entries)}")
    return tuple(Fraction(e) for e in entries)


def _is_scalar(m: Matrix) -> bool:
    return m[1] == 0 and m[2] == 0 and m[0] == m[3] != 0


def _factor_fixes_real_point(m: Matrix) -> bool:
    """An involution of P^1 has real fixed points iff its trace-zero lift has negative determinant."""
    if _is_scalar(m):
        return True
    return m[0] * m[3] - m[1] * m[2] < 0


@dataclass(frozen=True)
class QuadricInvolutionData:
    """An involution of a real quadric surface.

    On Q31 the action is a diagonal sign pattern on [w:x:y:z]. On Q22 it either
    swaps the two rulings or acts on each factor by a 2x2 matrix that is scalar
    or trace-zero.
    """

    surface: QuadricSurface
    signs: Optional[Tuple[int, int, int, int]] = None
    swap: bool = False
    factors: Optional[Tuple[Matrix, Matrix]] = None

    def __post_init__(self):
        object.__setattr__(self, "surface", QuadricSurface(self.surface))
        if self.surface == QuadricSurface.Q31:
            if self.signs is None or self.swap or self.factors is not None:
                raise InvalidAction("an involution of Q31 is given by a sign pattern")
            signs = tuple(int(s) for s in self.signs)
            if len(signs) != 4 or any(s not in (1, -1) for s in signs):
                raise InvalidAction(f"sign pattern must have four entries +-1, got {self.signs}")
            if len(set(signs)) == 1:
                raise InvalidAction("constant sign pattern acts as the identity")
            object.__setattr__(self, "signs", signs)
            return
        if self.signs is not None:
            raise InvalidAction("sign patterns apply to Q31 only")
        if self.swap:
            if self.factors is not None:
                raise InvalidAction("factor swap takes no matrices")
            return
        if self.factors is None or len(self.factors) != 2:
            raise InvalidAction("a fibrewise involution of Q22 needs two factor matrices")
        factors = tuple(_matrix(m) for m in self.factors)
        for m in factors:
            if not _is_scalar(m) and (m[0] + m[3] != 0 or m[0] * m[3] - m[1] * m[2] == 0):
                raise InvalidAction(f"factor {m} is neither the identity nor an involution")
        if all(_is_scalar(m) for m in factors):
            raise InvalidAction("both factors act as the identity")
        object.__setattr__(self, "factors", factors)

    @classmethod
    def sign_pattern(cls, *signs: int) -> "QuadricInvolutionData":
        return cls(QuadricSurface.Q31, signs=tuple(signs))

    @classmethod
    def factor_swap(cls) -> "QuadricInvolutionData":
        return cls(QuadricSurface.Q22, swap=True)

    @classmethod
    def fibrewise(cls, first: Sequence, second: Sequence) -> "QuadricInvolutionData":
        return cls(QuadricSurface.Q22, factors=(_matrix(first), _matrix(second)))

    def __str__(self) -> str:
        if self.signs is not None:
            return "Q31 " + ",".join("+" if s > 0 else "-" for s in self.signs)
        if self.swap:
            return "Q22 swap"
        return "Q22 " + "; ".join(" ".join(str(e) for e in m) for m in self.factors)


def real_fixed_locus(q: QuadricInvolutionData) -> str:
    """Topological description of the real fixed locus."""
    if q.surface == QuadricSurface.Q31:
        parts = []
        for eigen in (1, -1):
            coeffs = [c for c, s in zip(_Q31_FORM, q.signs) if s == eigen]
            indefinite = len(set(coeffs)) == 2
            if len(coeffs) == 2 and indefinite:
                parts.append("2 points")
            elif len(coeffs) == 3 and indefinite:
                parts.append("S^1")
        return " u ".join(parts) if parts else "empty"
    if q.swap:
        return "S^1"
    first, second = q.factors
    if not (_factor_fixes_real_point(first) and _factor_fixes_real_point(second)):
        return "empty"
    if _is_scalar(first) or _is_scalar(second):
        return "2 x S^1"
    return "4 points"


@dataclass(frozen=True)
class QuadricClassification:
    involution_class: InvolutionClass
    representative: QuadricRepresentative
    real_fixed_locus: str


def classify_quadric(q: QuadricInvolutionData) -> QuadricClassification:
    """Linearizable iff a real point is fixed; otherwise one of the two non-linearizable pairs."""
    locus = real_fixed_locus(q)
    if locus != "empty":
        return QuadricClassification(InvolutionClass(ClassKind.L), QuadricRepresentative.LINEAR, locus)
    if q.surface == QuadricSurface.Q31:
        return QuadricClassification(InvolutionClass(ClassKind.Q), QuadricRepresentative.ANTIPODAL, locus)
    return QuadricClassification(InvolutionClass(ClassKind.Q), QuadricRepresentative.ROTATION, locus)


def quadric_conjugate(q1: QuadricInvolutionData, q2: QuadricInvolutionData) -> ConjugacyVerdict:
    c1, c2 = classify_quadric(q1), classify_quadric(q2)
    classes = (c1.involution_class.name, c2.involution_class.name)
    if c1.involution_class != c2.involution_class:
        return ConjugacyVerdict(Verdict.NOT_CONJUGATE, reason="class", classes=classes)
    if c1.representative == c2.representative:
        return ConjugacyVerdict(Verdict.CONJUGATE, reason=c1.representative.value, classes=classes)
    return ConjugacyVerdict(
        Verdict.NOT_CONJUGATE,
        reason=f"{c1.representative.value} vs {c2.representative.value}",
        classes=classes,
    )


@dataclass(frozen=True)
class QuadricTableRow:
    surface: QuadricSurface
    action: str
    fixed_locus: str
    real_fixed_locus: str
    representatives: Tuple[QuadricInvolutionData, ...]


QUADRIC_TABLE: List[QuadricTableRow] = [
    QuadricTableRow(
        QuadricSurface.Q31, "[w:x:y:z] -> [w:-x:-y:z]", "4 points", "2 points",
        (QuadricInvolutionData.sign_pattern(1, -1, -1, 1),),
    ),
    QuadricTableRow(
        QuadricSurface.Q31, "[w:x:y:z] -> [w:-x:y:z]", "y^2 + z^2 = w^2", "S^1",
        (QuadricInvolutionData.sign_pattern(1, -1, 1, 1),),
    ),
    QuadricTableRow(
        QuadricSurface.Q31, "[w:x:y:z] -> [-w:x:y:z]", "x^2 + y^2 + z^2 = 0", "empty",
        (QuadricInvolutionData.sign_pattern(-1, 1, 1, 1),),
    ),
    QuadricTableRow(
        QuadricSurface.Q22, "switching the factors", "the diagonal", "S^1",
        (QuadricInvolutionData.factor_swap(),),
    ),
    QuadricTableRow(
        QuadricSurface.Q22, "fibrewise", "4 points", "0, 2 or 4 points",
        (
            QuadricInvolutionData.fibrewise(ALPHA, ALPHA),
            QuadricInvolutionData.fibrewise(ALPHA, ALPHA_PRIME),
            QuadricInvolutionData.fibrewise(ALPHA_PRIME, ALPHA_PRIME),
        ),
    ),
]


# === TREPALIN INVOLUTIONS ===

class RealType(str, Enum):
    SPHERE = "S^2"
    TORUS = "S^1 x S^1"


@dataclass(frozen=True)
class TrepalinData:
    """Double cover w^2 + (t - lambda1)(t - lambda2) = 0 of x^2 + y^2 + prod(t - eps_i) = 0.

    The twist counts how many branch fibres are singular fibres of the conic bundle.
    """

    twist: int
    epsilons: Tuple[Fraction, ...]
    lambda1: Fraction
    lambda2: Fraction

    def __post_init__(self):
        eps = tuple(Fraction(e) for e in self.epsilons)
        l1, l2 = Fraction(self.lambda1), Fraction(self.lambda2)
        object.__setattr__(self, "epsilons", eps)
        object.__setattr__(self, "lambda1", l1)
        object.__setattr__(self, "lambda2", l2)
        if self.twist not in (0, 1, 2):
            raise InvalidParameters(f"twist must be 0, 1 or 2, got {self.twist}")
        if not eps or len(eps) % 2 or any(x >= y for x, y in zip(eps, eps[1:])):
            raise InvalidParameters("epsilons must be a strictly increasing list of even length")
        r = len(eps) // 2
        if self.twist == 0:
            ok = l1 < l2 and l1 != eps[0] and eps[0] < l2 < eps[1]
        elif r < 2:
            ok = False
        elif self.twist == 1:
            ok = (l2 == eps[1] and l1 < eps[1] and l1 != eps[0]) or (l2 == eps[2] and eps[0] < l1 < eps[1])
        else:
            ok = l1 == eps[0] and l2 in (eps[1], eps[2])
        if not ok:
            raise InvalidParameters(
                f"branch points ({l1}, {l2}) are not admissible for a {self.twist}-twisted cover "
                f"with epsilons {[str(e) for e in eps]}"
            )

    @property
    def r(self) -> int:
        return len(self.epsilons) // 2

    @property
    def singular_fibres(self) -> int:
        return 4 * self.r - 2 * self.twist

    @property
    def k2(self) -> int:
        return 8 - self.singular_fibres

    def to_dict(self) -> dict:
        return {
            "twist": self.twist,
            "epsilons": [str(e) for e in self.epsilons],
            "lambda1": str(self.lambda1),
            "lambda2": str(self.lambda2),
        }


def trepalin_class(d: TrepalinData) -> Tuple[InvolutionClass, int]:
    """Class and K^2 of the regularised surface."""
    if d.twist == 0:
        cls = InvolutionClass(ClassKind.T, d.r)
    elif d.twist == 1:
        cls = InvolutionClass(ClassKind.T_PRIME, d.r - 1)
    else:
        cls = InvolutionClass(ClassKind.T_DOUBLE, d.r - 1)
    return cls, d.k2


def trepalin_real_type(d: TrepalinData) -> RealType:
    eps = d.epsilons
    if d.twist == 0:
        return RealType.TORUS if eps[0] < d.lambda1 else RealType.SPHERE
    if d.twist == 1:
        if d.lambda2 == eps[1] and eps[0] < d.lambda1:
            return RealType.TORUS
        return RealType.SPHERE
    return RealType.TORUS if d.lambda2 == eps[1] else RealType.SPHERE


def _trepalin_decidable(d: TrepalinData) -> bool:
    # T_4 and T_4'' are open
    return not ((d.twist == 0 and d.r == 1) or (d.twist == 2 and d.r == 2))


def trepalin_conjugate(d1: TrepalinData, d2: TrepalinData) -> ConjugacyVerdict:
    """Conjugate iff some real Moebius map carries eps onto eps' and {lambda} onto {lambda'}."""
    c1, c2 = trepalin_class(d1)[0], trepalin_class(d2)[0]
    classes = (c1.name, c2.name)
    if c1 != c2:
        return ConjugacyVerdict(Verdict.NOT_CONJUGATE, reason="class", classes=classes)
    if not _trepalin_decidable(d1):
        citation = CITATION_T4 if d1.twist == 0 else CITATION_OPEN_CLASSES
        return _unknown(citation, classes=classes)
    src = PointConfig.from_points(d1.epsilons)
    dst = PointConfig.from_points(d2.epsilons)
    maps = config_maps(src, dst)
    logger.debug("%d maps between branch configurations", len(maps))
    target = {d2.lambda1, d2.lambda2}
    for m in maps:
        if {m.apply(d1.lambda1), m.apply(d1.lambda2)} == target:
            return ConjugacyVerdict(Verdict.CONJUGATE, reason="configuration", witness=str(m), classes=classes)
    reason = "singular fibres" if not maps else "branch fibres"
    return ConjugacyVerdict(Verdict.NOT_CONJUGATE, reason=reason, classes=classes)


# === MODELS ===

class ModelKind(str, Enum):
    LINEAR = "linear"
    QUADRIC = "quadric"
    TREPALIN = "trepalin"
    CONIC_BUNDLE = "conic_bundle"
    DEJONQUIERES = "dejonquieres"
    BERTINI = "bertini"
    GEISER = "geiser"
    KOWALEVSKAYA = "kowalevskaya"


@dataclass(frozen=True)
class DelPezzoLabel:
    """Bertini or Geiser involution known by its branch curve only."""

    topology: str
    equation: str = ""

    def normalized_equation(self) -> str:
        return "".join(self.equation.split())

    def to_dict(self) -> dict:
        return {"topology": self.topology, "equation": self.equation}


_PAYLOAD_TYPES = {
    ModelKind.LINEAR: type(None),
    ModelKind.QUADRIC: QuadricInvolutionData,
    ModelKind.TREPALIN: TrepalinData,
    ModelKind.CONIC_BUNDLE: ConicBundleModel,
    ModelKind.DEJONQUIERES: BinaryForm,
    ModelKind.BERTINI: DelPezzoLabel,
    ModelKind.GEISER: DelPezzoLabel,
    ModelKind.KOWALEVSKAYA: KowalevskayaQuartic,
}


@dataclass(frozen=True)
class InvolutionModel:
    kind: ModelKind
    data: Any = None

    def __post_init__(self):
        object.__setattr__(self, "kind", ModelKind(self.kind))
        expected = _PAYLOAD_TYPES[self.kind]
        if not isinstance(self.data, expected):
            raise InvalidParameters(f"{self.kind.value} model needs {expected.__name__} data")
        if self.kind == ModelKind.CONIC_BUNDLE and not self.data.validated:
            object.__setattr__(self, "data", validate_model(*self.data.coefficients))
        if self.kind == ModelKind.BERTINI and self.data.topology not in BERTINI_TABLE:
            raise InvalidParameters(f"unknown Bertini branch topology {self.data.topology!r}")
        if self.kind == ModelKind.GEISER and self.data.topology not in GEISER_TABLE:
            raise InvalidParameters(f"unknown Geiser branch topology {self.data.topology!r}")

    @classmethod
    def linear(cls) -> "InvolutionModel":
        return cls(ModelKind.LINEAR)

    @classmethod
    def quadric(cls, q: QuadricInvolutionData) -> "InvolutionModel":
        return cls(ModelKind.QUADRIC, q)

    @classmethod
    def trepalin(cls, d: TrepalinData) -> "InvolutionModel":
        return cls(ModelKind.TREPALIN, d)

    @classmethod
    def conic_bundle(cls, m: ConicBundleModel) -> "InvolutionModel":
        return cls(ModelKind.CONIC_BUNDLE, m)

    @classmethod
    def dejonquieres(cls, f: BinaryForm) -> "InvolutionModel":
        return cls(ModelKind.DEJONQUIERES, f)

    @classmethod
    def bertini(cls, topology: str, equation: str = "") -> "InvolutionModel":
        return cls(ModelKind.BERTINI, DelPezzoLabel(topology, equation))

    @classmethod
    def geiser(cls, topology: str, equation: str = "") -> "InvolutionModel":
        return cls(ModelKind.GEISER, DelPezzoLabel(topology, equation))

    @classmethod
    def kowalevskaya(cls, q: KowalevskayaQuartic) -> "InvolutionModel":
        return cls(ModelKind.KOWALEVSKAYA, q)

    def __str__(self) -> str:
        if self.data is None:
            return self.kind.value
        return f"{self.kind.value}: {self.data}"


# === CLASSIFICATION ===

def _conic_bundle_class(m: ConicBundleModel) -> InvolutionClass:
    g = fixed_curve_genus(m)
    if g is None:
        # conic bundle with two singular fibres and no fixed curve
        return InvolutionClass(ClassKind.T, 1)
    arcs = real_image_arcs(m)
    if arcs.count != 1:
        raise NotRRational(f"real image has {arcs.count} arcs")
    special = len(normal_form_invariants(m).special_points)
    return InvolutionClass(special_fibre_twist(special), g)


def classify_model(m: InvolutionModel) -> InvolutionClass:
    if m.kind == ModelKind.LINEAR:
        return InvolutionClass(ClassKind.L)
    if m.kind == ModelKind.QUADRIC:
        return classify_quadric(m.data).involution_class
    if m.kind == ModelKind.TREPALIN:
        return trepalin_class(m.data)[0]
    if m.kind == ModelKind.CONIC_BUNDLE:
        return _conic_bundle_class(m.data)
    if m.kind == ModelKind.DEJONQUIERES:
        return InvolutionClass(ClassKind.DJ, m.data.hom_degree // 2 - 1)
    if m.kind == ModelKind.BERTINI:
        return InvolutionClass(ClassKind.B)
    if m.kind == ModelKind.GEISER:
        return InvolutionClass(ClassKind.G)
    return InvolutionClass(ClassKind.K)


# === CONJUGACY ===

def _base_change_verdict(m1: ConicBundleModel, m2: ConicBundleModel) -> BaseConjugacyVerdict:
    try:
        n1 = m1 if is_normalized(m1) else normalize(m1)
        n2 = m2 if is_normalized(m2) else normalize(m2)
    except IrrationalSplitRequired as e:
        logger.info("no normal form over Q (%s); comparing normal form invariants", e.message)
        return conjugate_invariants(m1, m2)
    return conjugate_mod_pgl2(n1, n2)


def _iskovskikh_conjugate(m1: ConicBundleModel, m2: ConicBundleModel, cls: InvolutionClass, classes) -> ConjugacyVerdict:
    verdict = _base_change_verdict(m1, m2)
    details = verdict.to_dict()
    if cls.kind != ClassKind.I_DOUBLE and cls.n == 1:
        # I_1 and I_1' stay open whatever the base change says
        return _unknown(CITATION_OPEN_CLASSES, reason=verdict.failing, fibrewise=details, classes=classes)
    if verdict.conjugate:
        return ConjugacyVerdict(
            Verdict.CONJUGATE, reason="base change", witness=details["witness"], fibrewise=details, classes=classes
        )
    return ConjugacyVerdict(Verdict.NOT_CONJUGATE, reason=verdict.failing, fibrewise=details, classes=classes)


def _kowalevskaya_witness(q1: KowalevskayaQuartic, q2: KowalevskayaQuartic) -> Optional[Moebius]:
    """Linear change of (x, z) with h1 o M = k^4 h2 and q1 o M = k^2 q2."""
    src = PointConfig.from_polynomial(q2.h, 4)
    dst = PointConfig.from_polynomial(q1.h, 4)
    for m in config_maps(src, dst):
        c_h = pullback_ratio(q2.h, q1.h, m, 4)
        c_q = pullback_ratio(q2.q, q1.q, m, 2)
        if c_h is not None and c_q is not None and c_q > 0 and c_h == c_q * c_q:
            return m
    return None


def _del_pezzo_conjugate(m1: InvolutionModel, m2: InvolutionModel, classes) -> ConjugacyVerdict:
    if m1.kind == ModelKind.KOWALEVSKAYA:
        p1, p2 = kowalevskaya_oval_profile(m1.data), kowalevskaya_oval_profile(m2.data)
        if p1 != p2:
            return ConjugacyVerdict(Verdict.NOT_CONJUGATE, reason="real branch curve", classes=classes)
        witness = _kowalevskaya_witness(m1.data, m2.data)
        if witness is not None:
            return ConjugacyVerdict(Verdict.CONJUGATE, reason="equivariant isomorphism", witness=str(witness), classes=classes)
        return _unknown(CITATION_DEL_PEZZO, classes=classes)
    if m1.data.topology != m2.data.topology:
        return ConjugacyVerdict(Verdict.NOT_CONJUGATE, reason="real branch curve", classes=classes)
    if m1.data.equation and m1.data.normalized_equation() == m2.data.normalized_equation():
        return ConjugacyVerdict(Verdict.CONJUGATE, reason="equal branch curves", witness="identity", classes=classes)
    return _unknown(CITATION_DEL_PEZZO, classes=classes)


def decide_conjugacy(m1: InvolutionModel, m2: InvolutionModel) -> ConjugacyVerdict:
    if m1.kind == m2.kind == ModelKind.CONIC_BUNDLE:
        n1, n2 = real_image_arcs(m1.data).count, real_image_arcs(m2.data).count
        if n1 != n2:
            # the number of arcs is a birational invariant of the real locus
            return ConjugacyVerdict(Verdict.NOT_CONJUGATE, reason=f"arcs: {n1} vs {n2}")
    c1, c2 = classify_model(m1), classify_model(m2)
    classes = (c1.name, c2.name)
    if c1 != c2:
        dj1_i1 = {InvolutionClass(ClassKind.DJ, 1), InvolutionClass(ClassKind.I, 1)}
        if {c1, c2} == dj1_i1:
            return _unknown(CITATION_DJ1_I1, classes=classes)
        return ConjugacyVerdict(Verdict.NOT_CONJUGATE, reason=f"class {c1.name} vs {c2.name}", classes=classes)

    kind = c1.kind
    if kind == ClassKind.L:
        return ConjugacyVerdict(Verdict.CONJUGATE, reason="linearizable", classes=classes)
    if kind == ClassKind.Q:
        return quadric_conjugate(m1.data, m2.data)
    if kind in (ClassKind.T, ClassKind.T_PRIME, ClassKind.T_DOUBLE):
        if m1.kind == ModelKind.TREPALIN and m2.kind == ModelKind.TREPALIN:
            return trepalin_conjugate(m1.data, m2.data)
        # only T_4 arises from a conic bundle model
        return _unknown(CITATION_T4, classes=classes)
    if kind == ClassKind.DJ:
        if c1.n == 1:
            return _unknown(CITATION_OPEN_CLASSES, classes=classes)
        verdict = dejonquieres_conjugate(m1.data, m2.data)
        reason = "fixed curve" if verdict == Verdict.CONJUGATE else "fixed curves not isomorphic"
        return ConjugacyVerdict(verdict, reason=reason, classes=classes)
    if kind in (ClassKind.I, ClassKind.I_PRIME, ClassKind.I_DOUBLE):
        return _iskovskikh_conjugate(m1.data, m2.data, c1, classes)
    return _del_pezzo_conjugate(m1, m2, classes)


def conjugacy_matrix(models: Sequence[InvolutionModel]) -> List[List[ConjugacyVerdict]]:
    """Pairwise verdicts in input order."""
    return [[decide_conjugacy(a, b) for b in models] for a in models]


# === FAMILIES ===

def _quadratic(value) -> RatPoly:
    q = as_poly(value)
    if q.degree != 2 or q.coeff(1) ** 2 - 4 * q.coeff(0) * q.coeff(2) >= 0:
        raise InvalidParameters(f"{q} is not a quadratic with negative discriminant")
    return q


def _family_member(f: RatPoly, a: Fraction, b: Fraction) -> ConicBundleModel:
    return validate_model(RatPoly([1]), RatPoly([0]), f, -RatPoly.from_roots([a, b]))


def _offset(rng: random.Random, height: int) -> Fraction:
    return Fraction(rng.randint(1, height), rng.randint(1, height))


def _sample_pairs(
    stabilizer: List[Moebius],
    base: Tuple[Fraction, Fraction],
    left: Fraction,
    right: Fraction,
    count: int,
    seed: Optional[int],
    inner: bool = False,
) -> List[Tuple[Fraction, Fraction]]:
    """Base pair followed by sampled pairs no stabilizer element relates to an earlier one.

    Pairs are drawn as (left - x, right + y), or with inner=True as
    (left - x, a point of (left, right)).
    """
    rng = random.Random(settings.DEFAULT_SEED if seed is None else seed)
    height = settings.FAMILY_SAMPLE_HEIGHT
    pairs = [base]
    orbits = [{frozenset(m.apply(p) for p in base) for m in stabilizer}]
    attempts = 0
    while len(pairs) < count:
        attempts += 1
        if attempts > settings.FAMILY_MAX_ATTEMPTS:
            raise InvalidParameters(f"found only {len(pairs)} of {count} generic parameter pairs")
        a = left - _offset(rng, height)
        if inner:
            b = left + (right - left) / (1 + _offset(rng, height))
        else:
            b = right + _offset(rng, height)
        if frozenset((a, b)) in set().union(*orbits):
            continue
        pairs.append((a, b))
        orbits.append({frozenset(m.apply(p) for p in (a, b)) for m in stabilizer})
    logger.debug("sampled %d parameter pairs in %d attempts", count, attempts)
    return pairs


def corollary_family(
    r: int,
    s: int,
    epsilons: Sequence,
    quadratics: Sequence,
    a,
    b,
    count: int,
    seed: Optional[int] = None,
) -> List[ConicBundleModel]:
    """Pairwise non-conjugate models x^2 + f y^2 = (t - a_i)(t - b_i) z^2 with one fixed curve w^2 = -4f.

    f = prod(t - eps_i) * prod(q_j); all members lie in I''_{r+s-1}.
    """
    eps = [Fraction(e) for e in epsilons]
    quads = [_quadratic(q) for q in quadratics]
    a, b = Fraction(a), Fraction(b)
    if r < 2 or s < 0 or len(eps) != 2 * r or len(quads) != s:
        raise InvalidParameters(f"need r >= 2 with 2r epsilons and s quadratics, got r={r}, s={s}")
    if any(x >= y for x, y in zip(eps, eps[1:])):
        raise InvalidParameters("epsilons must be strictly increasing")
    if not a < eps[0] or not b > eps[-1]:
        raise InvalidParameters(f"need a < {eps[0]} and b > {eps[-1]}")
    if count < 1:
        raise InvalidParameters("count must be positive")
    f = RatPoly.from_roots(eps)
    for q in quads:
        f = f * q
    sigma = PointConfig.from_polynomial(f)
    stabilizer = config_maps(sigma, sigma)
    pairs = _sample_pairs(stabilizer, (a, b), eps[0], eps[-1], count, seed)
    return [_family_member(f, x, y) for x, y in pairs]


def trepalin_family(epsilons: Sequence, a, b, count: int, seed: Optional[int] = None) -> List[TrepalinData]:
    """Pairwise non-conjugate 0-twisted Trepalin involutions branched over t = a_i, b_i.

    Parameters satisfy a_i < eps_1 < b_i < eps_2; at least four epsilons are needed.
    """
    eps = [Fraction(e) for e in epsilons]
    if len(eps) < 4:
        raise InvalidParameters("a family of Trepalin involutions needs r >= 2")
    base = TrepalinData(0, tuple(eps), a, b)
    if not base.lambda1 < eps[0]:
        raise InvalidParameters(f"need a < {eps[0]}")
    if count < 1:
        raise InvalidParameters("count must be positive")
    sigma = PointConfig.from_points(eps)
    stabilizer = config_maps(sigma, sigma)
    pairs = _sample_pairs(stabilizer, (base.lambda1, base.lambda2), eps[0], eps[1], count, seed, inner=True)
    return [TrepalinData(0, tuple(eps), x, y) for x, y in pairs]


# === REPRESENTATIVES ===

def twelve_class_representatives() -> Dict[str, InvolutionModel]:
    """One model per family at small parameters, keyed by class name."""
    P = RatPoly.from_roots
    t = RatPoly.variable()
    eps = (0, 1, 2, 3)
    models = [
        InvolutionModel.linear(),
        InvolutionModel.quadric(QuadricInvolutionData.sign_pattern(-1, 1, 1, 1)),
        InvolutionModel.trepalin(TrepalinData(0, (0, 1), -1, Fraction(1, 2))),
        InvolutionModel.trepalin(TrepalinData(1, eps, -1, 1)),
        InvolutionModel.trepalin(TrepalinData(2, eps, 0, 2)),
        InvolutionModel.bertini("big circle"),
        InvolutionModel.geiser("1 oval"),
        InvolutionModel.kowalevskaya(KowalevskayaQuartic(1, 0, 1, 2, -1)),
        InvolutionModel.dejonquieres(BinaryForm(P([-1, 1, -2, 2]), 4)),
        # x^2 + (t^4 - 1) y^2 = -z^2
        InvolutionModel.conic_bundle(validate_model(RatPoly([1]), RatPoly([0]), t ** 4 - 1, RatPoly([-1]))),
        InvolutionModel.conic_bundle(
            validate_model(RatPoly([1]), RatPoly([0]), P([0, 2]) * (t * t + 3), -P([1, 5]))
        ),
        InvolutionModel.conic_bundle(validate_model(RatPoly([1]), RatPoly([0]), P([1, 2, 3, 4]), -P([0, 5]))),
    ]
    return {classify_model(m).name: m for m in models}
