"""Report schemas shared by the CLI (--json) and the HTTP service."""

from pydantic import BaseModel, Field
from typing import Optional, List, Dict, Any
from enum import Enum


class Command(str, Enum):
    """Report command enumeration."""
    VALIDATE = "validate"
    INVARIANTS = "invariants"
    CLASSIFY = "classify"
    NORMALIZE = "normalize"
    CONJUGATE = "conjugate"
    EQUIV_FORMS = "equiv-forms"
    CURVE = "curve"
    FAMILY = "family"
    SELFCHECK = "selfcheck"
    MATRIX = "matrix"


# === PAYLOADS ===

class ConicBundleReport(BaseModel):
    """Validation and invariants of a conic bundle model."""
    valid: bool
    errors: List[str] = []
    model: Optional[Dict[str, str]] = None
    delta: Optional[str] = None
    genus: Optional[int] = None
    special_fibres: Optional[int] = None
    k2: Optional[int] = None
    arcs: List[str] = []
    r_rational: Optional[bool] = None
    normalized: Optional[bool] = None


class ClassificationReport(BaseModel):
    """Class of an involution model."""
    model_kind: str
    name: str
    label: str
    parameter: Optional[int] = None
    genus: Optional[int] = None


class ConjugacyReport(BaseModel):
    """Verdict for a pair of models."""
    verdict: str
    reason: Optional[str] = None
    classes: List[str] = []
    witness: Optional[str] = None
    citation: Optional[str] = None
    fibrewise: Optional[Dict[str, Any]] = None


class FormEquivalenceReport(BaseModel):
    """Binary quadratic form equivalence over R(t)."""
    left: List[str]
    right: List[str]
    mode: str
    criterion: Optional[bool] = None
    oracle: Optional[bool] = None
    agree: bool
    equivalent: bool


class CurveReport(BaseModel):
    """Real curve computation."""
    operation: str
    curves: List[str]
    components: Optional[int] = None
    equivalent: Optional[bool] = None
    gaussian: Optional[bool] = None
    ovals: Optional[int] = None
    nested: Optional[bool] = None
    topology: Optional[str] = None


class FamilyReport(BaseModel):
    """Generated family of pairwise non-conjugate models."""
    family: str
    seed: int
    members: List[Dict[str, Any]]
    classes: List[str]
    components: List[int] = []
    pairwise_not_conjugate: bool


class SelfCheckReport(BaseModel):
    """Decider differential self-check."""
    samples: int
    seed: int
    paired_fraction: float = 0.0  # share of quadruples drawn from the factor pool
    agreements: int
    equivalent: int
    mismatches: List[List[str]] = []


class MatrixReport(BaseModel):
    """Pairwise verdict matrix over a list of model files."""
    files: List[str]
    classes: List[str]
    verdicts: List[List[str]]


# === REPORT ===

class Report(BaseModel):
    """Single document emitted per invocation."""
    command: str
    verdicts: Dict[str, str] = {}
    invariants: Dict[str, Any] = {}
    witnesses: Dict[str, Any] = {}
    citations: List[str] = []
    timing_ms: Optional[int] = None
    conic_bundle: Optional[ConicBundleReport] = None
    classification: Optional[ClassificationReport] = None
    conjugacy: Optional[ConjugacyReport] = None
    forms: Optional[FormEquivalenceReport] = None
    curve: Optional[CurveReport] = None
    family: Optional[FamilyReport] = None
    selfcheck: Optional[SelfCheckReport] = None
    matrix: Optional[MatrixReport] = None
    exit_code: int = Field(0, exclude=True)
