"""Report and request schemas."""

from .reports import (
    Report,
    ConicBundleReport,
    ClassificationReport,
    ConjugacyReport,
    FormEquivalenceReport,
    CurveReport,
    FamilyReport,
)

__all__ = [
    "Report",
    "ConicBundleReport",
    "ClassificationReport",
    "ConjugacyReport",
    "FormEquivalenceReport",
    "CurveReport",
    "FamilyReport",
]
