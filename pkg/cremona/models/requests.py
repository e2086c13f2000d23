"""Request schemas for the HTTP service."""

from pydantic import BaseModel, Field
from typing import Optional, List

from cremona.services.wittforms import CriterionMode, Decider


class ModelRequest(BaseModel):
    """A single model stanza."""
    text: str = Field(..., min_length=1)


class ConjugateRequest(BaseModel):
    """Two model stanzas."""
    left: str = Field(..., min_length=1)
    right: str = Field(..., min_length=1)
    fix_base: bool = False


class FormEquivalenceRequest(BaseModel):
    """Form literals such as ``1;-1`` and ``t;-t``."""
    left: str = Field(..., min_length=1)
    right: str = Field(..., min_length=1)
    mode: Decider = Decider.CRITERION
    criterion_mode: CriterionMode = CriterionMode.ALL_ROOTS


class CurveRequest(BaseModel):
    """Binary form literals ``poly deg=N``; ``sign`` selects w^2 = +-f."""
    forms: List[str] = Field(..., min_length=1, max_length=2)
    sign: int = 1


class FamilyRequest(BaseModel):
    """Parameters of the non-conjugate conic bundle family."""
    r: int = Field(..., ge=2)
    s: int = Field(0, ge=0)
    eps: List[str]
    quadratics: List[str] = []
    a: str
    b: str
    count: int = Field(..., ge=1, le=50)
    seed: Optional[int] = None
