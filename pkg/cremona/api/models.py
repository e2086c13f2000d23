"""FastAPI endpoints for model stanzas: validation, invariants, classification, normalization, conjugacy."""

import logging

from fastapi import APIRouter, HTTPException

from cremona.core.errors import CremonaError
from cremona.models.reports import Report
from cremona.models.requests import ConjugateRequest, ModelRequest
from cremona.services.model_files import format_conic_bundle, parse_stanza
from cremona.services.reporting import (
    classify_report,
    conjugate_report,
    execute,
    invariants_report,
    normalize_report,
    validate_report,
)

logger = logging.getLogger(__name__)

router = APIRouter()


def as_http_error(e: Exception) -> HTTPException:
    if isinstance(e, CremonaError):
        return HTTPException(status_code=400, detail=e.to_dict())
    logger.exception("unexpected error")
    return HTTPException(status_code=500, detail={"code": "internal_error", "message": str(e)})


# === MODEL ENDPOINTS ===

@router.post("/validate", response_model=Report, response_model_exclude_none=True)
async def validate(request: ModelRequest):
    """Validate a model stanza; invalid models are reported, not rejected."""
    try:
        return execute(validate_report, parse_stanza(request.text), timing=True)
    except Exception as e:
        raise as_http_error(e)


@router.post("/invariants", response_model=Report, response_model_exclude_none=True)
async def invariants(request: ModelRequest):
    try:
        return execute(invariants_report, parse_stanza(request.text), timing=True)
    except Exception as e:
        raise as_http_error(e)


@router.post("/classify", response_model=Report, response_model_exclude_none=True)
async def classify(request: ModelRequest):
    try:
        return execute(classify_report, parse_stanza(request.text), timing=True)
    except Exception as e:
        raise as_http_error(e)


@router.post("/normalize", response_model=Report, response_model_exclude_none=True)
async def normalize(request: ModelRequest):
    """Normal form of a conic bundle stanza; the stanza text is returned as a witness."""
    try:
        report, model = normalize_report(parse_stanza(request.text))
        report.witnesses["stanza"] = format_conic_bundle(model)
        return report
    except Exception as e:
        raise as_http_error(e)


@router.post("/conjugate", response_model=Report, response_model_exclude_none=True)
async def conjugate(request: ConjugateRequest):
    try:
        return execute(
            conjugate_report,
            parse_stanza(request.left),
            parse_stanza(request.right),
            fix_base=request.fix_base,
            timing=True,
        )
    except Exception as e:
        raise as_http_error(e)
