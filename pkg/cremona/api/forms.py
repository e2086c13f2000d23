"""FastAPI endpoints for quadratic forms, real curves and families."""

from fastapi import APIRouter

from cremona.api.models import as_http_error
from cremona.core.errors import InvalidParameters
from cremona.models.reports import Report
from cremona.models.requests import CurveRequest, FamilyRequest, FormEquivalenceRequest
from cremona.services.polytext import parse_poly, parse_rational
from cremona.services.reporting import (
    corollary_family_report,
    curve_components_report,
    curve_gaussian_report,
    curve_iso_report,
    equiv_forms_report,
    execute,
)

router = APIRouter()


@router.post("/forms/equiv", response_model=Report, response_model_exclude_none=True)
async def equiv_forms(request: FormEquivalenceRequest):
    """Equivalence of binary forms over R(t); mode "both" also reports decider agreement."""
    try:
        return execute(
            equiv_forms_report, request.left, request.right, request.mode, request.criterion_mode, timing=True
        )
    except Exception as e:
        raise as_http_error(e)


# === CURVES ===

@router.post("/curves/components", response_model=Report, response_model_exclude_none=True)
async def curve_components(request: CurveRequest):
    try:
        return execute(curve_components_report, request.forms[0], request.sign, timing=True)
    except Exception as e:
        raise as_http_error(e)


@router.post("/curves/iso", response_model=Report, response_model_exclude_none=True)
async def curve_iso(request: CurveRequest):
    try:
        if len(request.forms) != 2:
            raise InvalidParameters("iso needs two forms")
        return execute(curve_iso_report, request.forms[0], request.forms[1], timing=True)
    except Exception as e:
        raise as_http_error(e)


@router.post("/curves/gaussian", response_model=Report, response_model_exclude_none=True)
async def curve_gaussian(request: CurveRequest):
    try:
        return execute(curve_gaussian_report, request.forms[0], timing=True)
    except Exception as e:
        raise as_http_error(e)


# === FAMILIES ===

@router.post("/family/corollary", response_model=Report, response_model_exclude_none=True)
async def family_corollary(request: FamilyRequest):
    try:
        return execute(
            corollary_family_report,
            request.r,
            request.s,
            [parse_rational(e) for e in request.eps],
            [parse_poly(q) for q in request.quadratics],
            parse_rational(request.a),
            parse_rational(request.b),
            request.count,
            request.seed,
            timing=True,
        )
    except Exception as e:
        raise as_http_error(e)
