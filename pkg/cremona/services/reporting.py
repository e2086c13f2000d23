"""Report assembly and rendering.

Every command builds one Report; the CLI prints it as text or JSON and the
HTTP service returns it as is. Text is rendered from the same Report through
a jinja2 template.
"""

import logging
import time
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from jinja2 import DictLoader, Environment, StrictUndefined

from cremona.core.config import settings
from cremona.core.errors import InvalidParameters, IrrationalSplitRequired, ModelError, ParseError
from cremona.models.reports import (
    ClassificationReport,
    Command,
    ConicBundleReport,
    ConjugacyReport,
    CurveReport,
    FamilyReport,
    FormEquivalenceReport,
    MatrixReport,
    Report,
    SelfCheckReport,
)
from cremona.services.conicbundle import (
    ConicBundleModel,
    FibrewiseVerdict,
    Reparametrization,
    canonical_degree,
    fibrewise_conjugate,
    fibrewise_invariants,
    fixed_curve,
    fixed_curve_genus,
    is_normalized,
    normal_form_invariants,
    normalize,
    real_image_arcs,
    special_fibre_count,
)
from cremona.services.involutions import (
    ConjugacyVerdict,
    InvolutionModel,
    ModelKind,
    classify_model,
    classify_quadric,
    conjugacy_matrix,
    corollary_family,
    decide_conjugacy,
    trepalin_class,
    trepalin_family,
    trepalin_real_type,
)
from cremona.services.model_files import (
    HYPERELLIPTIC,
    ModelFile,
    load_conic_bundle,
    load_curve,
    load_involution,
    read_model_file,
)
from cremona.services.polytext import format_exact, parse_binary_form, parse_form
from cremona.services.realcurves import (
    BERTINI_TABLE,
    GEISER_TABLE,
    BinaryForm,
    KowalevskayaQuartic,
    Verdict,
    binary_form_projective_equiv,
    hyperelliptic_components,
    is_gaussian,
    kowalevskaya_oval_profile,
    kowalevskaya_surface_topology,
)
from cremona.services.wittforms import CriterionMode, Decider, decide_binary, decider_self_check

logger = logging.getLogger(__name__)

EXIT_INVALID = 3
EXIT_UNKNOWN = 4
EXIT_MISMATCH = 5

_TEMPLATES = {
    "report.txt": (
        "cremona {{ report.command }}\n"
        "{% for row in rows %}{{ '  ' * row.depth }}{{ row.text }}\n{% endfor %}"
    ),
}

_env = Environment(loader=DictLoader(_TEMPLATES), undefined=StrictUndefined, autoescape=False)


# === RENDERING ===

class _Row:
    __slots__ = ("depth", "text")

    def __init__(self, depth: int, text: str):
        self.depth = depth
        self.text = text


def _scalar(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, list):
        return ", ".join(_scalar(v) for v in value)
    return str(value)


def _outline(data: Dict[str, Any], depth: int = 0) -> Iterator[_Row]:
    for key, value in data.items():
        if isinstance(value, dict):
            if value:
                yield _Row(depth, f"{key}:")
                yield from _outline(value, depth + 1)
        elif isinstance(value, list):
            if not value:
                continue
            yield _Row(depth, f"{key}:")
            for item in value:
                if isinstance(item, dict):
                    yield _Row(depth + 1, "-")
                    yield from _outline(item, depth + 2)
                else:
                    yield _Row(depth + 1, f"- {_scalar(item)}")
        else:
            yield _Row(depth, f"{key}: {_scalar(value)}")


def render_text(report: Report) -> str:
    data = report.model_dump(mode="json", exclude_none=True)
    data.pop("command")
    return _env.get_template("report.txt").render(report=report, rows=list(_outline(data)))


def render_json(report: Report) -> str:
    return report.model_dump_json(indent=2, exclude_none=True) + "\n"


def execute(builder: Callable[..., Report], *args, timing: bool = False, **kwargs) -> Report:
    """Run a report builder; timing_ms is attached only on request."""
    start_time = time.time()
    report = builder(*args, **kwargs)
    if timing:
        report.timing_ms = int((time.time() - start_time) * 1000)
    return report


# === HELPERS ===

def _flag(value: bool) -> str:
    return "true" if value else "false"


def _reparametrization(moved: Optional[Reparametrization]) -> Dict[str, Any]:
    if moved is None:
        return {}
    return {"point": format_exact(moved.point), "substitution": str(moved.substitution)}


def conic_bundle_report(m: ConicBundleModel) -> ConicBundleReport:
    arcs = real_image_arcs(m)
    report = ConicBundleReport(
        valid=True,
        model=m.to_dict(),
        delta=str(m.delta),
        genus=fixed_curve_genus(m),
        arcs=arcs.to_list(),
        r_rational=arcs.count == 1,
        normalized=is_normalized(m),
    )
    if report.normalized:
        report.special_fibres = special_fibre_count(m)
        report.k2 = canonical_degree(m)
        return report
    special = len(normal_form_invariants(m).special_points)
    report.special_fibres = special
    report.k2 = 8 - m.delta.degree - special
    return report


def _binary_form_invariants(f: BinaryForm, sign: int = 1) -> Dict[str, Any]:
    data = {"form": str(f), "genus": f.genus, "components": hyperelliptic_components(f, sign)}
    if f.hom_degree >= 6:
        data["gaussian"] = is_gaussian(f)
    return data


def _kowalevskaya_invariants(q: KowalevskayaQuartic) -> Dict[str, Any]:
    profile = kowalevskaya_oval_profile(q)
    return {
        "parameters": q.parameters(),
        "ovals": profile.ovals,
        "nested": profile.nested,
        "topology": kowalevskaya_surface_topology(profile),
    }


def model_invariants(model: InvolutionModel) -> Dict[str, Any]:
    """Invariants of the non conic bundle model kinds."""
    data = model.data
    if model.kind == ModelKind.QUADRIC:
        quadric = classify_quadric(data)
        return {
            "surface": data.surface.value,
            "action": str(data),
            "real_fixed_locus": quadric.real_fixed_locus,
            "representative": quadric.representative.value,
        }
    if model.kind == ModelKind.TREPALIN:
        _, k2 = trepalin_class(data)
        return {
            **data.to_dict(),
            "singular_fibres": data.singular_fibres,
            "k2": k2,
            "real_type": trepalin_real_type(data).value,
        }
    if model.kind == ModelKind.DEJONQUIERES:
        return _binary_form_invariants(data)
    if model.kind == ModelKind.KOWALEVSKAYA:
        return _kowalevskaya_invariants(data)
    if model.kind in (ModelKind.BERTINI, ModelKind.GEISER):
        table = BERTINI_TABLE if model.kind == ModelKind.BERTINI else GEISER_TABLE
        return {**data.to_dict(), "real_loci": list(table[data.topology])}
    return {}


def _classification(model: InvolutionModel) -> ClassificationReport:
    cls = classify_model(model)
    return ClassificationReport(
        model_kind=model.kind.value,
        name=cls.name,
        label=cls.label,
        parameter=cls.n,
        genus=cls.genus,
    )


# === MODEL COMMANDS ===

def validate_report(mf: ModelFile, reparametrize: bool = True) -> Report:
    """Validity of a stanza; an invalid model gives exit code 3 instead of an error."""
    report = Report(command=Command.VALIDATE.value)
    try:
        if mf.kind == ModelKind.CONIC_BUNDLE.value:
            model, moved = load_conic_bundle(mf, reparametrize)
            report.conic_bundle = conic_bundle_report(model)
            report.witnesses = {"reparametrization": _reparametrization(moved)}
        elif mf.kind == HYPERELLIPTIC:
            load_curve(mf)
        else:
            load_involution(mf, reparametrize)
    except ModelError as e:
        errors = [f"{e.code}: {e.message}"]
        report.verdicts = {"valid": "false"}
        report.invariants = {"kind": mf.kind}
        report.witnesses = {"errors": errors}
        if mf.kind == ModelKind.CONIC_BUNDLE.value:
            report.conic_bundle = ConicBundleReport(valid=False, errors=errors)
        report.exit_code = EXIT_INVALID
        return report
    report.verdicts = {"valid": "true"}
    report.invariants = {"kind": mf.kind}
    return report


def invariants_report(mf: ModelFile, reparametrize: bool = True) -> Report:
    report = Report(command=Command.INVARIANTS.value)
    if mf.kind == HYPERELLIPTIC:
        form, sign = load_curve(mf)
        report.invariants = {**_binary_form_invariants(form, sign), "sign": sign}
        return report
    loaded = load_involution(mf, reparametrize)
    if loaded.model.kind == ModelKind.CONIC_BUNDLE:
        m = loaded.model.data
        normal_form = normal_form_invariants(m)
        report.conic_bundle = conic_bundle_report(m)
        report.invariants = {
            "normal_form": {
                "delta": str(normal_form.delta),
                "special_points": [format_exact(p) for p in normal_form.special_points],
                "arcs": normal_form.arcs.to_list(),
            }
        }
        report.witnesses = {"reparametrization": _reparametrization(loaded.reparametrization)}
        return report
    report.invariants = model_invariants(loaded.model)
    return report


def classify_report(mf: ModelFile, reparametrize: bool = True) -> Report:
    loaded = load_involution(mf, reparametrize)
    classification = _classification(loaded.model)
    report = Report(
        command=Command.CLASSIFY.value,
        verdicts={"class": classification.name},
        classification=classification,
    )
    if loaded.model.kind == ModelKind.CONIC_BUNDLE:
        report.conic_bundle = conic_bundle_report(loaded.model.data)
        report.witnesses = {"reparametrization": _reparametrization(loaded.reparametrization)}
    else:
        report.invariants = model_invariants(loaded.model)
    return report


def normalize_report(mf: ModelFile, reparametrize: bool = True) -> Tuple[Report, ConicBundleModel]:
    """Normal form of a conic bundle stanza; the model is returned for writing."""
    if mf.kind != ModelKind.CONIC_BUNDLE.value:
        raise InvalidParameters(f"normalize applies to conic_bundle stanzas, got {mf.kind}")
    model, moved = load_conic_bundle(mf, reparametrize)
    normal = normalize(model)
    report = Report(
        command=Command.NORMALIZE.value,
        verdicts={"changed": _flag(normal != model)},
        conic_bundle=conic_bundle_report(normal),
        invariants={"idempotent": normalize(normal) == normal},
        witnesses={"input": model.to_dict(), "reparametrization": _reparametrization(moved)},
    )
    return report, normal


def _conjugacy_report(verdict: ConjugacyVerdict) -> ConjugacyReport:
    return ConjugacyReport(
        verdict=verdict.verdict.value,
        reason=verdict.reason,
        classes=[c for c in verdict.classes if c],
        witness=verdict.witness,
        citation=verdict.citation,
        fibrewise=verdict.fibrewise,
    )


def _fixed_base_verdict(m1: ConicBundleModel, m2: ConicBundleModel) -> FibrewiseVerdict:
    try:
        n1, n2 = normalize(m1), normalize(m2)
    except IrrationalSplitRequired as e:
        logger.info("no normal form over Q (%s); comparing normal form invariants", e.message)
        return fibrewise_invariants(m1, m2)
    return fibrewise_conjugate(n1, n2)


def conjugate_report(left: ModelFile, right: ModelFile, fix_base: bool = False, reparametrize: bool = True) -> Report:
    """Conjugacy of two models; with fix_base the base line is kept fixed."""
    first = load_involution(left, reparametrize)
    second = load_involution(right, reparametrize)
    if fix_base:
        if not (first.model.kind == second.model.kind == ModelKind.CONIC_BUNDLE):
            raise InvalidParameters("--fix-base applies to two conic_bundle models")
        fibrewise = _fixed_base_verdict(first.model.data, second.model.data)
        verdict = ConjugacyVerdict(
            Verdict.CONJUGATE if fibrewise.conjugate else Verdict.NOT_CONJUGATE,
            reason="fibrewise" if fibrewise.conjugate else fibrewise.failing,
            fibrewise=fibrewise.to_dict(),
        )
    else:
        verdict = decide_conjugacy(first.model, second.model)
    report = Report(
        command=Command.CONJUGATE.value,
        verdicts={"conjugacy": verdict.verdict.value},
        conjugacy=_conjugacy_report(verdict),
        witnesses={
            "left_reparametrization": _reparametrization(first.reparametrization),
            "right_reparametrization": _reparametrization(second.reparametrization),
        },
    )
    if verdict.citation:
        report.citations = [verdict.citation]
    if verdict.is_unknown:
        report.exit_code = EXIT_UNKNOWN
    return report


def matrix_report(paths: Sequence[str], reparametrize: bool = True) -> Report:
    """Pairwise verdicts in the order the files are given."""
    models = [load_involution(read_model_file(p), reparametrize).model for p in paths]
    rows = conjugacy_matrix(models)
    citations: List[str] = []
    for row in rows:
        for verdict in row:
            if verdict.citation and verdict.citation not in citations:
                citations.append(verdict.citation)
    unknown = sum(v.is_unknown for row in rows for v in row)
    report = Report(
        command=Command.MATRIX.value,
        verdicts={"unknown_pairs": str(unknown)},
        citations=citations,
        matrix=MatrixReport(
            files=[str(p) for p in paths],
            classes=[classify_model(m).name for m in models],
            verdicts=[[v.verdict.value for v in row] for row in rows],
        ),
    )
    if unknown:
        report.exit_code = EXIT_UNKNOWN
    return report


# === FORMS AND CURVES ===

def _binary_literal(text: str) -> List:
    entries = parse_form(text)
    if len(entries) != 2:
        raise ParseError(f"a binary form literal has two entries, got {len(entries)} in '{text}'")
    return entries


def equiv_forms_report(
    left: str,
    right: str,
    decider: Decider = Decider.CRITERION,
    mode: CriterionMode = CriterionMode.ALL_ROOTS,
) -> Report:
    """<A, B> ~ <C, D> over R(t); disagreement under Decider.BOTH gives exit code 5."""
    A, B = _binary_literal(left)
    C, D = _binary_literal(right)
    decider = Decider(decider)
    result = decide_binary(A, B, C, D, decider, CriterionMode(mode))
    forms = FormEquivalenceReport(
        left=[str(A), str(B)],
        right=[str(C), str(D)],
        mode=decider.value,
        criterion=result.criterion,
        oracle=result.oracle,
        agree=result.agree,
        equivalent=result.verdict,
    )
    report = Report(
        command=Command.EQUIV_FORMS.value,
        verdicts={"equivalent": _flag(result.verdict)},
        invariants={"criterion_mode": CriterionMode(mode).value},
        forms=forms,
    )
    if decider == Decider.BOTH:
        report.verdicts["agree"] = _flag(result.agree)
        if not result.agree:
            report.exit_code = EXIT_MISMATCH
    return report


def _form(text: str) -> BinaryForm:
    poly, degree = parse_binary_form(text)
    return BinaryForm.of(poly, degree)


def curve_components_report(form: str, sign: int = 1) -> Report:
    f = _form(form)
    components = hyperelliptic_components(f, sign)
    return Report(
        command=Command.CURVE.value,
        verdicts={"components": str(components)},
        invariants={"genus": f.genus, "sign": sign},
        curve=CurveReport(operation="components", curves=[str(f)], components=components),
    )


def curve_iso_report(first: str, second: str) -> Report:
    """Real isomorphism of w^2 = f and w^2 = g, with the projective equivalence of the forms."""
    f, g = _form(first), _form(second)
    witness = binary_form_projective_equiv(f, g)
    isomorphic = witness is not None and witness[1] > 0
    report = Report(
        command=Command.CURVE.value,
        verdicts={"isomorphic": _flag(isomorphic)},
        invariants={"projectively_equivalent": witness is not None},
        curve=CurveReport(operation="iso", curves=[str(f), str(g)], equivalent=isomorphic),
    )
    if witness is not None:
        report.witnesses = {"map": str(witness[0]), "sign": witness[1]}
    return report


def curve_gaussian_report(form: str) -> Report:
    f = _form(form)
    gaussian = is_gaussian(f)
    return Report(
        command=Command.CURVE.value,
        verdicts={"gaussian": _flag(gaussian)},
        invariants={"genus": f.genus},
        curve=CurveReport(operation="gaussian", curves=[str(f)], gaussian=gaussian),
    )


def curve_ovals_report(mf: ModelFile) -> Report:
    quartic = load_curve(mf)
    if not isinstance(quartic, KowalevskayaQuartic):
        raise InvalidParameters("ovals applies to kowalevskaya stanzas")
    data = _kowalevskaya_invariants(quartic)
    return Report(
        command=Command.CURVE.value,
        verdicts={"ovals": str(data["ovals"])},
        invariants={"parameters": data["parameters"]},
        curve=CurveReport(
            operation="ovals",
            curves=[str(quartic)],
            ovals=data["ovals"],
            nested=data["nested"],
            topology=data["topology"],
        ),
    )


# === FAMILIES ===

def _pairwise_not_conjugate(models: Sequence[InvolutionModel]) -> bool:
    return all(
        decide_conjugacy(models[i], models[j]).verdict == Verdict.NOT_CONJUGATE
        for i in range(len(models))
        for j in range(i + 1, len(models))
    )


def corollary_family_report(
    r: int,
    s: int,
    epsilons: Sequence,
    quadratics: Sequence,
    a,
    b,
    count: int,
    seed: Optional[int] = None,
) -> Report:
    """Members of the one-fixed-curve family, their classes and the pairwise check."""
    seed = settings.DEFAULT_SEED if seed is None else seed
    members = corollary_family(r, s, epsilons, quadratics, a, b, count, seed)
    models = [InvolutionModel.conic_bundle(m) for m in members]
    separated = _pairwise_not_conjugate(models)
    family = FamilyReport(
        family="corollary",
        seed=seed,
        members=[m.to_dict() for m in members],
        classes=[classify_model(m).name for m in models],
        components=[hyperelliptic_components(fixed_curve(m)) for m in members],
        pairwise_not_conjugate=separated,
    )
    return Report(
        command=Command.FAMILY.value,
        verdicts={"pairwise": Verdict.NOT_CONJUGATE.value if separated else "mixed"},
        invariants={"fixed_curve": str(fixed_curve(members[0]))},
        family=family,
    )


def trepalin_family_report(epsilons: Sequence, a, b, count: int, seed: Optional[int] = None) -> Report:
    seed = settings.DEFAULT_SEED if seed is None else seed
    members = trepalin_family(epsilons, a, b, count, seed)
    models = [InvolutionModel.trepalin(d) for d in members]
    separated = _pairwise_not_conjugate(models)
    family = FamilyReport(
        family="trepalin",
        seed=seed,
        members=[d.to_dict() for d in members],
        classes=[classify_model(m).name for m in models],
        pairwise_not_conjugate=separated,
    )
    return Report(
        command=Command.FAMILY.value,
        verdicts={"pairwise": Verdict.NOT_CONJUGATE.value if separated else "mixed"},
        family=family,
    )


def selfcheck_report(samples: Optional[int] = None, seed: Optional[int] = None, paired: Optional[float] = None) -> Report:
    result = decider_self_check(samples, seed, paired)
    report = Report(
        command=Command.SELFCHECK.value,
        verdicts={"agree": _flag(result.ok)},
        selfcheck=SelfCheckReport(**result.to_dict()),
    )
    if not result.ok:
        report.exit_code = EXIT_MISMATCH
    return report
