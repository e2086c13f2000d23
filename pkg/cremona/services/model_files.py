"""Model file stanzas.

A stanza is a block of ``key: value`` lines with exactly one ``kind:`` line.
Blank lines and lines starting with ``#`` are ignored. Polynomial values use
the polynomial grammar; lists are comma separated.

    kind: conic_bundle
    A: 1
    B: 0
    C: (t-1)*(t-2)*(t-3)*(t-4)
    H: -t*(t-5)
"""

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from cremona.core.errors import NonEmptyFibreAtInfinity, ParseError
from cremona.services.conicbundle import (
    ConicBundleModel,
    Reparametrization,
    reparametrize_to_infinity,
    validate_model,
)
from cremona.services.exactnum import RatPoly
from cremona.services.involutions import (
    IDENTITY,
    InvolutionModel,
    ModelKind,
    QuadricInvolutionData,
    QuadricSurface,
    TrepalinData,
)
from cremona.services.polytext import parse_poly, parse_rational
from cremona.services.realcurves import BinaryForm, KowalevskayaQuartic

logger = logging.getLogger(__name__)

HYPERELLIPTIC = "hyperelliptic"

# kind -> (required keys, optional keys)
STANZA_KEYS: Dict[str, Tuple[Tuple[str, ...], Tuple[str, ...]]] = {
    ModelKind.LINEAR.value: ((), ()),
    ModelKind.CONIC_BUNDLE.value: (("A", "B", "C", "H"), ()),
    ModelKind.TREPALIN.value: (("twist", "epsilons", "lambda1", "lambda2"), ()),
    ModelKind.DEJONQUIERES.value: (("f",), ("deg",)),
    ModelKind.QUADRIC.value: (("surface", "action"), ()),
    ModelKind.BERTINI.value: (("topology",), ("equation",)),
    ModelKind.GEISER.value: (("topology",), ("equation",)),
    ModelKind.KOWALEVSKAYA.value: (("a", "b", "c", "s"), ("sign",)),
    HYPERELLIPTIC: (("f",), ("deg", "sign")),
}

_LINE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*:\s*(.*?)\s*$")


@dataclass
class ModelFile:
    kind: str
    fields: Dict[str, str] = field(default_factory=dict)
    path: Optional[str] = None

    def _where(self) -> str:
        return f" in {self.path}" if self.path else ""

    def text(self, key: str, default: Optional[str] = None) -> Optional[str]:
        return self.fields.get(key, default)

    def poly(self, key: str) -> RatPoly:
        try:
            return parse_poly(self.fields[key])
        except ParseError as e:
            raise ParseError(f"{key}: {e.message}{self._where()}")

    def rational(self, key: str) -> Fraction:
        try:
            return parse_rational(self.fields[key])
        except ParseError as e:
            raise ParseError(f"{key}: {e.message}{self._where()}")

    def integer(self, key: str, default: Optional[int] = None) -> int:
        if key not in self.fields:
            return default
        value = self.fields[key]
        if not re.fullmatch(r"[+-]?\d+", value):
            raise ParseError(f"{key}: expected an integer, got '{value}'{self._where()}")
        return int(value)

    def rationals(self, key: str) -> List[Fraction]:
        items = [item.strip() for item in self.fields[key].split(",")]
        if any(not item for item in items):
            raise ParseError(f"{key}: empty entry in '{self.fields[key]}'{self._where()}")
        return [parse_rational(item) for item in items]

    def sign(self, key: str = "sign") -> int:
        value = self.fields.get(key, "+1")
        signs = {"+": 1, "+1": 1, "1": 1, "-": -1, "-1": -1}
        if value not in signs:
            raise ParseError(f"{key}: expected + or -, got '{value}'{self._where()}")
        return signs[value]


def parse_stanza(source: str, path: Optional[str] = None) -> ModelFile:
    """Parse one stanza; unknown, duplicate and missing keys are errors."""
    where = f" in {path}" if path else ""
    kind: Optional[str] = None
    fields: Dict[str, str] = {}
    for number, line in enumerate(source.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        match = _LINE.match(line)
        if not match:
            raise ParseError(f"line {number}: expected 'key: value'{where}")
        key, value = match.groups()
        if key == "kind":
            if kind is not None:
                raise ParseError(f"line {number}: second 'kind:' line{where}")
            kind = value
            continue
        if key in fields:
            raise ParseError(f"line {number}: duplicate key '{key}'{where}")
        fields[key] = value
    if kind is None:
        raise ParseError(f"missing 'kind:' line{where}")
    if kind not in STANZA_KEYS:
        raise ParseError(f"unknown kind '{kind}'{where}")
    required, optional = STANZA_KEYS[kind]
    unknown = sorted(set(fields) - set(required) - set(optional))
    if unknown:
        raise ParseError(f"unknown keys for kind {kind}: {', '.join(unknown)}{where}")
    missing = [key for key in required if key not in fields]
    if missing:
        raise ParseError(f"missing keys for kind {kind}: {', '.join(missing)}{where}")
    return ModelFile(kind, fields, path)


def read_model_file(path: Union[str, Path]) -> ModelFile:
    try:
        source = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}")
    return parse_stanza(source, str(path))


# === BUILDERS ===

def conic_coefficients(mf: ModelFile) -> Tuple[RatPoly, RatPoly, RatPoly, RatPoly]:
    return tuple(mf.poly(key) for key in ("A", "B", "C", "H"))


@dataclass
class LoadedModel:
    model: InvolutionModel
    reparametrization: Optional[Reparametrization] = None


def load_conic_bundle(mf: ModelFile, reparametrize: bool = True) -> Tuple[ConicBundleModel, Optional[Reparametrization]]:
    """Validated model; with reparametrize, unbounded real fibres are moved away from infinity."""
    coefficients = conic_coefficients(mf)
    try:
        return validate_model(*coefficients), None
    except NonEmptyFibreAtInfinity:
        if not reparametrize:
            raise
    moved = reparametrize_to_infinity(*coefficients)
    return moved.model, moved


def _matrix(text: str) -> Tuple[Fraction, ...]:
    text = text.strip()
    if text == "id":
        return IDENTITY
    entries = [e for e in re.split(r"[\s,]+", text) if e]
    if len(entries) != 4:
        raise ParseError(f"expected 'id' or four matrix entries, got '{text}'")
    return tuple(parse_rational(e) for e in entries)


def parse_quadric(surface: str, action: str) -> QuadricInvolutionData:
    """``Q31`` with a sign pattern such as ``-,+,+,+``; ``Q22`` with ``swap`` or ``M1; M2``."""
    if surface not in (s.value for s in QuadricSurface):
        raise ParseError(f"surface must be Q31 or Q22, got '{surface}'")
    if surface == QuadricSurface.Q31.value:
        signs = [s for s in re.split(r"[\s,]+", action.strip()) if s]
        if any(s not in ("+", "-") for s in signs):
            raise ParseError(f"sign pattern must consist of + and -, got '{action}'")
        return QuadricInvolutionData.sign_pattern(*(1 if s == "+" else -1 for s in signs))
    if action.strip() == "swap":
        return QuadricInvolutionData.factor_swap()
    parts = action.split(";")
    if len(parts) != 2:
        raise ParseError(f"fibrewise action needs two factors separated by ';', got '{action}'")
    return QuadricInvolutionData.fibrewise(_matrix(parts[0]), _matrix(parts[1]))


def _binary_form(mf: ModelFile) -> BinaryForm:
    return BinaryForm.of(mf.poly("f"), mf.integer("deg"))


def _kowalevskaya(mf: ModelFile) -> KowalevskayaQuartic:
    return KowalevskayaQuartic(*(mf.rational(key) for key in ("a", "b", "c", "s")), mf.sign())


def load_involution(mf: ModelFile, reparametrize: bool = True) -> LoadedModel:
    kind = mf.kind
    if kind == HYPERELLIPTIC:
        raise ParseError(f"a hyperelliptic stanza describes a curve, not an involution{mf._where()}")
    if kind == ModelKind.LINEAR.value:
        return LoadedModel(InvolutionModel.linear())
    if kind == ModelKind.CONIC_BUNDLE.value:
        model, moved = load_conic_bundle(mf, reparametrize)
        return LoadedModel(InvolutionModel.conic_bundle(model), moved)
    if kind == ModelKind.TREPALIN.value:
        data = TrepalinData(mf.integer("twist"), tuple(mf.rationals("epsilons")), mf.rational("lambda1"), mf.rational("lambda2"))
        return LoadedModel(InvolutionModel.trepalin(data))
    if kind == ModelKind.DEJONQUIERES.value:
        return LoadedModel(InvolutionModel.dejonquieres(_binary_form(mf)))
    if kind == ModelKind.QUADRIC.value:
        return LoadedModel(InvolutionModel.quadric(parse_quadric(mf.text("surface"), mf.text("action"))))
    if kind == ModelKind.KOWALEVSKAYA.value:
        return LoadedModel(InvolutionModel.kowalevskaya(_kowalevskaya(mf)))
    if kind == ModelKind.BERTINI.value:
        return LoadedModel(InvolutionModel.bertini(mf.text("topology"), mf.text("equation", "")))
    return LoadedModel(InvolutionModel.geiser(mf.text("topology"), mf.text("equation", "")))


def load_curve(mf: ModelFile) -> Union[Tuple[BinaryForm, int], KowalevskayaQuartic]:
    """Curve stanzas: hyperelliptic w^2 = sign * f, or a Kowalevskaya quartic."""
    if mf.kind == HYPERELLIPTIC:
        return _binary_form(mf), mf.sign()
    if mf.kind == ModelKind.KOWALEVSKAYA.value:
        return _kowalevskaya(mf)
    raise ParseError(f"kind {mf.kind} is not a curve stanza{mf._where()}")


def format_conic_bundle(m: ConicBundleModel) -> str:
    lines = [f"kind: {ModelKind.CONIC_BUNDLE.value}"]
    lines += [f"{key}: {poly}" for key, poly in zip(("A", "B", "C", "H"), m.coefficients)]
    return "\n".join(lines) + "\n"
