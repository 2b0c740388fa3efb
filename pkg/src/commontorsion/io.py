"""JSON descriptions of fields, covers, cover pairs and genus-2 curves.

Exact values are strings: rationals as ``"p/q"``, number-field elements as
arrays of rational strings (ascending powers of the generator), prime-field
elements as integers or strings.  The point at infinity is ``"oo"``.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

import sympy

from .algebra.fields import QQ, Elem, NumberField, PrimeField, RationalField
from .algebra.poly import Poly
from .covers import CoverPair, DoubleCover
from .curves import (
    INF,
    Cubic,
    CubicWith0,
    EvenQuartic,
    EvenSextic,
    Mobius,
    PoonenCt,
    QuarticModel,
    S3Sextic,
    SexticModel,
    is_inf,
)
from .errors import PreconditionError
from .genus2 import Genus2Curve

PAIR_SCHEMA = "commontorsion.pair/1"
CURVE_SCHEMA = "commontorsion.curve/1"

_PARAMS = {
    "Cubic": (Cubic, ("u", "v", "w")),
    "CubicWith0": (CubicWith0, ("u", "v", "w")),
    "EvenQuartic": (EvenQuartic, ("s", "t")),
    "EvenSextic": (EvenSextic, ("u", "v", "w")),
    "S3Sextic": (S3Sextic, ("t",)),
    "PoonenCt": (PoonenCt, ("t",)),
}
_COEFF_MODELS = {"Quartic": QuarticModel, "Sextic": SexticModel}


class DescriptionError(ValueError):
    """Malformed description; carries a JSON path and, when known, line/column."""

    def __init__(self, message, path="$", line=None, column=None):
        where = f"line {line}, column {column}" if line is not None else path
        super().__init__(f"{where}: {message}")
        self.path, self.line, self.column = path, line, column


def _locate(text: str, path: str):
    """Best-effort line/column of the last key named in ``path``."""
    keys = re.findall(r"\.([A-Za-z_]\w*)", path)
    if not text or not keys:
        return None, None
    m = None
    for m in re.finditer(r'"%s"\s*:' % re.escape(keys[-1]), text):
        break
    if m is None:
        return None, None
    line = text.count("\n", 0, m.start()) + 1
    col = m.start() - (text.rfind("\n", 0, m.start()) + 1) + 1
    return line, col


class _Reader:
    def __init__(self, text: str):
        self.text = text

    def fail(self, msg, path):
        line, col = _locate(self.text, path)
        raise DescriptionError(msg, path, line, col)

    def need(self, obj, key, path):
        if not isinstance(obj, dict) or key not in obj:
            self.fail(f"missing key {key!r}", f"{path}.{key}")
        return obj[key]


def load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise DescriptionError(e.msg, "$", e.lineno, e.colno) from None


# ----------------------------------------------------------------------------
# fields and elements
# ----------------------------------------------------------------------------


def parse_field(spec, rd: _Reader, path="$.field"):
    if spec in ("QQ", "Q", None):
        return QQ
    if isinstance(spec, dict) and "prime" in spec:
        try:
            return PrimeField(int(spec["prime"]))
        except (TypeError, ValueError) as e:
            rd.fail(str(e), f"{path}.prime")
    if isinstance(spec, dict) and "number_field" in spec:
        name = spec.get("generator", "s")
        if not re.fullmatch(r"[A-Za-z]\w*", str(name)):
            rd.fail(f"bad generator name {name!r}", f"{path}.generator")
        try:
            g = sympy.Symbol(name)
            expr = sympy.sympify(str(spec["number_field"]).replace("^", "**"), locals={name: g})
            P = sympy.Poly(expr, g)
        except (sympy.SympifyError, sympy.PolynomialError, TypeError) as e:
            rd.fail(f"cannot read defining polynomial: {e}", f"{path}.number_field")
        if P.free_symbols - {g} or P.degree() < 1 or not P.is_irreducible:
            rd.fail("defining polynomial must be irreducible over QQ in the generator",
                    f"{path}.number_field")
        coeffs = [Fraction(str(c)) for c in reversed(P.all_coeffs())]
        return NumberField(coeffs, name)
    rd.fail("field must be \"QQ\", {\"prime\": p} or {\"number_field\": ..., \"generator\": ...}", path)


def field_to_json(K):
    if isinstance(K, RationalField):
        return "QQ"
    if isinstance(K, PrimeField):
        return {"prime": K.p}
    if isinstance(K, NumberField):
        g = sympy.Symbol(K.name)
        f = sum(sympy.Rational(c.numerator, c.denominator) * g**i for i, c in enumerate(K.modulus))
        return {"number_field": str(f).replace("**", "^"), "generator": K.name}
    raise TypeError(f"cannot describe {K!r}")


def _rational(v, rd, path):
    try:
        if isinstance(v, bool):
            raise ValueError
        return Fraction(v) if not isinstance(v, float) else rd.fail("floats are not exact", path)
    except (ValueError, ZeroDivisionError, TypeError):
        rd.fail(f"not an exact rational: {v!r}", path)


def parse_elem(v, K, rd: _Reader, path, allow_inf=False):
    if allow_inf and v == "oo":
        return INF
    if isinstance(K, NumberField) and isinstance(v, list):
        if len(v) > K.degree_over_q:
            rd.fail(f"expected at most {K.degree_over_q} coefficients", path)
        return K([_rational(c, rd, f"{path}[{i}]") for i, c in enumerate(v)])
    if isinstance(K, PrimeField):
        q = _rational(v, rd, path)
        if q.denominator % K.p == 0:
            rd.fail(f"denominator divisible by {K.p}", path)
        return K(q)
    return K(_rational(v, rd, path))


def elem_to_json(e):
    if is_inf(e):
        return "oo"
    K = e.K
    if isinstance(K, NumberField):
        cs = list(e.v)
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        return str(cs[0]) if len(cs) == 1 else [str(c) for c in cs]
    if isinstance(K, PrimeField):
        return int(e.v)
    return str(e.v)


# ----------------------------------------------------------------------------
# models, covers, pairs, curves
# ----------------------------------------------------------------------------


def _parse_model(obj, K, rd, path):
    tag = rd.need(obj, "model", path)
    if tag in _COEFF_MODELS:
        cs = rd.need(obj, "coefficients", path)
        if not isinstance(cs, list):
            rd.fail("coefficients must be a list (ascending)", f"{path}.coefficients")
        f = Poly(K, [parse_elem(c, K, rd, f"{path}.coefficients[{i}]") for i, c in enumerate(cs)])
        return _COEFF_MODELS[tag](f)
    if tag in _PARAMS:
        cls, names = _PARAMS[tag]
        params = rd.need(obj, "params", path)
        vals = [parse_elem(rd.need(params, n, f"{path}.params"), K, rd, f"{path}.params.{n}")
                for n in names]
        return cls(*vals)
    rd.fail(f"unknown model {tag!r}", f"{path}.model")


def model_to_json(model) -> dict:
    if model.tag in _COEFF_MODELS:
        return {"model": model.tag, "coefficients": [elem_to_json(c) for c in model.rhs().coeffs()]}
    _, names = _PARAMS[model.tag]
    return {"model": model.tag, "params": {n: elem_to_json(getattr(model, n)) for n in names}}


def _parse_cover(obj, K, rd, path):
    model = _parse_model(obj, K, rd, path)
    origin = parse_elem(rd.need(obj, "origin", path), K, rd, f"{path}.origin", allow_inf=True)
    branch = obj.get("branch")
    if branch is not None:
        branch = tuple(parse_elem(b, K, rd, f"{path}.branch[{i}]", allow_inf=True)
                       for i, b in enumerate(branch))
    try:
        return DoubleCover(model, origin, branch)
    except (PreconditionError, ArithmeticError) as e:
        rd.fail(str(e), path)


def cover_to_json(cov: DoubleCover) -> dict:
    out = model_to_json(cov.model)
    out["origin"] = elem_to_json(cov.origin)
    if cov.branch is not None:
        out["branch"] = [elem_to_json(b) for b in cov.branch]
    return out


def parse_pair(text: str) -> CoverPair:
    rd = _Reader(text)
    obj = load_json(text)
    if not isinstance(obj, dict):
        rd.fail("top level must be an object", "$")
    if obj.get("schema", PAIR_SCHEMA) != PAIR_SCHEMA:
        rd.fail(f"expected schema {PAIR_SCHEMA}", "$.schema")
    K = parse_field(obj.get("field", "QQ"), rd)
    covers = rd.need(obj, "covers", "$")
    if not isinstance(covers, list) or len(covers) != 2:
        rd.fail("need exactly two covers", "$.covers")
    c1, c2 = (_parse_cover(c, K, rd, f"$.covers[{i}]") for i, c in enumerate(covers))
    try:
        return CoverPair(c1, c2)
    except PreconditionError as e:
        rd.fail(str(e), "$.covers")


def pair_to_json(pair: CoverPair, note: str | None = None) -> dict:
    out = {"schema": PAIR_SCHEMA, "field": field_to_json(pair.K),
           "covers": [cover_to_json(c) for c in pair]}
    if note:
        out["note"] = note
    return out


def parse_mobius(v, K, rd, path) -> Mobius:
    if not isinstance(v, list) or len(v) != 4:
        rd.fail("a Moebius map is [a, b, c, d] for x -> (a x + b)/(c x + d)", path)
    a, b, c, d = (parse_elem(e, K, rd, f"{path}[{i}]") for i, e in enumerate(v))
    try:
        return Mobius(a, b, c, d, K)
    except (PreconditionError, ValueError, ZeroDivisionError) as e:
        rd.fail(str(e), path)


def mobius_to_json(M: Mobius) -> list:
    return [elem_to_json(e) for e in M.entries]


def parse_curve(text: str):
    """(Genus2Curve, claimed x-values) from a curve description."""
    rd = _Reader(text)
    obj = load_json(text)
    if not isinstance(obj, dict):
        rd.fail("top level must be an object", "$")
    if obj.get("schema", CURVE_SCHEMA) != CURVE_SCHEMA:
        rd.fail(f"expected schema {CURVE_SCHEMA}", "$.schema")
    K = parse_field(obj.get("field", "QQ"), rd)
    model = _parse_model(obj, K, rd, "$")
    inv = obj.get("involution")
    M = None if inv is None else parse_mobius(inv, K, rd, "$.involution")
    claimed = [parse_elem(v, K, rd, f"$.claimed_x[{i}]", allow_inf=True)
               for i, v in enumerate(obj.get("claimed_x", []))]
    try:
        return Genus2Curve(model, M), claimed
    except (PreconditionError, ArithmeticError) as e:
        rd.fail(str(e), "$")


def curve_to_json(C: Genus2Curve, claimed=(), note: str | None = None) -> dict:
    out = {"schema": CURVE_SCHEMA, "field": field_to_json(C.K), **model_to_json(C.model)}
    if C.involution is not None:
        out["involution"] = mobius_to_json(C.involution)
    if claimed:
        out["claimed_x"] = [elem_to_json(x) for x in claimed]
    if note:
        out["note"] = note
    return out


def elem_str(e) -> str:
    return "oo" if is_inf(e) else str(e)


def as_elem(K, v) -> Elem:
    return v if isinstance(v, Elem) else K(v)


def load_schema(name: str) -> dict:
    """A bundled JSON schema by file stem (run, pair, curve, torsion, packet, search)."""
    from importlib import resources

    text = resources.files("commontorsion").joinpath("schemas", f"{name}.json").read_text(encoding="utf-8")
    return json.loads(text)
