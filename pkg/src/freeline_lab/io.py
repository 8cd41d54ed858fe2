"""JSON input and output for the command line.

Input objects are JSON documents; the kind is taken from an optional "type"
field or inferred from the keys present:

    hypersurface     {"field": {"p": 2, "e": 2}, "n": 4, "d": 3, "terms": [{"exps": [...], "c": ...}]}
    linear_system    {"field": ..., "gens": [{"n": 3, "d": 3, "terms": [...]}, ...]}
    twisted_map      {"field": ..., "source": [1, 1], "target": [2], "entries": [[[c, ...], ...]]}
    rational_curve   {"field": ..., "components": [[c, ...], ...]}
    subspace         {"field": ..., "rows": [[c, ...], ...]}

Entries of a twisted map are rows (one per target twist) of binary forms,
each a coefficient list for s^deg, s^(deg-1) t, ..., t^deg.  A coefficient
c is either an integer code in [0, q) or a list of at most e base-p digits
(the element's coordinates in the power basis).
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ParseError, ValidationError
from .galois import FieldCtx, make_field
from .linalg import rank
from .kersys import LinearSystem, RationalCurve
from .linegeom import Hypersurface
from .p1split import TwistedMap
from .polyalg import BinaryForm, LinearSubspace, MultiPoly

SCHEMA = 1
KINDS = ("hypersurface", "linear_system", "twisted_map", "rational_curve", "subspace")


def _infer_kind(doc: dict) -> str:
    if "type" in doc:
        if doc["type"] not in KINDS:
            raise ValidationError(f"unknown type {doc['type']!r}; expected one of {KINDS}")
        return doc["type"]
    for key, kind in (("terms", "hypersurface"), ("gens", "linear_system"),
                      ("source", "twisted_map"), ("components", "rational_curve"),
                      ("rows", "subspace")):
        if key in doc:
            return kind
    raise ValidationError("cannot tell the object type: add a \"type\" field")


def _field(doc) -> FieldCtx:
    spec = doc.get("field")
    if spec is None:
        raise ValidationError("missing \"field\"")
    if isinstance(spec, int):
        return make_field(spec)
    if not isinstance(spec, dict) or "p" not in spec:
        raise ValidationError("\"field\" must be an integer p or {\"p\": p, \"e\": e}")
    return make_field(_int(spec["p"], "field.p"), _int(spec.get("e", 1), "field.e"))


def _int(v, where) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ValidationError(f"{where} must be an integer, got {v!r}")
    return v


def _coeff(ctx: FieldCtx, c, where) -> int:
    """Strictly validated element code."""
    if isinstance(c, list):
        if len(c) > ctx.e:
            raise ValidationError(f"{where}: {len(c)} digits for an element of {ctx}")
        for digit in c:
            if _int(digit, where) < 0 or digit >= ctx.p:
                raise ValidationError(f"{where}: digit {digit} is not in [0, {ctx.p})")
        return ctx.from_coeffs(c)
    c = _int(c, where)
    if not 0 <= c < ctx.q:
        raise ValidationError(f"{where}: coefficient {c} is not an element code in [0, {ctx.q})")
    return c


def _poly(ctx, doc, where, n=None, d=None) -> MultiPoly:
    if not isinstance(doc, dict) or "terms" not in doc:
        raise ValidationError(f"{where}: expected an object with \"terms\"")
    n = _int(doc.get("n", n), f"{where}.n")
    d = _int(doc.get("d", d), f"{where}.d")
    terms = {}
    for i, term in enumerate(doc["terms"]):
        exps = term.get("exps") if isinstance(term, dict) else None
        if not isinstance(exps, list):
            raise ValidationError(f"{where}.terms[{i}]: missing exponent list \"exps\"")
        exps = tuple(_int(a, f"{where}.terms[{i}].exps") for a in exps)
        if len(exps) != n + 1:
            raise ValidationError(f"{where}.terms[{i}]: {len(exps)} exponents, expected n+1 = {n + 1}")
        if min(exps) < 0:
            raise ValidationError(f"{where}.terms[{i}]: negative exponent")
        if sum(exps) != d:
            raise ValidationError(f"{where}.terms[{i}]: exponent sum ≠ d ({sum(exps)} vs {d})")
        if exps in terms:
            raise ValidationError(f"{where}.terms[{i}]: repeated monomial {list(exps)}")
        terms[exps] = _coeff(ctx, term.get("c", 1), f"{where}.terms[{i}].c")
    return MultiPoly(ctx, n, d, terms)


def _form(ctx, coeffs, where, degree=None) -> BinaryForm:
    if not isinstance(coeffs, list):
        raise ValidationError(f"{where}: a binary form is a coefficient list")
    codes = [_coeff(ctx, c, f"{where}[{i}]") for i, c in enumerate(coeffs)]
    if degree is not None and degree < 0:
        if any(codes):
            raise ValidationError(f"{where}: entry of negative degree must be zero")
        return BinaryForm(ctx, degree)
    if degree is not None and len(codes) != degree + 1:
        raise ValidationError(f"{where}: {len(codes)} coefficients, expected degree {degree}")
    return BinaryForm.from_codes(ctx, np.array(codes, dtype=np.int64))


def from_document(doc):
    if not isinstance(doc, dict):
        raise ValidationError("top level must be a JSON object")
    kind = _infer_kind(doc)
    ctx = _field(doc)
    if kind == "hypersurface":
        return Hypersurface(_poly(ctx, doc, "hypersurface"))
    if kind == "linear_system":
        gens = doc["gens"]
        if not isinstance(gens, list) or not gens:
            raise ValidationError("\"gens\" must be a nonempty list")
        return LinearSystem([_poly(ctx, g, f"gens[{i}]", doc.get("k"), doc.get("r"))
                             for i, g in enumerate(gens)])
    if kind == "twisted_map":
        source = [_int(a, "source") for a in doc["source"]]
        target = [_int(b, "target") for b in doc["target"]]
        rows = doc["entries"]
        if not isinstance(rows, list) or len(rows) != len(target):
            raise ValidationError("need one row of entries per target twist")
        entries = []
        for j, row in enumerate(rows):
            if len(row) != len(source):
                raise ValidationError(f"entries[{j}] has {len(row)} forms, expected {len(source)}")
            entries.append([_form(ctx, f, f"entries[{j}][{i}]", target[j] - source[i])
                            for i, f in enumerate(row)])
        return TwistedMap(tuple(source), tuple(target), entries, ctx)
    if kind == "rational_curve":
        comps = [_form(ctx, c, f"components[{i}]") for i, c in enumerate(doc["components"])]
        return RationalCurve(comps)
    rows = [[_coeff(ctx, c, f"rows[{i}][{j}]") for j, c in enumerate(r)]
            for i, r in enumerate(doc["rows"])]
    arr = np.array(rows, dtype=np.int64)
    if arr.ndim != 2 or rank(ctx, arr) != arr.shape[0]:
        raise ValidationError("subspace rows must be linearly independent")
    return LinearSubspace(ctx, arr)


def parse_text(text: str, source: str = "<input>"):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: {exc.msg}", exc.lineno, exc.colno) from None
    try:
        return from_document(doc)
    except (KeyError, TypeError, AttributeError) as exc:
        raise ValidationError(f"{source}: malformed document ({exc})") from None


def parse_input(path):
    """Read a JSON file into a Hypersurface, LinearSystem, TwistedMap,
    RationalCurve or LinearSubspace."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}", 0, 0) from None
    return parse_text(text, str(path))


def parse_inline_or_path(value: str, ctx: FieldCtx | None = None):
    """A subspace given inline as a JSON list of rows, or any object in a file."""
    stripped = value.lstrip()
    if stripped.startswith("["):
        if ctx is None:
            raise ValidationError("inline rows need a field from the accompanying input")
        try:
            rows = json.loads(value)
        except json.JSONDecodeError as exc:
            raise ParseError(f"inline value: {exc.msg}", exc.lineno, exc.colno) from None
        return from_document({"field": ctx.to_json(), "rows": rows})
    if stripped.startswith("{"):
        return parse_text(value, "inline value")
    return parse_input(value)


def dumps(report: dict) -> str:
    """Canonical JSON: schema tag first, sorted keys, fixed separators."""
    return json.dumps(_plain({"schema": SCHEMA, **report}), sort_keys=True, indent=2,
                      allow_nan=False) + "\n"


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        obj = float(obj)
        if obj != obj or obj in (float("inf"), float("-inf")):
            return str(obj)          # "-inf" sentinel stays readable
        return round(obj, 12)
    return obj
