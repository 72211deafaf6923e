"""JSON presentation documents and report serialization."""

from __future__ import annotations

import json
from fractions import Fraction

from .poisson import DEFAULT_NILPOTENCE_CAP, PoissonPresentation, PresentationError
from .poly import QQ, Field, PolynomialSyntaxError, format_polynomial, parse_polynomial


class DocumentError(PresentationError):
    """A presentation document is malformed."""


def _field(doc):
    field_doc = doc.get("field", {"type": "Q"})
    if not isinstance(field_doc, dict) or "type" not in field_doc:
        raise DocumentError("field must be an object with a 'type'")
    if field_doc["type"] == "Q":
        return QQ
    if field_doc["type"] == "Fp":
        p = field_doc.get("p")
        if not isinstance(p, int):
            raise DocumentError("Fp field needs an integer 'p'")
        try:
            return Field(p)
        except ValueError as exc:
            raise DocumentError(str(exc)) from None
    raise DocumentError(f"unknown field type {field_doc['type']!r}")


def _scalar(value, fld, what):
    try:
        if isinstance(value, str):
            return fld(Fraction(value.strip()))
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return fld(value)
    except (ValueError, ZeroDivisionError):
        pass
    raise DocumentError(f"{what}: expected an exact scalar, got {value!r}")


def _var_index(token, n, names):
    if names and token in names:
        return names.index(token) + 1
    if token.startswith("X") and token[1:].isdigit():
        k = int(token[1:])
        if 1 <= k <= n:
            return k
    raise DocumentError(f"unknown variable {token!r}")


def _poly(text, n, fld, names, what):
    if not isinstance(text, str):
        text = str(text)
    try:
        return parse_polynomial(text, n, fld, names, laurent=False)
    except (PolynomialSyntaxError, ValueError) as exc:
        raise DocumentError(f"{what}: {exc}") from None


def _image_map(images, n, fld, names, what):
    if not isinstance(images, dict):
        raise DocumentError(f"{what}: images must be an object")
    return {_var_index(k, n, names): _poly(v, n, fld, names, f"{what}[{k}]")
            for k, v in images.items()}


def presentation_from_dict(doc: dict) -> PoissonPresentation:
    if not isinstance(doc, dict):
        raise DocumentError("presentation document must be a JSON object")
    fld = _field(doc)
    n = doc.get("n")
    if not isinstance(n, int) or n < 1:
        raise DocumentError("'n' must be a positive integer")
    names = doc.get("names")
    if names is not None:
        if not (isinstance(names, list) and all(isinstance(s, str) for s in names)):
            raise DocumentError("'names' must be a list of strings")
        names = tuple(names)
    lam_doc = doc.get("lambda")
    if not (isinstance(lam_doc, list) and len(lam_doc) == n
            and all(isinstance(r, list) and len(r) == n for r in lam_doc)):
        raise DocumentError(f"'lambda' must be an {n}x{n} array")
    lam = [[_scalar(v, fld, "lambda") for v in row] for row in lam_doc]

    delta = {}
    for entry in doc.get("delta", []) or []:
        if not isinstance(entry, dict) or "i" not in entry:
            raise DocumentError("delta entries need 'i' and 'images'")
        i = entry["i"]
        if not isinstance(i, int) or not 1 <= i <= n:
            raise DocumentError(f"delta index {i!r} outside 1..{n}")
        row = _image_map(entry.get("images", {}), n, fld, names, f"delta_{i}")
        if any(j >= i for j in row):
            raise DocumentError("delta references later variable: "
                                f"delta_{i} has an image for X{max(row)}")
        delta.setdefault(i, {}).update(row)

    eta = {}
    raw_eta = doc.get("eta") or []
    if isinstance(raw_eta, dict):
        raw_eta = [{"i": int(k), "value": v} for k, v in raw_eta.items()]
    for entry in raw_eta:
        if not isinstance(entry, dict) or "i" not in entry or "value" not in entry:
            raise DocumentError("eta entries need 'i' and 'value'")
        v = _scalar(entry["value"], fld, f"eta_{entry['i']}")
        if v == 0:
            raise DocumentError(f"eta_{entry['i']} must be nonzero")
        eta[int(entry["i"])] = v

    higher = {}
    for entry in doc.get("higher", []) or []:
        if not isinstance(entry, dict) or "i" not in entry or "tables" not in entry:
            raise DocumentError("higher entries need 'i' and 'tables'")
        i = int(entry["i"])
        higher[i] = [_image_map(t, n, fld, names, f"D_{i},{k}")
                     for k, t in enumerate(entry["tables"])]

    cap = doc.get("nilpotence_cap", DEFAULT_NILPOTENCE_CAP)
    if not isinstance(cap, int) or cap < 1:
        raise DocumentError("'nilpotence_cap' must be a positive integer")
    return PoissonPresentation(fld, n, lam, delta, eta, higher, cap, names)


def parse_presentation(document) -> PoissonPresentation:
    """Parse a UTF-8 JSON document (bytes or str) into a validated presentation."""
    if isinstance(document, bytes):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DocumentError(f"document is not UTF-8: {exc}") from None
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"malformed JSON: {exc}") from None
    return presentation_from_dict(doc)


def load_presentation(path) -> PoissonPresentation:
    with open(path, "rb") as fh:
        return parse_presentation(fh.read())


def scalar_str(c) -> str:
    return str(Fraction(c))


def presentation_to_dict(pres: PoissonPresentation) -> dict:
    """Canonical document: keys in fixed order, entries sorted by index."""
    fld = pres.field
    fmt = lambda f: format_polynomial(f, None, "X")
    doc = {"field": {"type": "Fp", "p": fld.p} if fld.p else {"type": "Q"}, "n": pres.n}
    if pres.names is not None:
        doc["names"] = list(pres.names)
    doc["lambda"] = [[scalar_str(c) for c in row] for row in pres.lam]
    doc["delta"] = [{"i": i, "images": {f"X{j}": fmt(pres.delta[i][j]) for j in sorted(pres.delta[i])}}
                    for i in sorted(pres.delta)]
    if pres.eta:
        doc["eta"] = [{"i": i, "value": scalar_str(pres.eta[i])} for i in sorted(pres.eta)]
    if pres.higher:
        doc["higher"] = [{"i": i, "tables": [{f"X{j}": fmt(row[j]) for j in sorted(row)}
                                             for row in pres.higher[i]]}
                         for i in sorted(pres.higher)]
    doc["nilpotence_cap"] = pres.nilpotence_cap
    return doc


def serialize_presentation(pres: PoissonPresentation) -> str:
    """Canonical text: one matrix row or one list entry per line."""
    doc = presentation_to_dict(pres)
    parts = []
    for key, value in doc.items():
        if isinstance(value, list) and value and isinstance(value[0], (list, dict)):
            inner = ",\n".join("    " + json.dumps(v, ensure_ascii=False) for v in value)
            parts.append(f"  {json.dumps(key)}: [\n{inner}\n  ]")
        else:
            parts.append(f"  {json.dumps(key)}: {json.dumps(value, ensure_ascii=False)}")
    return "{\n" + ",\n".join(parts) + "\n}\n"


def to_json(obj) -> str:
    """Deterministic JSON for reports; scalars become exact strings."""
    return json.dumps(_jsonable(obj), indent=2, sort_keys=False) + "\n"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return scalar_str(obj)
    if hasattr(obj, "terms") and hasattr(obj, "nvars"):
        return format_polynomial(obj)
    if hasattr(obj, "to_strings"):
        num, den = obj.to_strings()
        return {"num": num, "den": den}
    return obj
