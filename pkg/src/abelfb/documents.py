"""JSON documents: filter banks, signals, and analysis reports.

Complex numbers are written as ``[re, im]`` pairs and group elements as
integer arrays; a signal is a list of ``[element, [re, im]]`` terms in colex
order of the element.  Every document carries a versioned ``$schema`` tag.
"""
from __future__ import annotations

import json
from typing import Any

import jsonschema

from .errors import FilterBankError
from .groups import Group, Signal
from .lattice import Lattice, lattice_from_generators, lattice_from_matrix, quincunx
from .polyphase import FilterBank

BANK_SCHEMA_ID = "abelfb/bank/v1"
SIGNAL_SCHEMA_ID = "abelfb/signal/v1"
REPORT_SCHEMA_ID = "abelfb/report/v1"
APPLY_SCHEMA_ID = "abelfb/apply/v1"


class DocumentError(FilterBankError, ValueError):
    """A JSON document failed schema or semantic validation."""


_COMPLEX = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_ELEMENT = {"type": "array", "items": {"type": "integer"}, "minItems": 1}
_TERMS = {
    "type": "array",
    "items": {"type": "array", "prefixItems": [_ELEMENT, _COMPLEX], "minItems": 2, "maxItems": 2},
}
_GROUP = {
    "oneOf": [
        {"type": "object", "required": ["orders"], "additionalProperties": False,
         "properties": {"orders": {"type": "array", "minItems": 1,
                                   "items": {"type": "integer", "minimum": 1}}}},
        {"type": "object", "required": ["rank"], "additionalProperties": False,
         "properties": {"rank": {"type": "integer", "minimum": 1}}},
    ]
}
_LATTICE = {
    "oneOf": [
        {"type": "object", "required": ["generators"], "additionalProperties": False,
         "properties": {"generators": {"type": "array", "items": _ELEMENT}}},
        {"type": "object", "required": ["matrix"], "additionalProperties": False,
         "properties": {"matrix": {"type": "array", "minItems": 1, "items": _ELEMENT}}},
        {"type": "object", "required": ["quincunx"], "additionalProperties": False,
         "properties": {"quincunx": {"type": "array", "minItems": 2, "maxItems": 2,
                                     "items": {"type": "integer", "minimum": 1}}}},
    ]
}

BANK_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": BANK_SCHEMA_ID,
    "type": "object",
    "required": ["$schema", "group", "lattice", "analysis"],
    "additionalProperties": False,
    "properties": {
        "$schema": {"const": BANK_SCHEMA_ID},
        "group": _GROUP,
        "lattice": _LATTICE,
        "transversal": {"enum": ["lex", "negative"]},
        "analysis": {"type": "array", "minItems": 1, "items": _TERMS},
        "synthesis": {"type": "array", "minItems": 1, "items": _TERMS},
    },
}

SIGNAL_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": SIGNAL_SCHEMA_ID,
    "type": "object",
    "required": ["$schema", "group", "values"],
    "additionalProperties": False,
    "properties": {
        "$schema": {"const": SIGNAL_SCHEMA_ID},
        "group": _GROUP,
        "values": _TERMS,
    },
}


# -- encoding ----------------------------------------------------------------------

def encode_complex(v: complex) -> list[float]:
    # adding 0.0 folds -0.0 into 0.0 so that emitted documents are byte-stable
    return [float(v.real) + 0.0, float(v.imag) + 0.0]


def encode_group(group: Group) -> dict:
    return {"orders": list(group.orders)} if group.is_finite else {"rank": group.rank}


def encode_terms(x: Signal) -> list:
    return [[list(n), encode_complex(v)] for n, v in x.items()]


def encode_lattice(lattice: Lattice) -> dict:
    if lattice.kind == "quincunx":
        return {"quincunx": [lattice.params["P"], lattice.params["Q"]]}
    if lattice.kind == "matrix":
        return {"matrix": [list(r) for r in lattice.params["matrix"]]}
    return {"generators": [list(g) for g in lattice.params["generators"]]}


def encode_bank(bank: FilterBank) -> dict:
    doc: dict[str, Any] = {
        "$schema": BANK_SCHEMA_ID,
        "group": encode_group(bank.group),
        "lattice": encode_lattice(bank.lattice),
        "transversal": bank.lattice.convention,
        "analysis": [encode_terms(h) for h in bank.analysis],
    }
    if bank.synthesis is not None:
        doc["synthesis"] = [encode_terms(g) for g in bank.synthesis]
    return doc


def encode_signal(x: Signal) -> dict:
    return {"$schema": SIGNAL_SCHEMA_ID, "group": encode_group(x.group), "values": encode_terms(x)}


def dumps(doc: dict) -> str:
    """Canonical serialisation: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


# -- decoding ----------------------------------------------------------------------

def _validate(doc: Any, schema: dict) -> None:
    try:
        jsonschema.validate(doc, schema, cls=jsonschema.Draft202012Validator)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise DocumentError(f"{schema['$id']}: {where}: {exc.message}") from None


def decode_group(spec: dict) -> Group:
    return Group.finite(*spec["orders"]) if "orders" in spec else Group.integer(spec["rank"])


def decode_terms(group: Group, terms: list, what: str) -> Signal:
    values = {}
    for n, (re, im) in terms:
        if len(n) != group.dim:
            raise DocumentError(f"{what}: element {n} does not match {group}")
        if group.is_finite and any(not 0 <= v < s for v, s in zip(n, group.orders)):
            raise DocumentError(f"{what}: element {n} is outside {group}")
        key = tuple(n)
        if key in values:
            raise DocumentError(f"{what}: element {n} listed twice")
        values[key] = complex(re, im)
    return Signal(group, terms=values)


def decode_lattice(group: Group, spec: dict, convention: str) -> Lattice:
    try:
        if "generators" in spec:
            if not group.is_finite:
                raise DocumentError("generator lattices need a finite group; use `matrix` on Z^d")
            for g in spec["generators"]:
                if len(g) != group.dim:
                    raise DocumentError(f"generator {g} does not match {group}")
            return lattice_from_generators(group, spec["generators"], convention)
        if "matrix" in spec:
            if group.is_finite:
                raise DocumentError("matrix lattices need an integer group; use `generators`")
            mat = spec["matrix"]
            if len(mat) != group.rank or any(len(r) != group.rank for r in mat):
                raise DocumentError(f"lattice matrix must be {group.rank} x {group.rank}")
            return lattice_from_matrix(mat, convention)
        P, Q = spec["quincunx"]
        if group != Group.finite(2 * P, 2 * Q):
            raise DocumentError(f"quincunx({P}, {Q}) lives on Z_{2 * P} x Z_{2 * Q}, not {group}")
        return quincunx(P, Q, convention)
    except DocumentError:
        raise
    except FilterBankError as exc:
        raise DocumentError(str(exc)) from None


def decode_bank(doc: Any, transversal: str | None = None) -> FilterBank:
    """Validate and decode a bank document; ``transversal`` overrides the document's choice."""
    _validate(doc, BANK_SCHEMA)
    group = decode_group(doc["group"])
    lattice = decode_lattice(group, doc["lattice"], transversal or doc.get("transversal", "lex"))
    analysis = [decode_terms(group, t, f"analysis[{i}]") for i, t in enumerate(doc["analysis"])]
    synthesis = None
    if "synthesis" in doc:
        synthesis = [decode_terms(group, t, f"synthesis[{i}]") for i, t in enumerate(doc["synthesis"])]
        if len(synthesis) != len(analysis):
            raise DocumentError(f"{len(analysis)} analysis but {len(synthesis)} synthesis filters")
    return FilterBank(lattice, analysis, synthesis)


def decode_signal(doc: Any) -> Signal:
    _validate(doc, SIGNAL_SCHEMA)
    group = decode_group(doc["group"])
    return decode_terms(group, doc["values"], "values")


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"malformed JSON: {exc}") from None
