"""
TOML interchange documents.

Every document carries a top-level ``kind`` and is checked against the JSON
Schema of that kind before it is turned into domain objects. Serializers emit
canonical documents (sorted vertices, facets and pairs), so reading back a
written document gives the same objects.
"""
import re
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

import toml
from aws_lambda_powertools import Logger
from aws_lambda_powertools.utilities.validation import SchemaValidationError, validate

from cubetopo_helpers.coloring import LabeledTriangulation
from cubetopo_helpers.connectivity_toolkit import BadVertexAssignment, SimplicialMap
from cubetopo_helpers.errors import ParseError
from cubetopo_helpers.flow_retraction import FlowData
from cubetopo_helpers.simplicial_core import Simplex, SimplicialComplex, VertexLabeling
from cubetopo_helpers.thompson_groups import TreePair, parse_forest

logger = Logger(service="cubetopo", child=True)

Document = Dict[str, Any]

_VERTICES = {"type": "array", "items": {"type": "integer", "minimum": 0}}
_FACETS = {"type": "array", "items": _VERTICES}
_PAIRS = {
    "type": "array",
    "items": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
}
_COMPLEX_TABLE = {
    "type": "object",
    "required": ["facets"],
    "properties": {"facets": _FACETS},
}
_ELEMENT_FIELDS = {
    "domain": {"type": "string"},
    "range": {"type": "string"},
    "bijection": {"type": "array", "items": {"type": "integer", "minimum": 0}},
}
_GROUP_FIELDS = {
    "d": {"type": "integer", "minimum": 1},
    "r": {"type": "integer", "minimum": 1},
}


def _schema(kind: str, required: Sequence[str], properties: Dict[str, Any]) -> Dict[str, Any]:
    return {
        "$schema": "http://json-schema.org/draft-07/schema#",
        "type": "object",
        "required": ["kind", *required],
        "properties": {"kind": {"const": kind}, **properties},
    }


SCHEMAS: Dict[str, Dict[str, Any]] = {
    "complex": _schema("complex", ["facets"], {"facets": _FACETS}),
    "labeled_complex": _schema(
        "labeled_complex",
        ["facets", "labels", "universe", "interior_universe"],
        {
            "facets": _FACETS,
            "labels": _PAIRS,
            "universe": {"type": "array", "items": {"type": "integer"}},
            "interior_universe": {"type": "array", "items": {"type": "integer"}},
        },
    ),
    "map": _schema(
        "map",
        ["source", "target", "vertex_map"],
        {"source": _COMPLEX_TABLE, "target": _COMPLEX_TABLE, "vertex_map": _PAIRS},
    ),
    "bad_assignment": _schema(
        "bad_assignment",
        ["facets"],
        {
            "facets": _FACETS,
            "bad_vertices": _VERTICES,
            "bar": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["simplex", "bad"],
                    "properties": {"simplex": _VERTICES, "bad": _VERTICES},
                },
            },
        },
    ),
    "flow": _schema(
        "flow",
        ["carrier", "target", "complexity", "delta", "vsel"],
        {
            "carrier": _COMPLEX_TABLE,
            "target": _COMPLEX_TABLE,
            "complexity": _PAIRS,
            "delta": _PAIRS,
            "vsel": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["simplex", "vertex"],
                    "properties": {"simplex": _VERTICES, "vertex": {"type": "integer"}},
                },
            },
        },
    ),
    "tree_pair": _schema(
        "tree_pair", ["d", "r", "domain", "range", "bijection"], {**_GROUP_FIELDS, **_ELEMENT_FIELDS}
    ),
    "element_set": _schema(
        "element_set",
        ["d", "r", "elements"],
        {
            **_GROUP_FIELDS,
            "elements": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["domain", "range", "bijection"],
                    "properties": _ELEMENT_FIELDS,
                },
            },
        },
    ),
    "fixture": _schema(
        "fixture",
        ["name", "command", "expected"],
        {
            "name": {"type": "string"},
            "command": {"type": "string"},
            "verb": {"type": "string"},
            "params": {"type": "object"},
            "inputs": {"type": "array", "items": {"type": "object", "required": ["kind"]}},
            "expected": {
                "type": "object",
                "required": ["exit"],
                "properties": {"exit": {"type": "integer"}, "report": {"type": "object"}},
            },
        },
    ),
}
KINDS = tuple(SCHEMAS)


def _line_of(text: str, key: str) -> Optional[int]:
    """Line of a top-level key or of the table header named after it."""
    header = re.compile(r"^\[{1,2}\s*%s\s*[\].]" % re.escape(key))
    assignment = re.compile(r'^"?%s"?\s*=' % re.escape(key))
    in_tables = False
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if header.match(stripped):
            return number
        if stripped.startswith("["):
            in_tables = True
        elif not in_tables and assignment.match(stripped):
            return number
    return None


def _top_level_key(error: SchemaValidationError) -> Optional[str]:
    path = getattr(error, "path", None) or []
    if len(path) > 1 and isinstance(path[1], str):
        return path[1]
    return None


def validate_document(document: Document, text: str = "") -> Document:
    """
    Checks a parsed document against the schema of its kind.

    Args:
        document (Document): Parsed TOML.
        text (str, optional): Source text, used to locate errors.

    Raises:
        ParseError: On an unknown kind or a schema violation.

    Returns:
        Document: The same document.
    """
    kind = document.get("kind")
    if kind not in SCHEMAS:
        raise ParseError(
            "Unknown document kind %r, expected one of %s" % (kind, ", ".join(KINDS)),
            _line_of(text, "kind"),
        )
    try:
        validate(event=document, schema=SCHEMAS[kind])
    except SchemaValidationError as e:
        key = _top_level_key(e)
        message = getattr(e, "validation_message", None) or str(e)
        raise ParseError(
            "Invalid %s document: %s" % (kind, message),
            _line_of(text, key) if key else None,
        )
    return document


def loads(text: str, kinds: Optional[Iterable[str]] = None) -> Document:
    """
    Parses and validates a document.

    Args:
        text (str): TOML source.
        kinds (Iterable[str], optional): Accepted kinds; any kind if omitted.

    Raises:
        ParseError: On TOML syntax errors, schema violations or a kind that
            is not accepted.

    Returns:
        Document: The validated document.
    """
    try:
        document = toml.loads(text)
    except toml.TomlDecodeError as e:
        raise ParseError("Invalid TOML: %s" % e.msg, e.lineno)
    validate_document(document, text)
    accepted = tuple(kinds) if kinds is not None else KINDS
    if document["kind"] not in accepted:
        raise ParseError(
            "Expected a %s document, got %s" % (" or ".join(accepted), document["kind"]),
            _line_of(text, "kind"),
        )
    return document


def read_document(path: Path, kinds: Optional[Iterable[str]] = None) -> Document:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ParseError("Cannot read %s: %s" % (path, e.strerror))
    logger.debug("Reading document", extra={"path": str(path)})
    return loads(text, kinds)


def dumps(document: Document) -> str:
    return toml.dumps(document)


def _complex(facets: List[List[int]]) -> SimplicialComplex:
    return SimplicialComplex(tuple(Simplex.of(f) for f in facets))


def _pairs(pairs: List[List[int]], field: str) -> Dict[int, int]:
    mapping: Dict[int, int] = {}
    for key, value in pairs:
        if key in mapping:
            raise ParseError("Vertex %d listed twice in %s" % (key, field))
        mapping[key] = value
    return mapping


def _expect(document: Document, kind: str) -> None:
    validate_document(document)
    if document["kind"] != kind:
        raise ParseError("Expected a %s document, got %s" % (kind, document["kind"]))


def to_complex(document: Document) -> SimplicialComplex:
    _expect(document, "complex")
    return _complex(document["facets"])


def to_labeled(document: Document) -> LabeledTriangulation:
    _expect(document, "labeled_complex")
    return LabeledTriangulation(
        _complex(document["facets"]),
        VertexLabeling.of(_pairs(document["labels"], "labels")),
        tuple(sorted(set(document["universe"]))),
        tuple(sorted(set(document["interior_universe"]))),
    )


def to_map(document: Document) -> SimplicialMap:
    _expect(document, "map")
    return SimplicialMap.of(
        _complex(document["source"]["facets"]),
        _complex(document["target"]["facets"]),
        _pairs(document["vertex_map"], "vertex_map"),
    )


def to_bad_assignment(document: Document) -> BadVertexAssignment:
    """Either bad_vertices (bar is intersection) or an explicit bar table."""
    _expect(document, "bad_assignment")
    carrier = _complex(document["facets"])
    if "bad_vertices" in document:
        return BadVertexAssignment.from_bad_vertices(carrier, document["bad_vertices"])
    return BadVertexAssignment.of(
        carrier, {Simplex.of(entry["simplex"]): entry["bad"] for entry in document.get("bar", [])}
    )


def to_flow(document: Document) -> FlowData:
    _expect(document, "flow")
    return FlowData.of(
        _complex(document["carrier"]["facets"]),
        _complex(document["target"]["facets"]),
        _pairs(document["complexity"], "complexity"),
        _pairs(document["delta"], "delta"),
        {Simplex.of(entry["simplex"]): entry["vertex"] for entry in document["vsel"]},
    )


def _element(d: int, r: int, fields: Dict[str, Any]) -> TreePair:
    return TreePair(
        parse_forest(fields["domain"], d, r),
        parse_forest(fields["range"], d, r),
        tuple(fields["bijection"]),
    )


def to_tree_pair(document: Document) -> TreePair:
    _expect(document, "tree_pair")
    return _element(document["d"], document["r"], document)


def to_element_set(document: Document) -> List[TreePair]:
    _expect(document, "element_set")
    return [_element(document["d"], document["r"], e) for e in document["elements"]]


def _facets(X: SimplicialComplex) -> List[List[int]]:
    return [list(f.vertices) for f in X.facets]


def complex_document(X: SimplicialComplex) -> Document:
    return {"kind": "complex", "facets": _facets(X)}


def labeled_document(T: LabeledTriangulation) -> Document:
    return {
        "kind": "labeled_complex",
        "facets": _facets(T.complex),
        "labels": [[v, label] for v, label in sorted(T.labeling.as_dict.items())],
        "universe": list(T.universe),
        "interior_universe": list(T.interior_universe),
    }


def map_document(f: SimplicialMap) -> Document:
    return {
        "kind": "map",
        "vertex_map": [list(pair) for pair in f.vertex_map],
        "source": {"facets": _facets(f.source)},
        "target": {"facets": _facets(f.target)},
    }


def bad_assignment_document(b: BadVertexAssignment) -> Document:
    return {
        "kind": "bad_assignment",
        "facets": _facets(b.carrier),
        "bar": [{"simplex": list(s.vertices), "bad": list(bad)} for s, bad in b.bar],
    }


def flow_document(f: FlowData) -> Document:
    return {
        "kind": "flow",
        "complexity": [list(pair) for pair in f.complexity],
        "delta": [list(pair) for pair in f.delta],
        "carrier": {"facets": _facets(f.carrier)},
        "target": {"facets": _facets(f.target)},
        "vsel": [{"simplex": list(s.vertices), "vertex": v} for s, v in f.vsel],
    }


def _element_fields(g: TreePair) -> Dict[str, Any]:
    return {"domain": str(g.domain), "range": str(g.range), "bijection": list(g.bijection)}


def tree_pair_document(g: TreePair) -> Document:
    return {"kind": "tree_pair", "d": g.d, "r": g.r, **_element_fields(g)}


def element_set_document(d: int, r: int, elements: Sequence[TreePair]) -> Document:
    return {
        "kind": "element_set",
        "d": d,
        "r": r,
        "elements": [_element_fields(g) for g in elements],
    }
