"""Published JSON schemas for every artifact the CLI writes."""

_INT_LIST = {"type": "array", "items": {"type": "integer"}}

GRAPH = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["name", "vertices", "edges", "leaves"],
    "properties": {
        "name": {"type": "string"},
        "vertices": _INT_LIST,
        "edges": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "ends"],
                "properties": {
                    "id": {"type": "integer", "minimum": 0},
                    "ends": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
                },
                "additionalProperties": False,
            },
        },
        "leaves": _INT_LIST,
        "even": _INT_LIST,
        "capped": _INT_LIST,
    },
    "additionalProperties": False,
}

WEIGHTING = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["graph", "level", "w"],
    "properties": {
        "graph": {"type": "string"},
        "level": {"type": "integer", "minimum": 0},
        "w": {
            "type": "object",
            "patternProperties": {"^[0-9]+$": {"type": "integer"}},
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}

FACTORIZATION = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["target", "parts", "method", "validated"],
    "properties": {
        "target": WEIGHTING,
        "parts": {"type": "array", "items": WEIGHTING},
        "method": {"type": "string"},
        "validated": {"const": True},
    },
}

SPLIT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["left", "right", "shared_edge", "left_leaf", "right_leaf", "left_edges", "right_edges"],
    "properties": {
        "left": GRAPH,
        "right": GRAPH,
        "shared_edge": {"type": "integer"},
        "left_leaf": {"type": "integer"},
        "right_leaf": {"type": "integer"},
        "left_edges": _INT_LIST,
        "right_edges": _INT_LIST,
    },
}

POINTS = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["graph", "level", "count", "points"],
    "properties": {
        "graph": {"type": "string"},
        "level": {"type": "integer"},
        "count": {"type": "integer"},
        "points": {"type": "array", "items": _INT_LIST},
    },
}

_STATUS = {"enum": ["pass", "fail", "budget"]}

REPORT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["kind", "status"],
    "properties": {
        "kind": {"enum": ["generation", "relations", "b2_quadrants", "moves"]},
        "status": _STATUS,
        "summary": {
            "type": "object",
            "required": ["total", "pass", "fail", "budget"],
            "properties": {k: {"type": "integer"} for k in ("total", "pass", "fail", "budget")},
        },
        "elements": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["level", "w", "status"],
                "properties": {"level": {"type": "integer"}, "w": _INT_LIST, "status": _STATUS},
            },
        },
    },
}

HILBERT_CACHE = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["graph_hash", "level", "count"],
    "properties": {
        "graph_hash": {"type": "string"},
        "level": {"type": "integer"},
        "count": {"type": "integer"},
    },
}
