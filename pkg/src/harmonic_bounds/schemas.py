"""JSON Schemas for the CLI's JSON output."""

_DECIMAL = {"type": "string", "pattern": r"^-?\d+(\.\d+)?(e[+-]\d+)?$"}

INTERVAL = {
    "type": "object",
    "properties": {"lo": _DECIMAL, "hi": _DECIMAL, "bits": {"type": "integer", "minimum": 2}},
    "required": ["lo", "hi"],
}

GAMMA = {
    "type": "object",
    "properties": {
        "gamma": INTERVAL,
        "n": {"type": "integer", "minimum": 1},
        "q": {"type": "integer", "minimum": 1},
        "method": {"const": "euler_maclaurin"},
        "bits": {"type": "integer"},
    },
    "required": ["gamma", "n", "q", "method"],
}

_PAIR = {"type": "array", "items": _DECIMAL, "minItems": 2, "maxItems": 2}

TABLE_ROW = {
    "type": "object",
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "residual": INTERVAL,
        "franel": _PAIR,
        "toth_mare": _PAIR,
        "sharp": {"type": "array", "items": INTERVAL, "minItems": 2, "maxItems": 2},
        "phi": INTERVAL,
    },
    "required": ["n", "residual", "franel", "toth_mare", "sharp", "phi"],
}

TABLE = {"type": "array", "items": TABLE_ROW}

REPORT = {
    "type": "object",
    "properties": {
        "suite": {"type": "string"},
        "range": {"type": "array", "minItems": 2, "maxItems": 2},
        "status": {"enum": ["pass", "fail", "inconclusive"]},
        "checked": {"type": "integer", "minimum": 0},
        "certified": {"type": "boolean"},
        "float_free": {"type": "boolean"},
        "relations": {"type": "object", "additionalProperties": {"type": "integer"}},
        "failures": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "subject": {"type": "string"},
                    "relation": {"type": "string"},
                    "kind": {"enum": ["fail", "inconclusive"]},
                    "witness": {"type": "object"},
                },
                "required": ["subject", "relation", "kind", "witness"],
            },
        },
    },
    "required": ["suite", "range", "status", "checked", "certified", "failures"],
}
