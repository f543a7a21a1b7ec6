"""JSON schemas of the documents written by ``loopforge --json``."""

_INT_OR_NULL = {"type": ["integer", "null"]}
_VIOLATION_BLOCK = {
    "type": "object",
    "required": ["checked", "violations"],
    "properties": {
        "checked": {"type": "integer", "minimum": 0},
        "violations": {"type": "array"},
        "sampled": {"type": "boolean"},
    },
}

TABLE = {
    "type": "object",
    "required": ["elements", "table"],
    "properties": {
        "name": {"type": "string"},
        "elements": {"type": "array", "items": {"type": "string"}},
        "table": {"type": "array",
                  "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
    },
}

CHECK = {
    "type": "object",
    "required": ["order", "quasigroup", "identity", "associative", "commutative", "moufang"],
    "properties": {
        "loop": {"type": "string"},
        "order": {"type": "integer", "minimum": 1},
        "identity_element": {"type": "string"},
        **{k: {"type": "boolean"} for k in
           ("quasigroup", "identity", "associative", "commutative", "moufang")},
    },
}

SERIES = {
    "type": "object",
    "required": ["kind", "depth", "terms", "lower_bound"],
    "properties": {
        "kind": {"enum": ["gamma", "ca", "naive"]},
        "depth": {"type": "integer", "minimum": 1},
        "stabilized_at": _INT_OR_NULL,
        "lower_bound": {"type": "boolean"},
        "terms": {"type": "array", "items": {
            "type": "object",
            "required": ["index", "order"],
            "properties": {
                "index": {"type": "integer"},
                "order": {"type": "integer"},
                "members": {"type": "array", "items": {"type": "string"}},
                "lower_bound": {"type": "boolean"},
            }}},
    },
}

COMPARE = {
    "type": "object",
    "required": ["terms", "flags"],
    "properties": {
        "terms": {"type": "array", "items": {
            "type": "object",
            "required": ["index", "gamma", "ca", "naive"],
            "properties": {k: {"type": "integer"} for k in ("index", "gamma", "ca", "naive")}}},
        "flags": {
            "type": "object",
            "required": ["gamma_eq_ca", "naive_eq_ca", "containments_ok", "lower_bound"],
            "properties": {k: {"type": "boolean"} for k in
                           ("gamma2_eq_ca2", "gamma_eq_ca", "naive_eq_ca",
                            "containments_ok", "lower_bound")},
        },
    },
}

GRADED = {
    "type": "object",
    "required": ["components", "checks"],
    "properties": {
        "components": {"type": "array", "items": {
            "type": "object",
            "required": ["degree", "order", "invariant_factors"],
            "properties": {
                "degree": {"type": "integer", "minimum": 1},
                "order": {"type": "integer", "minimum": 1},
                "invariant_factors": {"type": "array",
                                      "items": {"type": "integer", "minimum": 2}},
                "generators": {"type": "array", "items": {"type": "string"}},
            }}},
        "checks": {
            "type": "object",
            "required": ["bilinear", "trilinear", "deviation_multilinear", "akivis"],
            "properties": {k: _VIOLATION_BLOCK for k in
                           ("bilinear", "trilinear", "deviation_multilinear",
                            "akivis", "representatives")},
        },
    },
}

WITNESS = {
    "type": "object",
    "required": ["m", "n", "loop_part", "leading_symbol", "leading_coeff", "max_other_p",
                 "g_coeff", "nonzero", "verdict"],
    "properties": {
        "m": {"type": "integer", "minimum": 1},
        "n": {"type": "integer", "minimum": 0},
        "loop_part": {"type": "integer"},
        "leading_symbol": {"type": ["array", "null"], "items": {"type": "integer"},
                           "minItems": 2, "maxItems": 2},
        "leading_coeff": {"type": "integer"},
        "max_other_p": _INT_OR_NULL,
        "g_coeff": {"type": "integer"},
        "nonzero": {"type": "boolean"},
        "stated_index": {"type": "integer"},
        "stated_form_holds": {"type": "boolean"},
        "verdict": {"enum": ["outside gamma3", "inconclusive"]},
    },
}

EVAL = {
    "type": "object",
    "required": ["term", "value"],
    "properties": {"term": {"type": "string"}, "value": {"type": "string"},
                   "bindings": {"type": "object"}},
}

DEVIATION = {
    "type": "object",
    "required": ["level", "count"],
    "properties": {
        "level": {"type": "integer", "minimum": 0},
        "count": {"type": "integer", "minimum": 1},
        "alphas": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
        "term": {"type": "string"},
    },
}

CATALOG = {
    "type": "object",
    "required": ["loops"],
    "properties": {"loops": {"type": "array", "items": {
        "type": "object", "required": ["name", "order"],
        "properties": {"name": {"type": "string"}, "order": {"type": "integer"}}}}},
}

BY_COMMAND = {
    "check": CHECK, "series": SERIES, "compare": COMPARE, "graded": GRADED,
    "higman-witness": WITNESS, "eval": EVAL, "deviation": DEVIATION,
}
