"""Published JSON schemas for the wire formats (served under /schemas)."""

_PREDICATE = {
    "type": "object",
    "required": ["column", "op"],
    "properties": {
        "column": {"type": "string"},
        "op": {"enum": ["eq", "neq", "lt", "lte", "gt", "gte", "in"]},
        "value": {},
    },
}

_ENCODING = {
    "type": "object",
    "properties": {
        "field": {"type": ["string", "null"]},
        "aggregate": {"enum": ["sum", "mean", "count", "min", "max"]},
    },
}

CHART_SPEC_SCHEMA = {
    "$id": "chart_spec",
    "type": "object",
    "required": ["mark", "encoding"],
    "properties": {
        "id": {"type": "string"},
        "dataset_id": {"type": "string"},
        "mark": {"enum": ["bar", "line", "area", "point", "arc"]},
        "encoding": {
            "type": "object",
            "properties": {ch: _ENCODING for ch in ("x", "y", "color", "theta")},
            "additionalProperties": False,
        },
        "transform": {
            "type": "object",
            "properties": {"filter": {"type": "array", "items": _PREDICATE}},
        },
    },
}

ANNOTATION_SCHEMA = {
    "$id": "annotation",
    "type": "object",
    "required": ["kind", "targets"],
    "properties": {
        "kind": {"enum": ["point_highlight", "pair_link_with_arrows", "trend_line"]},
        "targets": {"type": "array"},
        "style": {"type": "object"},
        "direction": {"enum": ["increasing", "decreasing"]},
        "slope": {"type": "number"},
        "intercept": {"type": "number"},
    },
}

FACT_SCHEMA = {
    "$id": "illustrated_fact",
    "type": "object",
    "required": ["id", "fact_type", "dimension", "measure", "focus",
                 "description", "embellished_spec"],
    "properties": {
        "id": {"type": "string"},
        "chart_id": {"type": "string"},
        "chart_index": {"type": "integer"},
        "fact_type": {"enum": ["Majority", "Extreme", "Outlier",
                               "TurningPoint", "Difference", "Trend"]},
        "dimension": {"type": "string"},
        "measure": {
            "type": "object",
            "properties": {
                "column": {"type": ["string", "null"]},
                "aggregate": {"enum": ["sum", "mean", "count", "min", "max"]},
            },
        },
        "subspace": {"type": "array", "items": _PREDICATE},
        "parameters": {"type": "object"},
        "focus": {"type": "array"},
        "origin": {"enum": ["mined", "user"]},
        "score": {
            "type": "object",
            "properties": {
                "significance": {"type": "number", "minimum": 0, "maximum": 1},
                "impact": {"type": "number", "minimum": 0, "maximum": 1},
                "suitability": {"type": "number", "minimum": 0, "maximum": 1},
                "total": {"type": "number", "minimum": 0, "maximum": 1},
            },
        },
        "description": {"type": "string"},
        "user_edited_description": {"type": "boolean"},
        "embellished_spec": {"type": "object"},
        "series": {"type": "array", "items": {"type": "array"}},
    },
}

STORY_OUTLINE_SCHEMA = {
    "$id": "story_outline",
    "type": "object",
    "required": ["revision", "slides"],
    "properties": {
        "revision": {"type": "integer", "minimum": 0},
        "selected": {"type": "array", "items": {"type": "string"}},
        "slides": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "title", "facts"],
                "properties": {
                    "id": {"type": "string"},
                    "title": {"type": "string"},
                    "title_user_edited": {"type": "boolean"},
                    "pinned": {"type": "boolean"},
                    "facts": {
                        "type": "array",
                        "minItems": 1,
                        "maxItems": 3,
                        "items": {
                            "type": "object",
                            "required": ["id", "fact_type", "description"],
                            "properties": {
                                "id": {"type": "string"},
                                "chart_id": {"type": "string"},
                                "chart_type": {"type": "string"},
                                "fact_type": {"type": "string"},
                                "description": {"type": "string"},
                                "pinned": {"type": "boolean"},
                            },
                        },
                    },
                },
            },
        },
    },
}

DECK_SCHEMA = {
    "$id": "deck",
    "type": "object",
    "required": ["schema_version", "metadata", "slides"],
    "properties": {
        "schema_version": {"const": 1},
        "metadata": {
            "type": "object",
            "properties": {
                "dataset_id": {"type": "string"},
                "generated_at": {"type": "string"},
                "config_digest": {"type": "string"},
            },
        },
        "slides": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "title", "layout", "blocks"],
                "properties": {
                    "id": {"type": "string"},
                    "title": {"type": "string"},
                    "layout": {"enum": ["progressive_same_chart", "side_by_side"]},
                    "encoding_intro": {"type": "string"},
                    "blocks": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["fact_id", "description", "chart"],
                            "properties": {
                                "fact_id": {"type": "string"},
                                "fact_type": {"type": "string"},
                                "chart_id": {"type": "string"},
                                "description": {"type": "string"},
                                "emphasis": {
                                    "type": "array",
                                    "items": {
                                        "type": "array",
                                        "items": {"type": "integer"},
                                        "minItems": 2,
                                        "maxItems": 2,
                                    },
                                },
                                "chart": {"type": "object"},
                                "series": {"type": "array"},
                            },
                        },
                    },
                },
            },
        },
    },
}

SCHEMAS = {
    "chart_spec": CHART_SPEC_SCHEMA,
    "annotation": ANNOTATION_SCHEMA,
    "illustrated_fact": FACT_SCHEMA,
    "story_outline": STORY_OUTLINE_SCHEMA,
    "deck": DECK_SCHEMA,
}
