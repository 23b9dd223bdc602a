"""Canonical JSON serialization shared by the CLI, the service, and the
session store.

Everything user-visible goes through ``canonical_json`` (stable key order,
two-space indent, UTF-8) so the CLI's output is byte-identical to the
service's payloads for the same inputs.
"""

from __future__ import annotations

import json
from typing import Any, Mapping

from .chartspec import Measure
from .facts import DataFact, FactType, ScoreBreakdown
from .illustrate import IllustratedFact
from .tabular import Predicate, predicate_from_dict, predicate_to_dict


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def measure_to_dict(measure: Measure) -> dict:
    return {"column": measure.column, "aggregate": measure.aggregate}


def measure_from_dict(doc: dict) -> Measure:
    return Measure(doc.get("column"), doc.get("aggregate", "sum"))


def score_to_dict(score: ScoreBreakdown) -> dict:
    return {
        "significance": score.significance,
        "impact": score.impact,
        "suitability": score.suitability,
        "total": score.total,
    }


def score_from_dict(doc: dict) -> ScoreBreakdown:
    return ScoreBreakdown(
        doc.get("significance", 0.0),
        doc.get("impact", 0.0),
        doc.get("suitability", 0.0),
        doc.get("total", 0.0),
    )


def fact_to_dict(fact: DataFact) -> dict:
    return {
        "subspace": [predicate_to_dict(p) for p in fact.subspace],
        "measure": measure_to_dict(fact.measure),
        "dimension": fact.dimension,
        "fact_type": fact.fact_type.value,
        "parameters": dict(fact.parameters),
        "focus": list(fact.focus),
        "chart_id": fact.chart_id,
        "chart_index": fact.chart_index,
        "origin": fact.origin,
        "score": score_to_dict(fact.score),
    }


def fact_from_dict(doc: dict) -> DataFact:
    return DataFact(
        subspace=tuple(predicate_from_dict(p) for p in doc.get("subspace", [])),
        measure=measure_from_dict(doc["measure"]),
        dimension=doc["dimension"],
        fact_type=FactType(doc["fact_type"]),
        parameters=dict(doc.get("parameters", {})),
        focus=tuple(doc.get("focus", [])),
        chart_id=doc["chart_id"],
        chart_index=doc.get("chart_index", 0),
        origin=doc.get("origin", "mined"),
        score=score_from_dict(doc.get("score", {})),
        significance=doc.get("score", {}).get("significance", 0.0),
    )


def illustrated_to_dict(ill: IllustratedFact) -> dict:
    doc = fact_to_dict(ill.fact)
    doc["id"] = ill.id
    doc["description"] = ill.description
    doc["user_edited_description"] = ill.user_edited_description
    doc["embellished_spec"] = ill.embellished_spec
    doc["series"] = [[k, v] for k, v in ill.series]
    return doc


def illustrated_from_dict(doc: dict) -> IllustratedFact:
    return IllustratedFact(
        id=doc["id"],
        fact=fact_from_dict(doc),
        description=doc["description"],
        embellished_spec=doc["embellished_spec"],
        user_edited_description=doc.get("user_edited_description", False),
        series=tuple((k, v) for k, v in doc.get("series", [])),
    )


def facts_payload(facts: Mapping[str, IllustratedFact] | list[IllustratedFact]) -> list[dict]:
    items = facts if isinstance(facts, list) else list(facts.values())
    return [illustrated_to_dict(f) for f in items]
