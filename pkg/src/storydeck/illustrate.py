"""Turn data facts into text descriptions and embellished chart specs.

Descriptions come from one fixed template per fact type. Embellishments are
extra ``annotations`` entries appended to the chart-spec document; stripping
them recovers the original spec byte-for-byte.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Any

from .chartspec import AnalysisFrame, ChartSpec, spec_to_dict
from .errors import FocusNotInChart, MissingParameter
from .facts import DataFact, FactType, ScoreBreakdown

POINT_HIGHLIGHT = "point_highlight"
PAIR_LINK = "pair_link_with_arrows"
TREND_LINE = "trend_line"

EMPHASIS_COLOR = "#e4572e"

_OP_SYMBOLS = {"eq": "=", "neq": "!=", "lt": "<", "lte": "<=", "gt": ">", "gte": ">=", "in": "in"}


@dataclass(frozen=True)
class IllustratedFact:
    id: str
    fact: DataFact
    description: str
    embellished_spec: dict
    user_edited_description: bool = False
    # the aggregated (dimension value, measure value) series, kept so that
    # downstream renderers do not need the dataset again
    series: tuple[tuple[Any, float], ...] = ()


def format_ratio(ratio: float) -> str:
    """Signed fractions render as unsigned percentages with one decimal."""
    return f"{abs(ratio) * 100:.1f}%"


def _format_value(value: Any) -> str:
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    return str(value)


def render_subspace(fact: DataFact) -> str:
    parts = []
    for pred in fact.subspace:
        value = pred.value
        if isinstance(value, (list, tuple)):
            rendered = "(" + ", ".join(_format_value(v) for v in value) + ")"
        else:
            rendered = _format_value(value)
        parts.append(f"{pred.column} {_OP_SYMBOLS[pred.op]} {rendered}")
    return ", ".join(parts)


def describe(fact: DataFact, include_subspace: bool = False) -> str:
    """Render the fact's template; the subspace prefix is off by default to
    keep descriptions simple."""
    measure = fact.measure.label()
    dimension = fact.dimension
    focus = [_format_value(v) for v in fact.focus]
    params = fact.parameters
    t = fact.fact_type

    if t is FactType.MAJORITY:
        if "ratio" not in params:
            raise MissingParameter("majority fact needs a 'ratio' parameter")
        if not focus:
            raise MissingParameter("majority fact needs a focus")
        text = (
            f"The category of {focus[0]} accounts for the significant amount "
            f"{format_ratio(params['ratio'])} of {measure}."
        )
    elif t is FactType.EXTREME:
        polarity = params.get("polarity")
        if polarity not in ("max", "min"):
            raise MissingParameter("extreme fact needs a 'polarity' of max or min")
        if not focus:
            raise MissingParameter("extreme fact needs a focus")
        word = "maximum" if polarity == "max" else "minimum"
        text = f"{dimension} has the {word} {measure} at {focus[0]}."
    elif t is FactType.OUTLIER:
        if not focus:
            raise MissingParameter("outlier fact needs a focus")
        text = f"{dimension} has an outstanding {measure} at {focus[0]}."
    elif t is FactType.TURNING_POINT:
        if not focus:
            raise MissingParameter("turning-point fact needs a focus")
        text = f"{focus[0]} is a turning point of {measure} over the {dimension}."
    elif t is FactType.DIFFERENCE:
        if "ratio" not in params:
            raise MissingParameter("difference fact needs a 'ratio' parameter")
        if len(focus) != 2:
            raise MissingParameter("difference fact needs two focus values")
        verb = "increases" if params["ratio"] >= 0 else "decreases"
        text = (
            f"The {measure} of {focus[1]} {verb} {format_ratio(params['ratio'])} "
            f"compared with {focus[0]}."
        )
    elif t is FactType.TREND:
        direction = params.get("direction")
        if direction not in ("increasing", "decreasing"):
            raise MissingParameter("trend fact needs a 'direction' parameter")
        verb = "increases" if direction == "increasing" else "decreases"
        text = f"The {measure} {verb} over the {dimension}."
    else:  # pragma: no cover - enum is closed
        raise MissingParameter(f"no template for fact type {t}")

    if include_subspace and fact.subspace:
        return f"For {render_subspace(fact)}, {text}"
    return text


def annotation_for(fact: DataFact) -> dict:
    """The fact-type-appropriate annotation layer."""
    style = {"color": EMPHASIS_COLOR, "dim_others": True}
    if fact.fact_type is FactType.DIFFERENCE:
        return {
            "kind": PAIR_LINK,
            "targets": list(fact.focus),
            "style": style,
            "direction": "increasing" if fact.parameters.get("ratio", 0) >= 0 else "decreasing",
        }
    if fact.fact_type is FactType.TREND:
        return {
            "kind": TREND_LINE,
            "targets": list(fact.focus),
            "style": style,
            "slope": fact.parameters.get("slope"),
            "intercept": fact.parameters.get("intercept"),
        }
    return {"kind": POINT_HIGHLIGHT, "targets": list(fact.focus), "style": style}


def embellish(spec: ChartSpec | dict, fact: DataFact, frame: AnalysisFrame | None = None) -> dict:
    """Append the fact's annotation layer to the chart-spec document."""
    doc = spec_to_dict(spec) if isinstance(spec, ChartSpec) else dict(spec)
    if frame is not None:
        keys = {str(k) for k in frame.keys}
        missing = [v for v in fact.focus if str(v) not in keys]
        if missing:
            raise FocusNotInChart(f"focus value(s) not in chart: {missing}")
    annotations = list(doc.get("annotations", []))
    annotations.append(annotation_for(fact))
    doc["annotations"] = annotations
    return doc


def strip_annotations(doc: dict) -> dict:
    return {k: v for k, v in doc.items() if k != "annotations"}


def illustrate(
    fact: DataFact,
    spec: ChartSpec,
    frame: AnalysisFrame,
    fact_id: str,
    include_subspace: bool = False,
) -> IllustratedFact:
    return IllustratedFact(
        id=fact_id,
        fact=fact,
        description=describe(fact, include_subspace=include_subspace),
        embellished_spec=embellish(spec, fact, frame),
        series=frame.series,
    )


def apply_user_highlight(
    ill: IllustratedFact,
    focus_value: Any,
    spec: ChartSpec,
    frame: AnalysisFrame,
) -> IllustratedFact:
    """Move the fact's focus to a single user-clicked point and re-embellish.

    The result is a user fact: its parameters and score can no longer be
    inferred, so the score is zeroed.
    """
    resolved = None
    for key in frame.keys:
        if str(key) == str(focus_value):
            resolved = key
            break
    if resolved is None:
        raise FocusNotInChart(f"focus value not in chart: {focus_value!r}")
    fact = replace(
        ill.fact,
        focus=(resolved,),
        fact_type=ill.fact.fact_type,
        origin="user",
        score=ScoreBreakdown.zero(),
        significance=0.0,
    )
    # a single highlighted point always renders as a point highlight
    doc = strip_annotations(ill.embellished_spec)
    annotations = [{
        "kind": POINT_HIGHLIGHT,
        "targets": [resolved],
        "style": {"color": EMPHASIS_COLOR, "dim_others": True},
    }]
    doc["annotations"] = annotations
    description = ill.description if ill.user_edited_description else _user_highlight_text(fact)
    return IllustratedFact(
        id=ill.id,
        fact=fact,
        description=description,
        embellished_spec=doc,
        user_edited_description=ill.user_edited_description,
        series=frame.series,
    )


def _user_highlight_text(fact: DataFact) -> str:
    try:
        return describe(fact)
    except MissingParameter:
        value = _format_value(fact.focus[0]) if fact.focus else "?"
        return f"{fact.dimension} {value} is highlighted for {fact.measure.label()}."


__all__ = [
    "IllustratedFact",
    "POINT_HIGHLIGHT",
    "PAIR_LINK",
    "TREND_LINE",
    "describe",
    "embellish",
    "strip_annotations",
    "annotation_for",
    "apply_user_highlight",
    "illustrate",
    "format_ratio",
    "render_subspace",
]
