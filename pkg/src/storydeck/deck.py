"""Deck generation: layout selection, key-text emphasis, and export.

A story resolves into a DeckDocument: each slide becomes either a
progressive layout (all facts from one chart, revealed one by one with
cumulative annotations) or a side-by-side layout (facts from different
charts).  The deck exports as canonical JSON, Markdown, or self-contained
HTML with inline SVG charts.
"""

from __future__ import annotations

import html as html_escape
from datetime import datetime, timezone
from typing import Mapping

from .errors import EmptyStory, MalformedInput
from .facts import FactType
from .illustrate import IllustratedFact, format_ratio, strip_annotations
from .serialize import canonical_json, illustrated_to_dict
from .story import Story
from .svgchart import render_chart_svg

SCHEMA_VERSION = 1

PROGRESSIVE = "progressive_same_chart"
SIDE_BY_SIDE = "side_by_side"

# fact-type keywords worth emphasizing, beyond parameter values
_TYPE_KEYWORDS = {
    FactType.MAJORITY: ("accounts for the significant amount",),
    FactType.EXTREME: ("maximum", "minimum"),
    FactType.OUTLIER: ("outstanding",),
    FactType.TURNING_POINT: ("turning point",),
    FactType.DIFFERENCE: ("increases", "decreases"),
    FactType.TREND: ("increases", "decreases"),
}


def select_layout(fact_ids: list[str], facts: Mapping[str, IllustratedFact]) -> str:
    charts = {facts[fid].fact.chart_id for fid in fact_ids}
    return PROGRESSIVE if len(charts) <= 1 else SIDE_BY_SIDE


def emphasize(description: str, ill: IllustratedFact) -> list[list[int]]:
    """Best-effort spans over the fact-type keyword and parameter values.

    Returns [start, end) pairs; user-edited text without template keywords
    simply yields no spans.
    """
    fact = ill.fact
    needles: list[str] = list(_TYPE_KEYWORDS.get(fact.fact_type, ()))
    for value in fact.focus:
        needles.append(str(int(value)) if isinstance(value, float) and value.is_integer() else str(value))
    ratio = fact.parameters.get("ratio")
    if isinstance(ratio, (int, float)):
        needles.append(format_ratio(ratio))

    spans: list[list[int]] = []
    for needle in needles:
        if not needle:
            continue
        start = description.find(needle)
        if start < 0:
            continue
        end = start + len(needle)
        if any(s < end and start < e for s, e in spans):
            continue
        spans.append([start, end])
    spans.sort()
    return spans


def _encoding_intro(ill: IllustratedFact) -> str:
    fact = ill.fact
    return f"{ill.embellished_spec.get('mark', 'chart')} of {fact.measure.label()} by {fact.dimension}"


def render_deck(
    story: Story,
    facts: Mapping[str, IllustratedFact],
    dataset_id: str = "dataset",
    config_digest: str = "",
    generated_at: str | None = None,
) -> dict:
    """Resolve the story into a layout-ready deck document."""
    if not story.slides:
        raise EmptyStory("cannot render an empty story")
    if generated_at is None:
        generated_at = datetime.now(timezone.utc).isoformat(timespec="seconds")

    slides = []
    for slide in story.slides:
        layout = select_layout(slide.fact_ids, facts)
        blocks = []
        cumulative_annotations: list = []
        for fid in slide.fact_ids:
            ill = facts[fid]
            chart = dict(ill.embellished_spec)
            if layout == PROGRESSIVE:
                # progressive reveal keeps earlier facts' annotations visible
                cumulative_annotations = cumulative_annotations + list(
                    ill.embellished_spec.get("annotations", [])
                )
                chart = strip_annotations(chart)
                chart["annotations"] = list(cumulative_annotations)
            blocks.append({
                "fact_id": fid,
                "fact_type": ill.fact.fact_type.value,
                "chart_id": ill.fact.chart_id,
                "description": ill.description,
                "emphasis": emphasize(ill.description, ill),
                "chart": chart,
                "series": [[k, v] for k, v in ill.series],
            })
        rendered = {
            "id": slide.id,
            "title": slide.title,
            "layout": layout,
            "blocks": blocks,
        }
        if layout == PROGRESSIVE:
            rendered["encoding_intro"] = _encoding_intro(facts[slide.fact_ids[0]])
        slides.append(rendered)

    return {
        "schema_version": SCHEMA_VERSION,
        "metadata": {
            "dataset_id": dataset_id,
            "generated_at": generated_at,
            "config_digest": config_digest,
        },
        "slides": slides,
    }


def _bold(description: str, spans: list[list[int]]) -> str:
    out = []
    cursor = 0
    for start, end in spans:
        out.append(description[cursor:start])
        out.append(f"**{description[start:end]}**")
        cursor = end
    out.append(description[cursor:])
    return "".join(out)


def export_json(deck: dict) -> bytes:
    return (canonical_json(deck) + "\n").encode("utf-8")


def export_markdown(deck: dict) -> bytes:
    lines = ["# Data story", ""]
    meta = deck["metadata"]
    lines.append(f"*Dataset: {meta['dataset_id']} — generated {meta['generated_at']}*")
    lines.append("")
    for slide in deck["slides"]:
        lines.append(f"## {slide['title']}")
        lines.append("")
        if slide.get("encoding_intro"):
            lines.append(f"_{slide['encoding_intro']}_")
            lines.append("")
        for block in slide["blocks"]:
            lines.append(_bold(block["description"], block["emphasis"]))
            lines.append("")
            lines.append("```json")
            lines.append(canonical_json(block["chart"]))
            lines.append("```")
            lines.append("")
    return "\n".join(lines).encode("utf-8")


def _mark_spans(description: str, spans: list[list[int]]) -> str:
    out = []
    cursor = 0
    for start, end in spans:
        out.append(html_escape.escape(description[cursor:start]))
        out.append(f"<em class=\"key\">{html_escape.escape(description[start:end])}</em>")
        cursor = end
    out.append(html_escape.escape(description[cursor:]))
    return "".join(out)


_HTML_STYLE = """
body { font-family: system-ui, sans-serif; margin: 0; background: #f5f5f4; }
section.slide { min-height: 95vh; padding: 3rem; background: white;
                margin: 1rem auto; max-width: 60rem; box-shadow: 0 1px 4px #0002; }
h2 { margin-top: 0; }
p.intro { color: #666; font-style: italic; }
em.key { font-style: normal; font-weight: 700; color: #e4572e; }
div.blocks { display: flex; flex-wrap: wrap; gap: 1.5rem; }
figure { margin: 0; }
"""


def export_html(deck: dict) -> bytes:
    parts = [
        "<!DOCTYPE html>",
        "<html><head><meta charset=\"utf-8\"><title>Data story</title>",
        f"<style>{_HTML_STYLE}</style></head><body>",
    ]
    for slide in deck["slides"]:
        parts.append("<section class=\"slide\">")
        parts.append(f"<h2>{html_escape.escape(slide['title'])}</h2>")
        if slide.get("encoding_intro"):
            parts.append(f"<p class=\"intro\">{html_escape.escape(slide['encoding_intro'])}</p>")
        parts.append("<div class=\"blocks\">")
        for block in slide["blocks"]:
            parts.append("<figure>")
            parts.append(render_chart_svg(block["chart"], block["series"]))
            parts.append(
                f"<figcaption>{_mark_spans(block['description'], block['emphasis'])}</figcaption>"
            )
            parts.append("</figure>")
        parts.append("</div></section>")
    parts.append("</body></html>")
    return "\n".join(parts).encode("utf-8")


EXPORT_FORMATS = {
    "json": export_json,
    "markdown": export_markdown,
    "html": export_html,
}


def export(deck: dict, format: str) -> bytes:
    try:
        writer = EXPORT_FORMATS[format]
    except KeyError:
        raise MalformedInput(f"unknown export format: {format!r}") from None
    return writer(deck)
