"""Story state: slides of facts, transition costs, ordering, pins, titles.

Slides hold one to three facts.  Automatic organization inserts each selected
fact into a suitable slide (same chart, room left) or a fresh one, then
re-optimizes fact and slide order by minimizing transition costs.  Anything
the user arranged by hand is pinned: automatic operations preserve the
relative order of pinned elements.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

from .config import CostConfig
from .errors import DuplicateFact, InvalidPosition, UnknownId
from .facts import FACT_TYPE_ORDER, DataFact
from .ordering import order_sequence

MAX_FACTS_PER_SLIDE = 3


@dataclass
class Slide:
    id: str
    fact_ids: list[str]
    title: str = "Findings"
    title_user_edited: bool = False
    pinned: bool = False
    pinned_fact_ids: set[str] = field(default_factory=set)

    def clone(self) -> "Slide":
        return Slide(
            id=self.id,
            fact_ids=list(self.fact_ids),
            title=self.title,
            title_user_edited=self.title_user_edited,
            pinned=self.pinned,
            pinned_fact_ids=set(self.pinned_fact_ids),
        )


@dataclass
class Story:
    slides: list[Slide] = field(default_factory=list)
    next_slide_number: int = 1

    def clone(self) -> "Story":
        return Story(
            slides=[s.clone() for s in self.slides],
            next_slide_number=self.next_slide_number,
        )

    def fact_ids(self) -> list[str]:
        return [fid for slide in self.slides for fid in slide.fact_ids]

    def slide_of(self, fact_id: str) -> Slide:
        for slide in self.slides:
            if fact_id in slide.fact_ids:
                return slide
        raise UnknownId(f"fact {fact_id!r} is not in the story")

    def slide(self, slide_id: str) -> Slide:
        for slide in self.slides:
            if slide.id == slide_id:
                return slide
        raise UnknownId(f"unknown slide: {slide_id!r}")

    def pinned_slide_sequence(self) -> list[str]:
        return [s.id for s in self.slides if s.pinned]


@dataclass(frozen=True)
class Topic:
    """Attributes shared by every fact on a slide; a field is present iff
    all facts agree on it."""

    measure: Any = None
    dimension: str | None = None
    subspace: frozenset | None = None
    focus: frozenset | None = None
    fact_type: Any = None


def _subspace_key(fact: DataFact) -> frozenset:
    return frozenset(p.key() for p in fact.subspace)


def _focus_key(fact: DataFact) -> frozenset:
    return frozenset(str(v) for v in fact.focus)


def _shared(values: list) -> Any:
    return values[0] if all(v == values[0] for v in values) else None


def slide_topic(slide: Slide, facts: Mapping[str, DataFact]) -> Topic:
    members = [facts[fid] for fid in slide.fact_ids]
    if not members:
        return Topic()
    return Topic(
        measure=_shared([f.measure for f in members]),
        dimension=_shared([f.dimension for f in members]),
        subspace=_shared([_subspace_key(f) for f in members]),
        focus=_shared([_focus_key(f) for f in members]),
        fact_type=_shared([f.fact_type for f in members]),
    )


def subspace_grade(a: frozenset, b: frozenset, cfg: CostConfig) -> float:
    """Grade the a -> b subspace transition: drilling down is cheapest."""
    if a == b:
        return 0.0
    if b > a:
        return cfg.grade_drill_down
    if b < a:
        return cfg.grade_roll_up
    if {col for col, _, _ in a} == {col for col, _, _ in b}:
        return cfg.grade_sibling
    return cfg.grade_unrelated


def _jaccard_distance(a: frozenset, b: frozenset) -> float:
    union = a | b
    if not union:
        return 0.0
    return 1.0 - len(a & b) / len(union)


def _chart_gap_penalty(gap: int, cfg: CostConfig) -> float:
    """Directional, normalized creation-index gap penalty.

    Moving forward in chart creation order costs gap/(gap+1) in [0, 1);
    moving backward additionally pays a full unit, so stories prefer to
    follow the order in which the charts were made.
    """
    magnitude = abs(gap) / (abs(gap) + 1.0)
    if gap < 0:
        magnitude += 1.0
    return cfg.chart_order_penalty * magnitude


def fact_transition_cost(a: DataFact, b: DataFact, cfg: CostConfig) -> float:
    cost = 0.0
    if a.dimension != b.dimension:
        cost += cfg.dimension_change
    if a.measure != b.measure:
        cost += cfg.measure_change
    cost += cfg.subspace_relation * subspace_grade(_subspace_key(a), _subspace_key(b), cfg)
    cost += cfg.focus_overlap * _jaccard_distance(_focus_key(a), _focus_key(b))
    if a.fact_type != b.fact_type:
        cost += cfg.fact_type_change
    cost += _chart_gap_penalty(b.chart_index - a.chart_index, cfg)
    return cost


def slide_transition_cost(
    a: Slide,
    b: Slide,
    cfg: CostConfig,
    facts: Mapping[str, DataFact],
) -> float:
    """Topic-level transition cost; absent topic fields count as a change at
    half weight, plus the minimum chart-order gap between the slides."""
    ta, tb = slide_topic(a, facts), slide_topic(b, facts)
    cost = 0.0

    def term(field_a, field_b, weight: float, graded=None) -> float:
        if field_a is None or field_b is None:
            return 0.5 * weight
        if graded is not None:
            return weight * graded(field_a, field_b)
        return 0.0 if field_a == field_b else weight

    cost += term(ta.dimension, tb.dimension, cfg.dimension_change)
    cost += term(ta.measure, tb.measure, cfg.measure_change)
    cost += term(
        ta.subspace, tb.subspace, cfg.subspace_relation,
        graded=lambda x, y: subspace_grade(x, y, cfg),
    )
    cost += term(ta.focus, tb.focus, cfg.focus_overlap, graded=_jaccard_distance)
    cost += term(ta.fact_type, tb.fact_type, cfg.fact_type_change)

    gaps = [
        facts[fb].chart_index - facts[fa].chart_index
        for fa in a.fact_ids
        for fb in b.fact_ids
    ]
    if gaps:
        # the closest chart pair decides; forward wins ties over backward
        gap = min(gaps, key=lambda g: (abs(g), g < 0))
        cost += _chart_gap_penalty(gap, cfg)
    return cost


def find_suitable_slide(
    story: Story, fact: DataFact, facts: Mapping[str, DataFact]
) -> str | None:
    """First slide whose facts all come from the fact's chart, with room."""
    for slide in story.slides:
        if len(slide.fact_ids) >= MAX_FACTS_PER_SLIDE:
            continue
        if all(facts[fid].chart_id == fact.chart_id for fid in slide.fact_ids):
            return slide.id
    return None


def generate_title(slide: Slide, facts: Mapping[str, DataFact]) -> str:
    topic = slide_topic(slide, facts)
    measure = topic.measure.base_column() if topic.measure is not None else None
    if measure and topic.dimension:
        return f"Findings about {measure} and {topic.dimension}"
    if measure:
        return f"Findings about {measure}"
    return "Findings"


def _refresh_titles(story: Story, facts: Mapping[str, DataFact]) -> None:
    for slide in story.slides:
        if not slide.title_user_edited:
            slide.title = generate_title(slide, facts)


def _fact_tie_key(fact: DataFact) -> tuple:
    return (fact.chart_index, FACT_TYPE_ORDER[fact.fact_type])


def _reorder_slide_facts(
    slide: Slide, facts: Mapping[str, DataFact], cfg: CostConfig
) -> None:
    # the optimizer is input-order stable, so presenting candidates by
    # (chart creation index, fact-type order) makes that the tie-break
    candidates = sorted(slide.fact_ids, key=lambda fid: _fact_tie_key(facts[fid]))
    slide.fact_ids = order_sequence(
        candidates,
        lambda x, y: fact_transition_cost(facts[x], facts[y], cfg),
        pinned=[fid for fid in slide.fact_ids if fid in slide.pinned_fact_ids],
    )


def _reorder_slides(story: Story, facts: Mapping[str, DataFact], cfg: CostConfig) -> None:
    def slide_tie_key(slide: Slide) -> tuple:
        return min(_fact_tie_key(facts[fid]) for fid in slide.fact_ids)

    candidates = sorted(story.slides, key=slide_tie_key)
    story.slides = order_sequence(
        candidates,
        lambda x, y: slide_transition_cost(x, y, cfg, facts),
        pinned=[s for s in story.slides if s.pinned],
    )


def insert_fact(
    story: Story,
    fact_id: str,
    facts: Mapping[str, DataFact],
    cfg: CostConfig,
) -> Story:
    """Place a newly selected fact and re-optimize order around the pins."""
    if fact_id in story.fact_ids():
        raise DuplicateFact(f"fact {fact_id!r} is already in the story")
    if fact_id not in facts:
        raise UnknownId(f"unknown fact: {fact_id!r}")
    story = story.clone()
    fact = facts[fact_id]
    target_id = find_suitable_slide(story, fact, facts)
    if target_id is None:
        slide = Slide(id=f"slide-{story.next_slide_number}", fact_ids=[fact_id])
        story.next_slide_number += 1
        story.slides.append(slide)
    else:
        slide = story.slide(target_id)
        slide.fact_ids.append(fact_id)
        _reorder_slide_facts(slide, facts, cfg)
    _reorder_slides(story, facts, cfg)
    _refresh_titles(story, facts)
    return story


def remove_fact(story: Story, fact_id: str) -> Story:
    story = story.clone()
    slide = story.slide_of(fact_id)
    slide.fact_ids.remove(fact_id)
    slide.pinned_fact_ids.discard(fact_id)
    if not slide.fact_ids:
        story.slides.remove(slide)
    return story


def move_slide(story: Story, slide_id: str, new_position: int) -> Story:
    story = story.clone()
    slide = story.slide(slide_id)
    if not 0 <= new_position < len(story.slides):
        raise InvalidPosition(f"slide position out of range: {new_position}")
    story.slides.remove(slide)
    story.slides.insert(new_position, slide)
    slide.pinned = True
    return story


def move_fact(
    story: Story,
    fact_id: str,
    target_slide_id: str,
    position: int,
    facts: Mapping[str, DataFact],
) -> Story:
    """Drag a fact to a position inside a (possibly different) slide.

    Manual moves may mix charts in one slide but never exceed the 3-fact cap.
    The moved fact's order becomes pinned.
    """
    story = story.clone()
    source = story.slide_of(fact_id)
    target = story.slide(target_slide_id)
    if target is not source and len(target.fact_ids) >= MAX_FACTS_PER_SLIDE:
        raise InvalidPosition(f"slide {target_slide_id!r} already holds 3 facts")
    if not 0 <= position <= len(target.fact_ids) - (1 if target is source else 0):
        raise InvalidPosition(f"fact position out of range: {position}")
    source.fact_ids.remove(fact_id)
    source.pinned_fact_ids.discard(fact_id)
    target.fact_ids.insert(position, fact_id)
    target.pinned_fact_ids.add(fact_id)
    if not source.fact_ids:
        story.slides.remove(source)
    _refresh_titles(story, facts)
    return story


def split_fact(
    story: Story, fact_id: str, facts: Mapping[str, DataFact]
) -> Story:
    """Gear action: pull the fact out of its slide into a new pinned slide."""
    story = story.clone()
    source = story.slide_of(fact_id)
    position = story.slides.index(source)
    source.fact_ids.remove(fact_id)
    source.pinned_fact_ids.discard(fact_id)
    slide = Slide(
        id=f"slide-{story.next_slide_number}",
        fact_ids=[fact_id],
        pinned=True,
    )
    story.next_slide_number += 1
    if not source.fact_ids:
        story.slides.remove(source)
        story.slides.insert(position, slide)
    else:
        story.slides.insert(position + 1, slide)
    _refresh_titles(story, facts)
    return story


def set_slide_title(story: Story, slide_id: str, title: str) -> Story:
    story = story.clone()
    slide = story.slide(slide_id)
    slide.title = title
    slide.title_user_edited = True
    return story


def story_to_dict(story: Story) -> dict:
    return {
        "slides": [
            {
                "id": s.id,
                "fact_ids": list(s.fact_ids),
                "title": s.title,
                "title_user_edited": s.title_user_edited,
                "pinned": s.pinned,
                "pinned_fact_ids": sorted(s.pinned_fact_ids),
            }
            for s in story.slides
        ],
        "next_slide_number": story.next_slide_number,
    }


def story_from_dict(doc: dict) -> Story:
    return Story(
        slides=[
            Slide(
                id=s["id"],
                fact_ids=list(s["fact_ids"]),
                title=s.get("title", "Findings"),
                title_user_edited=s.get("title_user_edited", False),
                pinned=s.get("pinned", False),
                pinned_fact_ids=set(s.get("pinned_fact_ids", [])),
            )
            for s in doc.get("slides", [])
        ],
        next_slide_number=doc.get("next_slide_number", 1),
    )
