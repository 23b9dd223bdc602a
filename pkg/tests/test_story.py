import random

import pytest

from storydeck.config import Config, CostConfig
from storydeck.errors import DuplicateFact, InvalidPosition, UnknownId
from storydeck.story import (
    MAX_FACTS_PER_SLIDE,
    Story,
    fact_transition_cost,
    find_suitable_slide,
    generate_title,
    insert_fact,
    move_fact,
    move_slide,
    remove_fact,
    set_slide_title,
    slide_topic,
    slide_transition_cost,
    split_fact,
    story_from_dict,
    story_to_dict,
)

COSTS = CostConfig()


def scenario_selection(all_facts):
    """The usage-scenario picks, in the order the analyst makes them."""
    def pick(chart, ftype, polarity=None):
        for fid, ill in all_facts.items():
            fact = ill.fact
            if (fact.chart_id == chart and fact.fact_type.value == ftype
                    and (polarity is None or fact.parameters.get("polarity") == polarity)):
                return fid
        raise KeyError((chart, ftype, polarity))

    return [
        pick("chart-1", "Trend"),
        pick("chart-1", "TurningPoint"),
        pick("chart-2", "Trend"),
        pick("chart-2", "TurningPoint"),
        pick("chart-3", "Extreme", "max"),
        pick("chart-3", "Extreme", "min"),
        pick("chart-4", "Extreme", "max"),
        pick("chart-4", "Extreme", "min"),
        pick("chart-5", "Extreme", "min"),
    ]


@pytest.fixture()
def data_facts(all_facts):
    return {fid: ill.fact for fid, ill in all_facts.items()}


@pytest.fixture()
def scenario_story(all_facts, data_facts):
    story = Story()
    for fid in scenario_selection(all_facts):
        story = insert_fact(story, fid, data_facts, COSTS)
    return story


def test_scenario_builds_five_slides(scenario_story):
    assert len(scenario_story.slides) == 5
    assert all(1 <= len(s.fact_ids) <= MAX_FACTS_PER_SLIDE
               for s in scenario_story.slides)


def test_scenario_drilldowns_follow_trend_slides(scenario_story, data_facts):
    """The category/model slides (Year=2009 drill-downs) come after both
    yearly-trend slides."""
    dims = [
        {data_facts[fid].dimension for fid in slide.fact_ids}
        for slide in scenario_story.slides
    ]
    year_positions = [i for i, d in enumerate(dims) if d == {"Year"}]
    drill_positions = [i for i, d in enumerate(dims) if d != {"Year"}]
    assert max(year_positions) < min(drill_positions)


def test_scenario_titles(scenario_story):
    titles = [s.title for s in scenario_story.slides]
    assert titles[0] == "Findings about Sales and Year"
    assert titles[1] == "Findings about Sales and Year"
    assert "Findings about Sales and Category" in titles
    assert "Findings about Sales and Model" in titles


def test_suitable_slide_same_chart_with_room(data_facts):
    story = Story()
    chart1 = [fid for fid, f in data_facts.items() if f.chart_id == "chart-1"]
    story = insert_fact(story, chart1[0], data_facts, COSTS)
    assert find_suitable_slide(story, data_facts[chart1[1]], data_facts) == story.slides[0].id

    chart2 = [fid for fid, f in data_facts.items() if f.chart_id == "chart-2"]
    assert find_suitable_slide(story, data_facts[chart2[0]], data_facts) is None


def test_auto_slides_hold_at_most_three(data_facts):
    story = Story()
    chart1 = [fid for fid, f in data_facts.items() if f.chart_id == "chart-1"]
    for fid in chart1:  # k=4 mined facts from one chart
        story = insert_fact(story, fid, data_facts, COSTS)
    assert [len(s.fact_ids) for s in story.slides] == [3, 1]
    for slide in story.slides:
        assert len({data_facts[fid].chart_id for fid in slide.fact_ids}) == 1


def test_duplicate_insert_rejected(scenario_story, data_facts):
    fid = scenario_story.slides[0].fact_ids[0]
    with pytest.raises(DuplicateFact):
        insert_fact(scenario_story, fid, data_facts, COSTS)


def test_insert_unknown_fact(data_facts):
    with pytest.raises(UnknownId):
        insert_fact(Story(), "nope", data_facts, COSTS)


def test_insertion_is_idempotent_under_reoptimization(scenario_story, data_facts):
    """Removing and re-adding the last fact puts the story back in the same
    shape: the optimum is stable."""
    last = scenario_story.slides[-1].fact_ids[-1]
    rebuilt = insert_fact(remove_fact(scenario_story, last), last, data_facts, COSTS)
    assert [s.fact_ids for s in rebuilt.slides] == [s.fact_ids for s in scenario_story.slides]


def test_remove_fact_drops_empty_slide(scenario_story):
    lone = next(s for s in scenario_story.slides if len(s.fact_ids) == 1)
    trimmed = remove_fact(scenario_story, lone.fact_ids[0])
    assert lone.id not in [s.id for s in trimmed.slides]


def test_move_slide_pins_it(scenario_story):
    slide_id = scenario_story.slides[-1].id
    moved = move_slide(scenario_story, slide_id, 0)
    assert moved.slides[0].id == slide_id
    assert moved.slides[0].pinned
    with pytest.raises(InvalidPosition):
        move_slide(scenario_story, slide_id, 99)


def test_pinned_relative_order_survives_insertions(scenario_story, all_facts, data_facts):
    """Pins preserve relative order across automatic reorganization."""
    last = scenario_story.slides[-1].id
    first = scenario_story.slides[0].id
    story = move_slide(scenario_story, last, 0)
    story = move_slide(story, first, len(story.slides) - 1)
    spare = next(fid for fid in all_facts if fid not in story.fact_ids())
    story = insert_fact(story, spare, data_facts, COSTS)
    order = [s.id for s in story.slides]
    assert order.index(last) < order.index(first)


def test_move_fact_across_slides(scenario_story, data_facts):
    source = scenario_story.slides[0]
    target = scenario_story.slides[1]
    fid = source.fact_ids[0]
    story = move_fact(scenario_story, fid, target.id, 0, data_facts)
    assert story.slide(target.id).fact_ids[0] == fid
    assert fid in story.slide(target.id).pinned_fact_ids
    # manual merges may mix charts but never exceed the cap
    assert len(story.slide(target.id).fact_ids) <= MAX_FACTS_PER_SLIDE


def test_move_fact_respects_cap(data_facts):
    story = Story()
    chart1 = [fid for fid, f in data_facts.items() if f.chart_id == "chart-1"]
    for fid in chart1:
        story = insert_fact(story, fid, data_facts, COSTS)
    full, single = story.slides
    with pytest.raises(InvalidPosition):
        move_fact(story, single.fact_ids[0], full.id, 0, data_facts)


def test_split_fact_makes_new_pinned_slide(scenario_story, data_facts):
    slide = next(s for s in scenario_story.slides if len(s.fact_ids) > 1)
    fid = slide.fact_ids[0]
    story = split_fact(scenario_story, fid, data_facts)
    fresh = story.slide_of(fid)
    assert fresh.id != slide.id
    assert fresh.pinned
    assert fresh.fact_ids == [fid]


def test_user_title_never_overwritten(scenario_story, all_facts, data_facts):
    slide_id = scenario_story.slides[0].id
    story = set_slide_title(scenario_story, slide_id, "My title")
    spare = next(fid for fid in all_facts if fid not in story.fact_ids())
    story = insert_fact(story, spare, data_facts, COSTS)
    assert story.slide(slide_id).title == "My title"
    assert story.slide(slide_id).title_user_edited


def test_generate_title_fallbacks(data_facts, scenario_story):
    slide = scenario_story.slides[0]
    assert generate_title(slide, data_facts) == "Findings about Sales and Year"
    from storydeck.story import Slide
    assert generate_title(Slide(id="s", fact_ids=[]), data_facts) == "Findings"


def test_topic_intersection(data_facts, scenario_story):
    slide = scenario_story.slides[0]  # trend + turning point of the BMW chart
    topic = slide_topic(slide, data_facts)
    assert topic.measure.column == "Sales"
    assert topic.dimension == "Year"
    assert topic.fact_type is None  # types differ
    assert topic.focus is None


def test_fact_cost_zero_for_identical(data_facts):
    fact = next(iter(data_facts.values()))
    assert fact_transition_cost(fact, fact, COSTS) == 0.0


def test_fact_cost_single_type_term(data_facts):
    from dataclasses import replace
    from storydeck.facts import FactType
    a = next(iter(data_facts.values()))
    b = replace(a, fact_type=FactType.OUTLIER if a.fact_type != FactType.OUTLIER
                else FactType.EXTREME)
    assert fact_transition_cost(a, b, COSTS) == pytest.approx(COSTS.fact_type_change)


def test_costs_are_asymmetric(data_facts):
    """Drilling into a subspace is cheaper than rolling back out."""
    overview = next(f for f in data_facts.values()
                    if f.chart_id == "chart-2")  # no filters
    drilled = next(f for f in data_facts.values()
                   if f.chart_id == "chart-1")  # Brand = BMW
    down = fact_transition_cost(overview, drilled, COSTS)
    up = fact_transition_cost(drilled, overview, COSTS)
    assert down != up


def test_slide_cost_half_weight_for_absent_topic(data_facts, scenario_story):
    mixed = scenario_story.slides[0]       # topic fact_type is None
    other = scenario_story.slides[2]
    cost = slide_transition_cost(mixed, other, COSTS, data_facts)
    assert cost > 0


def test_pin_preservation_100_interleavings(all_facts, data_facts):
    """Randomized manual moves interleaved with automatic insertions never
    change the relative order of pinned slides."""
    rng = random.Random(21)
    fact_ids = list(all_facts)
    for _ in range(100):
        story = Story()
        pool = rng.sample(fact_ids, rng.randint(3, len(fact_ids)))
        pinned_sequence: list[str] = []
        for fid in pool:
            if story.slides and rng.random() < 0.4:
                idx = rng.randrange(len(story.slides))
                slide_id = story.slides[idx].id
                story = move_slide(story, slide_id, rng.randrange(len(story.slides)))
                pinned_sequence = [s.id for s in story.slides if s.pinned]
            story = insert_fact(story, fid, data_facts, COSTS)
            now_pinned = [s.id for s in story.slides if s.pinned]
            assert now_pinned == pinned_sequence


def test_story_dict_roundtrip(scenario_story):
    doc = story_to_dict(scenario_story)
    rebuilt = story_from_dict(doc)
    assert story_to_dict(rebuilt) == doc
