import pytest
from hypothesis import given, strategies as st

from storydeck.chartspec import Measure, parse_chart_spec, spec_to_dict
from storydeck.errors import FocusNotInChart, MissingParameter
from storydeck.facts import DataFact, FactType
from storydeck.illustrate import (
    PAIR_LINK,
    POINT_HIGHLIGHT,
    TREND_LINE,
    annotation_for,
    apply_user_highlight,
    describe,
    embellish,
    format_ratio,
    render_subspace,
    strip_annotations,
)
from storydeck.tabular import Predicate

from conftest import load_chart_doc


def fact_of(fact_type, focus, parameters=None, measure=Measure("Sales", "sum"),
            dimension="Year", subspace=()):
    return DataFact(
        subspace=subspace,
        measure=measure,
        dimension=dimension,
        fact_type=fact_type,
        parameters=parameters or {},
        focus=focus,
        chart_id="chart-1",
        chart_index=0,
    )


# --- template goldens: one byte-exact string per fact type -----------------

GOLDENS = [
    (
        fact_of(FactType.MAJORITY, ("compact",), {"ratio": 0.5},
                dimension="Category"),
        "The category of compact accounts for the significant amount 50.0% of Sales.",
    ),
    (
        fact_of(FactType.EXTREME, ("2007",), {"polarity": "max"}),
        "Year has the maximum Sales at 2007.",
    ),
    (
        fact_of(FactType.EXTREME, ("sporty",), {"polarity": "min"},
                dimension="Category"),
        "Category has the minimum Sales at sporty.",
    ),
    (
        fact_of(FactType.OUTLIER, ("BMW X3",), dimension="Model"),
        "Model has an outstanding Sales at BMW X3.",
    ),
    (
        fact_of(FactType.TURNING_POINT, ("2009",)),
        "2009 is a turning point of Sales over the Year.",
    ),
    (
        fact_of(FactType.DIFFERENCE, ("2008", "2009"), {"ratio": 2.0}),
        "The Sales of 2009 increases 200.0% compared with 2008.",
    ),
    (
        fact_of(FactType.DIFFERENCE, ("2009", "2010"), {"ratio": -0.25}),
        "The Sales of 2010 decreases 25.0% compared with 2009.",
    ),
    (
        fact_of(FactType.TREND, ("2007", "2008", "2009"),
                {"direction": "increasing"}),
        "The Sales increases over the Year.",
    ),
    (
        fact_of(FactType.TREND, ("2007", "2008", "2009"),
                {"direction": "decreasing"}, measure=Measure("US Gross", "mean")),
        "The Mean of US Gross decreases over the Year.",
    ),
]


@pytest.mark.parametrize("fact,expected", GOLDENS,
                         ids=[g[1][:40] for g in GOLDENS])
def test_template_goldens(fact, expected):
    assert describe(fact) == expected


def test_subspace_prefix():
    fact = fact_of(
        FactType.TURNING_POINT, ("2009",),
        subspace=(Predicate("Brand", "eq", "BMW"),),
    )
    assert describe(fact, include_subspace=True) == (
        "For Brand = BMW, 2009 is a turning point of Sales over the Year."
    )
    assert describe(fact) == "2009 is a turning point of Sales over the Year."


def test_render_subspace_ops():
    fact = fact_of(
        FactType.OUTLIER, ("x",),
        subspace=(
            Predicate("Year", "gte", 2009),
            Predicate("Brand", "in", ["BMW", "Audi"]),
        ),
    )
    assert render_subspace(fact) == "Year >= 2009, Brand in (BMW, Audi)"


def test_missing_parameters_rejected():
    with pytest.raises(MissingParameter):
        describe(fact_of(FactType.MAJORITY, ("a",)))
    with pytest.raises(MissingParameter):
        describe(fact_of(FactType.EXTREME, ("a",), {"polarity": "widest"}))
    with pytest.raises(MissingParameter):
        describe(fact_of(FactType.DIFFERENCE, ("a",), {"ratio": 1.0}))
    with pytest.raises(MissingParameter):
        describe(fact_of(FactType.TREND, (), {"direction": "sideways"}))


def test_format_ratio():
    assert format_ratio(0.5) == "50.0%"
    assert format_ratio(-0.25) == "25.0%"
    assert format_ratio(2.0) == "200.0%"
    assert format_ratio(1 / 3) == "33.3%"


def test_annotation_kinds():
    assert annotation_for(fact_of(FactType.EXTREME, ("a",), {"polarity": "max"}))["kind"] == POINT_HIGHLIGHT
    assert annotation_for(fact_of(FactType.DIFFERENCE, ("a", "b"), {"ratio": 1.0}))["kind"] == PAIR_LINK
    trend = annotation_for(fact_of(FactType.TREND, ("a",), {"direction": "increasing", "slope": 2.0, "intercept": 1.0}))
    assert trend["kind"] == TREND_LINE
    assert trend["slope"] == 2.0


def test_embellish_strip_roundtrip_all_types(car_dataset):
    """strip(embellish(spec, fact)) == spec_to_dict(spec), bitwise."""
    spec = parse_chart_spec(load_chart_doc("bmw_year_line.json"), car_dataset)
    original = spec_to_dict(spec)
    samples = [fact for fact, _ in GOLDENS]
    for fact in samples:
        embellished = embellish(spec, fact)
        assert "annotations" in embellished
        assert strip_annotations(embellished) == original


def test_embellish_appends_rather_than_replaces(car_dataset):
    spec = parse_chart_spec(load_chart_doc("bmw_year_line.json"), car_dataset)
    one = embellish(spec, fact_of(FactType.EXTREME, ("2007",), {"polarity": "max"}))
    two = embellish(one, fact_of(FactType.TURNING_POINT, ("2009",)))
    assert len(two["annotations"]) == 2


def test_embellish_checks_focus_against_frame(mined_charts):
    spec, frame, _ = mined_charts["chart-1"]
    fact = fact_of(FactType.EXTREME, ("2035",), {"polarity": "max"})
    with pytest.raises(FocusNotInChart):
        embellish(spec, fact, frame)


def test_apply_user_highlight(mined_charts):
    _, frame, ills = mined_charts["chart-1"]
    ill = ills[0]
    moved = apply_user_highlight(ill, "2009", None, frame)
    assert moved.fact.origin == "user"
    assert moved.fact.score.total == 0.0
    assert moved.fact.focus == ("2009",)
    annotations = moved.embellished_spec["annotations"]
    assert len(annotations) == 1
    assert annotations[0]["kind"] == POINT_HIGHLIGHT
    assert annotations[0]["targets"] == ["2009"]


def test_apply_user_highlight_rejects_unknown_point(mined_charts):
    _, frame, ills = mined_charts["chart-1"]
    with pytest.raises(FocusNotInChart):
        apply_user_highlight(ills[0], "2035", None, frame)


@given(st.floats(min_value=-100, max_value=100, allow_nan=False))
def test_ratio_always_unsigned_percent(ratio):
    text = format_ratio(ratio)
    assert text.endswith("%")
    assert not text.startswith("-")
