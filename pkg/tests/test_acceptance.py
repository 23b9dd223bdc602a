"""Acceptance suite: every top-level behavioural guarantee of the package,
one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` for the full report.
"""

import json
import random
import time

import numpy as np
import pytest
from click.testing import CliRunner

import oracles
from conftest import CHART_FILES, fixture_path
from test_detectors import make_frame

from storydeck.chartspec import Measure, parse_chart_spec, spec_to_dict
from storydeck.cli import main as cli_main
from storydeck.config import MiningConfig
from storydeck.facts import (
    DataFact,
    FactType,
    ScoreBreakdown,
    detect_difference,
    detect_extreme,
    detect_majority,
    detect_outlier,
    detect_trend,
    detect_turning_point,
    impact_focus,
    score_fact,
    select_top_k,
    suitability,
)
from storydeck.illustrate import describe, embellish, strip_annotations
from storydeck.ordering import order_indices
from storydeck.pipeline import mine_chart
from storydeck.story import Story, insert_fact, move_slide
from storydeck.tabular import load_dataset


def report(name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    line = f"[{status}] {name}"
    if detail:
        line += f" — {detail}"
    print(line)
    assert ok, line


# 1 -------------------------------------------------------------------------

def test_difference_significance_worked_example():
    frame = make_frame([1, 5, 15, 14])
    start = time.perf_counter()
    facts = detect_difference(frame)
    elapsed = time.perf_counter() - start

    ratios = {f.focus: abs(f.parameters["ratio"]) for f in facts}
    sig = {f.focus: f.significance for f in facts}
    ok = (
        ratios[("2000", "2001")] == pytest.approx(4.0)
        and ratios[("2001", "2002")] == pytest.approx(2.0)
        and ratios[("2002", "2003")] == pytest.approx(0.0667, abs=5e-4)
        and abs(sig[("2001", "2002")] - 0.49) <= 0.005
        and elapsed < 1e-3
    )
    report(
        "difference significance on (1, 5, 15, 14)",
        ok,
        f"sig(5,15)={sig[('2001', '2002')]:.4f}, {elapsed * 1e6:.0f}µs",
    )


# 2 -------------------------------------------------------------------------

def test_impact_of_single_point_in_five_rows():
    frame = make_frame([3, 1, 4, 1, 5])
    fact = DataFact(
        subspace=(), measure=Measure("Sales", "sum"), dimension="Year",
        fact_type=FactType.EXTREME, parameters={"polarity": "max"},
        focus=("2004",), chart_id="c", chart_index=0,
    )
    value = impact_focus(fact, frame)
    report("impact of a 1-point focus in a 5-row dataset", value == 0.2,
           f"impact={value}")


# 3 -------------------------------------------------------------------------

def test_trend_line_suitability():
    value = suitability(FactType.TREND, "line")
    report("suitability(Trend, line) = 42/57", abs(value - 42.0 / 57.0) < 1e-9,
           f"value={value:.10f}")


# 4 -------------------------------------------------------------------------

def test_score_weighting():
    cfg = MiningConfig()
    w_sig, w_imp, w_suit = cfg.weights
    unit = w_sig * 1.0 + w_imp * 1.0 + w_suit * 1.0
    ok = cfg.weights == (0.5, 0.2, 0.3) and unit == 1.0

    # argmax invariance: with w_suitability = 0, ranking ignores suitability
    cfg0 = MiningConfig(weights=(0.7, 0.3, 0.0))
    frame = make_frame([1, 2, 3, 4, 5], chart_type="line")
    rng = random.Random(3)
    for _ in range(200):
        sigs = [rng.random() for _ in range(4)]
        # Trend impact spans the whole series; the others share the
        # single-point focus, keeping impact equal across the candidates.
        types = rng.sample([t for t in FactType if t is not FactType.TREND], 4)
        facts = [
            DataFact(subspace=(), measure=frame.measure, dimension="Year",
                     fact_type=t, parameters={}, focus=(frame.keys[0],),
                     chart_id="c", chart_index=0, significance=s)
            for t, s in zip(types, sigs)
        ]
        totals = [score_fact(f, frame, cfg0).total for f in facts]
        ok = ok and max(range(4), key=totals.__getitem__) == max(
            range(4), key=sigs.__getitem__
        )
    report("score weights (0.5, 0.2, 0.3); w_suit=0 argmax invariance", ok,
           f"score(1,1,1)={unit}")


# 5 -------------------------------------------------------------------------

def test_top_k_diversity_and_prefix_monotonicity():
    rng = random.Random(5)
    ok = True
    for _ in range(1000):
        n = rng.randint(1, 25)
        candidates = []
        for i in range(n):
            total = rng.random()
            candidates.append(DataFact(
                subspace=(), measure=Measure("m", "sum"), dimension="d",
                fact_type=rng.choice(list(FactType)), parameters={},
                focus=(f"v{i}",), chart_id="c", chart_index=0,
                score=ScoreBreakdown(total, 0, 0, total), significance=total,
            ))
        types_present = {f.fact_type for f in candidates}
        k = rng.randint(1, 10)
        picked = select_top_k(candidates, k)
        head = picked[: min(k, len(types_present))]
        ok = ok and len({f.fact_type for f in head}) == len(head)
        for smaller in range(1, k):
            ok = ok and select_top_k(candidates, smaller) == picked[:smaller]
    report("top-k diversity + prefix monotonicity over 1,000 sets", ok)


# 6 -------------------------------------------------------------------------

def test_ordering_oracle_200_instances():
    rng = random.Random(6)
    start = time.perf_counter()
    ok = True
    for _ in range(200):
        n = rng.randint(2, 7)
        cost = [[0.0 if i == j else rng.uniform(0, 10) for j in range(n)]
                for i in range(n)]
        got = order_indices(np.array(cost))
        want_cost, _ = oracles.oracle_best_order(n, cost)
        ok = ok and abs(oracles.path_cost(got, cost) - want_cost) < 1e-6
    elapsed = time.perf_counter() - start
    report("ordering equals exhaustive-permutation oracle (200 × n ≤ 7)",
           ok and elapsed < 30.0, f"{elapsed:.2f}s")


# 7 -------------------------------------------------------------------------

def test_pin_preservation_100_interleavings(all_facts):
    data_facts = {fid: ill.fact for fid, ill in all_facts.items()}
    fact_ids = list(all_facts)
    rng = random.Random(7)
    ok = True
    for _ in range(100):
        story = Story()
        pinned: list[str] = []
        for fid in rng.sample(fact_ids, rng.randint(3, len(fact_ids))):
            if story.slides and rng.random() < 0.4:
                slide_id = rng.choice(story.slides).id
                story = move_slide(story, slide_id, rng.randrange(len(story.slides)))
                pinned = [s.id for s in story.slides if s.pinned]
            story = insert_fact(story, fid, data_facts, _costs())
            ok = ok and [s.id for s in story.slides if s.pinned] == pinned
    report("pinned relative order stable over 100 interleavings", ok)


def _costs():
    from storydeck.config import CostConfig
    return CostConfig()


# 8 -------------------------------------------------------------------------

def test_template_goldens():
    cases = [
        (FactType.MAJORITY, ("compact",), {"ratio": 0.5}, "Category",
         "The category of compact accounts for the significant amount 50.0% of Sales."),
        (FactType.EXTREME, ("2007",), {"polarity": "max"}, "Year",
         "Year has the maximum Sales at 2007."),
        (FactType.OUTLIER, ("BMW X3",), {}, "Model",
         "Model has an outstanding Sales at BMW X3."),
        (FactType.TURNING_POINT, ("2009",), {}, "Year",
         "2009 is a turning point of Sales over the Year."),
        (FactType.DIFFERENCE, ("2008", "2009"), {"ratio": 2.0}, "Year",
         "The Sales of 2009 increases 200.0% compared with 2008."),
        (FactType.TREND, ("2007", "2008"), {"direction": "increasing"}, "Year",
         "The Sales increases over the Year."),
    ]
    ok = True
    for fact_type, focus, params, dimension, expected in cases:
        fact = DataFact(
            subspace=(), measure=Measure("Sales", "sum"), dimension=dimension,
            fact_type=fact_type, parameters=params, focus=focus,
            chart_id="c", chart_index=0,
        )
        ok = ok and describe(fact) == expected
    report("describe() byte-matches the six template goldens", ok)


# 9 -------------------------------------------------------------------------

def test_embellishment_roundtrip(car_dataset, all_facts, mined_charts):
    ok = True
    for chart_id, (spec, frame, _) in mined_charts.items():
        original = spec_to_dict(spec)
        for ill in all_facts.values():
            if ill.fact.chart_id != chart_id:
                continue
            ok = ok and strip_annotations(embellish(spec, ill.fact, frame)) == original
    report("strip(embellish(spec, fact)) == spec, bitwise, all fixture facts", ok)


# 10 ------------------------------------------------------------------------

def test_end_to_end_scenario(tmp_path):
    """CLI replay of the car-sales walkthrough: mine the five charts, select
    the analyst's facts, organize, export; the deck must drill down from the
    yearly trends into the 2009 category/model detail."""
    runner = CliRunner()
    dataset = fixture_path("car_sales.csv")
    schema = fixture_path("car_sales.schema.json")
    charts = [fixture_path("charts", n) for n in CHART_FILES]

    mined = runner.invoke(cli_main, ["mine", dataset, *charts,
                                     "--schema", schema, "--k", "4"])
    assert mined.exit_code == 0, mined.output
    facts = json.loads(mined.output)

    def pick(chart, ftype, polarity=None):
        for f in facts:
            if (f["chart_id"] == chart and f["fact_type"] == ftype
                    and (polarity is None or f["parameters"].get("polarity") == polarity)):
                return f["id"]
        raise KeyError((chart, ftype))

    selection = [
        pick("bmw_year_line", "Trend"),
        pick("bmw_year_line", "TurningPoint"),
        pick("all_year_line", "Trend"),
        pick("all_year_line", "TurningPoint"),
        pick("category_2009_bar", "Extreme", "max"),
        pick("category_2009_bar", "Extreme", "min"),
        pick("model_2009_bar", "Extreme", "max"),
        pick("model_2009_bar", "Extreme", "min"),
        pick("model_mean_bar", "Extreme", "min"),
    ]
    sel_path = tmp_path / "selection.json"
    sel_path.write_text(json.dumps(selection))
    story_path = tmp_path / "story.json"
    organized = runner.invoke(cli_main, [
        "organize", dataset, *[a for c in charts for a in ("--chart", c)],
        "--selection", str(sel_path), "--schema", schema, "--k", "4",
        "-o", str(story_path),
    ])
    assert organized.exit_code == 0, organized.output

    exported = runner.invoke(cli_main, ["export", str(story_path),
                                        "--format", "json"])
    assert exported.exit_code == 0
    deck = json.loads(exported.output)

    slides = deck["slides"]
    year_charts = {"bmw_year_line", "all_year_line"}
    positions = {
        "trend": [i for i, s in enumerate(slides)
                  if {b["chart_id"] for b in s["blocks"]} <= year_charts],
        "drill": [i for i, s in enumerate(slides)
                  if not ({b["chart_id"] for b in s["blocks"]} <= year_charts)],
    }
    first_trend = slides[min(positions["trend"])]
    ok = (
        len(slides) == 5
        and max(positions["trend"]) < min(positions["drill"])
        and first_trend["title"] == "Findings about Sales and Year"
    )
    report("end-to-end scenario: 5 slides, drill-downs last, trend title", ok,
           f"order={[s['title'] for s in slides]}")


# 11 ------------------------------------------------------------------------

def test_performance_at_desk_scale():
    rng = random.Random(11)
    brands = [f"brand{i}" for i in range(20)]
    rows = [
        {
            "c0": rng.choice(brands),
            **{f"c{j}": rng.uniform(0, 100) for j in range(1, 9)},
            "year": 2000 + i % 50,
        }
        for i in range(10_000)
    ]
    dataset = load_dataset(json.dumps(rows), "json-records", dataset_id="big")
    doc = {"mark": "line",
           "encoding": {"x": {"field": "year"},
                        "y": {"field": "c1", "aggregate": "sum"}}}
    start = time.perf_counter()
    _, _, ills = mine_chart(dataset, doc, "big-chart", 0)
    mining = time.perf_counter() - start

    order_indices(np.random.default_rng(1).random((4, 4)))  # warm the JIT
    cost = np.random.default_rng(2).random((12, 12))
    start = time.perf_counter()
    order_indices(cost)
    ordering = time.perf_counter() - start

    ok = mining < 1.0 and ordering < 2.0 and len(ills) > 0
    report("10,000×10 mining < 1 s; exact ordering n=12 < 2 s", ok,
           f"mining={mining * 1e3:.0f}ms, ordering={ordering * 1e3:.0f}ms")


# 12 ------------------------------------------------------------------------

def test_detector_oracle_equivalence_500():
    rng = random.Random(12)
    checked = 0
    ok = True
    for _ in range(500):
        n = rng.randint(2, 15)
        values = [rng.uniform(-100, 100) for _ in range(n)]
        if rng.random() < 0.3:
            values = [abs(v) for v in values]
        frame = make_frame(values)
        bar_frame = make_frame(values, kind="nominal", chart_type="bar")

        got = {f.parameters["polarity"]: f.significance for f in detect_extreme(frame)}
        want = {p: s for p, (_, s) in oracles.oracle_extreme(values).items()}
        ok = ok and got.keys() == want.keys() and all(
            abs(got[p] - want[p]) < 1e-9 for p in want
        )

        got_o = {f.focus[0]: f.significance for f in detect_outlier(frame)}
        want_o = {frame.keys[i]: s for i, s in oracles.oracle_outlier(values).items()}
        ok = ok and got_o.keys() == want_o.keys() and all(
            abs(got_o[k] - want_o[k]) < 1e-9 for k in want_o
        )

        got_t = detect_trend(frame)
        want_t = oracles.oracle_trend(values)
        ok = ok and (bool(got_t) == (want_t is not None)) and (
            not got_t or abs(got_t[0].significance - want_t[1]) < 1e-9
        )

        got_tp = detect_turning_point(frame)
        want_tp = oracles.oracle_turning_point(values)
        ok = ok and (bool(got_tp) == (want_tp is not None)) and (
            not got_tp or abs(got_tp[0].significance - want_tp[1]) < 1e-9
        )

        got_d = {frame.keys.index(f.focus[0]): f.significance
                 for f in detect_difference(frame)}
        want_d = oracles.oracle_difference(values)
        ok = ok and got_d.keys() == want_d.keys() and all(
            abs(got_d[i] - want_d[i]) < 1e-9 for i in want_d
        )

        got_m = detect_majority(bar_frame)
        want_m = oracles.oracle_majority(values)
        ok = ok and (bool(got_m) == (want_m is not None)) and (
            not got_m or abs(got_m[0].significance - want_m[1]) < 1e-9
        )
        checked += 1
    report("six detectors match naive oracles on 500 random series",
           ok and checked == 500)
