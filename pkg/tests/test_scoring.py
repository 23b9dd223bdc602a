import random

import pytest

from storydeck.chartspec import AnalysisFrame, Measure
from storydeck.config import Config, MiningConfig
from storydeck.errors import MalformedInput
from storydeck.facts import (
    DataFact,
    FactType,
    ScoreBreakdown,
    impact_focus,
    mine_facts,
    score_fact,
    select_top_k,
    suitability,
)

from test_detectors import make_frame


def make_fact(fact_type=FactType.EXTREME, focus=("a",), significance=0.5,
              score=None, origin="mined"):
    return DataFact(
        subspace=(),
        measure=Measure("Sales", "sum"),
        dimension="Year",
        fact_type=fact_type,
        parameters={},
        focus=focus,
        chart_id="chart-1",
        chart_index=0,
        origin=origin,
        score=score or ScoreBreakdown.zero(),
        significance=significance,
    )


def test_impact_one_point_in_five_rows():
    """A single-value focus covering 1 of 5 dataset rows has impact 0.2."""
    frame = make_frame([1, 2, 3, 4, 5])
    assert frame.dataset_row_count == 5
    fact = make_fact(FactType.TURNING_POINT, focus=("2002",))
    assert impact_focus(fact, frame) == 0.2


def test_trend_impact_covers_whole_subspace():
    frame = make_frame([1, 2, 3, 4, 5])
    fact = make_fact(FactType.TREND, focus=frame.keys)
    assert impact_focus(fact, frame) == 1.0


def test_trend_line_suitability_anchor():
    assert abs(suitability(FactType.TREND, "line") - 42.0 / 57.0) < 1e-9


def test_suitability_floor_for_unknown_chart():
    cfg = MiningConfig()
    assert suitability(FactType.TREND, "hexbin", cfg) == cfg.suitability_floor


def test_score_of_unit_components_is_one():
    cfg = MiningConfig()
    assert cfg.weights == (0.5, 0.2, 0.3)
    w_sig, w_imp, w_suit = cfg.weights
    assert w_sig * 1 + w_imp * 1 + w_suit * 1 == 1.0


def test_score_fact_combines_components(mined_charts):
    _, frame, _ = mined_charts["chart-1"]
    cfg = MiningConfig()
    fact = make_fact(FactType.TREND, focus=frame.keys, significance=1.0)
    score = score_fact(fact, frame, cfg)
    assert score.total == pytest.approx(
        0.5 * 1.0 + 0.2 * score.impact + 0.3 * score.suitability
    )


def test_user_facts_score_zero(mined_charts):
    _, frame, _ = mined_charts["chart-1"]
    fact = make_fact(significance=0.9, origin="user")
    assert score_fact(fact, frame, MiningConfig()) == ScoreBreakdown.zero()


def test_zero_suitability_weight_makes_ranking_suitability_independent():
    """With w_suitability = 0, equal-significance/impact facts rank the same
    regardless of how the suitability table is skewed (argmax invariance)."""
    cfg = MiningConfig(weights=(0.7, 0.3, 0.0))
    frame = make_frame([1, 2, 3, 4, 5], chart_type="line")

    # same significance and focus size, very different suitability rows
    contenders = [
        make_fact(FactType.EXTREME, focus=("2001",), significance=0.8),
        make_fact(FactType.MAJORITY, focus=("2002",), significance=0.8),
        make_fact(FactType.OUTLIER, focus=("2003",), significance=0.8),
    ]
    scored = [score_fact(f, frame, cfg) for f in contenders]
    assert len({s.total for s in scored}) == 1  # suitability cannot split them

    # and the argmax tracks significance only
    contenders[1] = make_fact(FactType.MAJORITY, focus=("2002",), significance=0.9)
    scored = [score_fact(f, frame, cfg) for f in contenders]
    assert max(range(3), key=lambda i: scored[i].total) == 1


def test_weights_must_sum_to_one():
    with pytest.raises(MalformedInput):
        MiningConfig(weights=(0.5, 0.2, 0.2))
    with pytest.raises(MalformedInput):
        MiningConfig(weights=(1.2, -0.1, -0.1))


def random_candidates(rng):
    types = list(FactType)
    n = rng.randint(1, 20)
    out = []
    for i in range(n):
        total = rng.random()
        fact_type = rng.choice(types)
        out.append(make_fact(
            fact_type,
            focus=(f"v{i}",),
            significance=total,
            score=ScoreBreakdown(total, 0.0, 0.0, total),
        ))
    return out


def test_top_k_diversity_1000_random_sets():
    """The first min(k, #types) picks always have pairwise distinct types and
    the output is a prefix-monotone function of k."""
    rng = random.Random(7)
    for _ in range(1000):
        candidates = random_candidates(rng)
        types_present = {f.fact_type for f in candidates}
        k = rng.randint(1, 10)
        picked = select_top_k(candidates, k)
        assert len(picked) == min(k, len(candidates))

        head = picked[: min(k, len(types_present))]
        assert len({f.fact_type for f in head}) == len(head)

        # prefix monotone: smaller k is a prefix of larger k
        for smaller in range(1, k):
            assert select_top_k(candidates, smaller) == picked[:smaller]


def test_mined_facts_sorted_within_diversity(mined_charts):
    _, _, ills = mined_charts["chart-1"]
    totals = [ill.fact.score.total for ill in ills]
    types = [ill.fact.fact_type for ill in ills]
    assert len(set(types)) == len(types)  # the BMW chart has 4 distinct types
    assert totals == sorted(totals, reverse=True)


def test_mine_facts_respects_k():
    frame = make_frame([1, 5, 15, 14, 30, 2])
    cfg = Config().mining
    assert len(mine_facts(frame, cfg)) <= cfg.k
