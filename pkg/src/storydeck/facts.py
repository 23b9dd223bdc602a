"""Data-fact detection, scoring, and diverse top-k selection.

A data fact is the seven-attribute unit of a story: subspace, measure,
dimension, type, parameters, focus, and score.  Six detectors search an
analysis frame for candidates; each candidate gets a significance in [0,1],
an impact (fraction of dataset rows its focus covers), and a chart-type
suitability, combined by a weighted sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any

from .chartspec import AnalysisFrame, Measure
from .config import MiningConfig
from .tabular import Predicate

ORDERED_DIMENSION_KINDS = ("temporal", "quantitative")


class FactType(Enum):
    MAJORITY = "Majority"
    EXTREME = "Extreme"
    OUTLIER = "Outlier"
    TURNING_POINT = "TurningPoint"
    DIFFERENCE = "Difference"
    TREND = "Trend"


FACT_TYPE_ORDER = {t: i for i, t in enumerate(FactType)}


@dataclass(frozen=True)
class ScoreBreakdown:
    significance: float
    impact: float
    suitability: float
    total: float

    @classmethod
    def zero(cls) -> "ScoreBreakdown":
        return cls(0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class DataFact:
    subspace: tuple[Predicate, ...]
    measure: Measure
    dimension: str
    fact_type: FactType
    parameters: dict[str, Any]
    focus: tuple[Any, ...]
    chart_id: str
    chart_index: int
    origin: str = "mined"  # "mined" | "user"
    score: ScoreBreakdown = field(default_factory=ScoreBreakdown.zero)
    significance: float = 0.0  # raw significance before weighting

    def sort_key(self) -> tuple:
        return (FACT_TYPE_ORDER[self.fact_type], tuple(str(v) for v in self.focus))


def _fact(frame: AnalysisFrame, fact_type: FactType, significance: float,
          parameters: dict[str, Any], focus: tuple[Any, ...]) -> DataFact:
    return DataFact(
        subspace=frame.subspace,
        measure=frame.measure,
        dimension=frame.dimension,
        fact_type=fact_type,
        parameters=parameters,
        focus=focus,
        chart_id=frame.chart_id,
        chart_index=frame.chart_index,
        significance=significance,
    )


def detect_extreme(frame: AnalysisFrame) -> list[DataFact]:
    """At most one maximum and one minimum fact.

    Significance is the gap to the polarity-appropriate runner-up, normalized
    by the series spread; a constant series yields nothing.
    """
    values = frame.values
    if len(values) < 2:
        return []
    spread = max(values) - min(values)
    if spread == 0:
        return []
    facts = []
    ordered = sorted(range(len(values)), key=lambda i: values[i])
    hi, hi2 = ordered[-1], ordered[-2]
    lo, lo2 = ordered[0], ordered[1]
    facts.append(_fact(
        frame, FactType.EXTREME,
        (values[hi] - values[hi2]) / spread,
        {"polarity": "max", "value": values[hi]},
        (frame.keys[hi],),
    ))
    facts.append(_fact(
        frame, FactType.EXTREME,
        (values[lo2] - values[lo]) / spread,
        {"polarity": "min", "value": values[lo]},
        (frame.keys[lo],),
    ))
    return facts


def detect_outlier(frame: AnalysisFrame) -> list[DataFact]:
    """Three-sigma rule over the full series (population sigma).

    Deliberately the plain rule: a large outlier inflates sigma and can mask
    itself.  Significance maps 3-sigma to 0 and 6-sigma to 1.
    """
    values = frame.values
    if len(values) < 4:
        return []
    n = len(values)
    mu = sum(values) / n
    sigma = math.sqrt(sum((v - mu) ** 2 for v in values) / n)
    if sigma == 0:
        return []
    facts = []
    for i, v in enumerate(values):
        deviation = abs(v - mu) / sigma
        if deviation > 3.0:
            facts.append(_fact(
                frame, FactType.OUTLIER,
                min(1.0, (deviation - 3.0) / 3.0),
                {"value": v, "mean": mu, "sigma": sigma},
                (frame.keys[i],),
            ))
    return facts


def _least_squares(values: tuple[float, ...]) -> tuple[float, float, float]:
    """OLS of value against index: (slope, intercept, r_squared)."""
    n = len(values)
    xs = range(n)
    mean_x = (n - 1) / 2.0
    mean_y = sum(values) / n
    sxx = sum((x - mean_x) ** 2 for x in xs)
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, values))
    slope = sxy / sxx
    intercept = mean_y - slope * mean_x
    ss_tot = sum((y - mean_y) ** 2 for y in values)
    if ss_tot == 0:
        return slope, intercept, 0.0
    ss_res = sum((y - (slope * x + intercept)) ** 2 for x, y in zip(xs, values))
    return slope, intercept, max(0.0, 1.0 - ss_res / ss_tot)


def detect_trend(frame: AnalysisFrame, cfg: MiningConfig | None = None) -> list[DataFact]:
    """Least-squares trend over an ordered dimension; significance is r^2."""
    cfg = cfg or MiningConfig()
    values = frame.values
    if len(values) < 3 or frame.dimension_kind not in ORDERED_DIMENSION_KINDS:
        return []
    slope, intercept, r2 = _least_squares(values)
    if slope == 0 or r2 < cfg.trend_r2_threshold:
        return []
    return [_fact(
        frame, FactType.TREND, r2,
        {
            "direction": "increasing" if slope > 0 else "decreasing",
            "slope": slope,
            "intercept": intercept,
        },
        frame.keys,
    )]


def detect_turning_point(frame: AnalysisFrame) -> list[DataFact]:
    """The single strongest sign change of the first differences."""
    values = frame.values
    if len(values) < 3 or frame.dimension_kind not in ORDERED_DIMENSION_KINDS:
        return []
    spread = max(values) - min(values)
    if spread == 0:
        return []
    best: DataFact | None = None
    for i in range(1, len(values) - 1):
        before = values[i] - values[i - 1]
        after = values[i + 1] - values[i]
        if before * after >= 0:
            continue
        nearer = min(abs(values[i] - values[i - 1]), abs(values[i] - values[i + 1]))
        significance = nearer / spread
        candidate = _fact(
            frame, FactType.TURNING_POINT, significance,
            {"value": values[i], "shape": "peak" if before > 0 else "valley"},
            (frame.keys[i],),
        )
        if best is None or candidate.significance > best.significance:
            best = candidate
    return [best] if best else []


def detect_difference(frame: AnalysisFrame) -> list[DataFact]:
    """Consecutive-pair relative differences on an ordered dimension.

    Each pair's significance is its relative difference min-max normalized
    across all pairs of the series; a zero-valued predecessor skips the pair.
    """
    values = frame.values
    if len(values) < 2 or frame.dimension_kind not in ORDERED_DIMENSION_KINDS:
        return []
    pairs = []
    for i in range(len(values) - 1):
        if values[i] == 0:
            continue
        rel = abs(values[i + 1] - values[i]) / abs(values[i])
        if not math.isfinite(rel):  # overflow on a subnormal predecessor
            continue
        pairs.append((i, rel))
    if not pairs:
        return []
    rel = [r for _, r in pairs]
    lo, hi = min(rel), max(rel)
    facts = []
    for (i, r) in pairs:
        significance = 0.0 if hi == lo else (r - lo) / (hi - lo)
        facts.append(_fact(
            frame, FactType.DIFFERENCE, significance,
            {"ratio": (values[i + 1] - values[i]) / values[i]},
            (frame.keys[i], frame.keys[i + 1]),
        ))
    return facts


def detect_majority(frame: AnalysisFrame, cfg: MiningConfig | None = None) -> list[DataFact]:
    """Top category holding at least the configured share of the total."""
    cfg = cfg or MiningConfig()
    values = frame.values
    if len(values) < 2 or any(v < 0 for v in values):
        return []
    total = sum(values)
    if total == 0:
        return []
    top = max(range(len(values)), key=lambda i: values[i])
    share = values[top] / total
    if share < cfg.majority_threshold:
        return []
    return [_fact(
        frame, FactType.MAJORITY, share,
        {"ratio": share},
        (frame.keys[top],),
    )]


def impact_focus(fact: DataFact, frame: AnalysisFrame) -> float:
    """Fraction of dataset rows covered by the fact's focus.

    Trend facts cover every row of the subspace.  Counts come from the
    filtered table, the denominator from the unfiltered dataset.
    """
    if fact.fact_type is FactType.TREND:
        rows = frame.subspace_row_count
    else:
        rows = sum(frame.focus_row_counts.get(v, 0) for v in fact.focus)
    return rows / frame.dataset_row_count


def suitability(fact_type: FactType, chart_type: str, cfg: MiningConfig | None = None) -> float:
    cfg = cfg or MiningConfig()
    row = cfg.suitability_table.get(fact_type.value, {})
    return row.get(chart_type, cfg.suitability_floor)


def score_fact(fact: DataFact, frame: AnalysisFrame, cfg: MiningConfig) -> ScoreBreakdown:
    if fact.origin == "user":
        return ScoreBreakdown.zero()
    sig = fact.significance
    imp = impact_focus(fact, frame)
    suit = suitability(fact.fact_type, frame.chart_type, cfg)
    w_sig, w_imp, w_suit = cfg.weights
    return ScoreBreakdown(sig, imp, suit, w_sig * sig + w_imp * imp + w_suit * suit)


def detect_all(frame: AnalysisFrame, cfg: MiningConfig) -> list[DataFact]:
    candidates: list[DataFact] = []
    candidates.extend(detect_majority(frame, cfg))
    candidates.extend(detect_extreme(frame))
    candidates.extend(detect_outlier(frame))
    candidates.extend(detect_turning_point(frame))
    candidates.extend(detect_difference(frame))
    candidates.extend(detect_trend(frame, cfg))
    return candidates


def select_top_k(candidates: list[DataFact], k: int) -> list[DataFact]:
    """Diversity-first top-k: the best fact of each type, then by score.

    Ties break by descending score, then fact-type order, then focus value,
    which makes the output a prefix-monotone function of k.
    """
    ranked = sorted(candidates, key=lambda f: (-f.score.total,) + f.sort_key())
    best_of_type: list[DataFact] = []
    seen_types: set[FactType] = set()
    for fact in ranked:
        if fact.fact_type not in seen_types:
            seen_types.add(fact.fact_type)
            best_of_type.append(fact)
    rest = [f for f in ranked if not any(f is b for b in best_of_type)]
    return (best_of_type + rest)[:k]


def mine_facts(frame: AnalysisFrame, cfg: MiningConfig | None = None) -> list[DataFact]:
    """Run every applicable detector, score, and pick a diverse top-k."""
    cfg = cfg or MiningConfig()
    candidates = [
        replace(fact, score=score_fact(fact, frame, cfg))
        for fact in detect_all(frame, cfg)
    ]
    return select_top_k(candidates, cfg.k)


def make_user_fact(
    frame: AnalysisFrame,
    fact_type: FactType,
    focus: tuple[Any, ...],
    parameters: dict[str, Any] | None = None,
) -> DataFact:
    """A user-authored fact: parameters/score cannot be inferred, so the
    score is zero and the fact is exempt from ranking."""
    return DataFact(
        subspace=frame.subspace,
        measure=frame.measure,
        dimension=frame.dimension,
        fact_type=fact_type,
        parameters=parameters or {},
        focus=focus,
        chart_id=frame.chart_id,
        chart_index=frame.chart_index,
        origin="user",
        score=ScoreBreakdown.zero(),
        significance=0.0,
    )
