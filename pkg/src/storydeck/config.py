"""Mining and story-cost configuration.

One JSON document configures the whole pipeline::

    {"k": 3,
     "weights": [0.5, 0.2, 0.3],
     "suitability": {"Trend": {"line": 0.7368}},
     "thresholds": {"majority": 0.5, "trend_r2": 0.5},
     "costs": {"dimension_change": 1.0, ...}}

Anything omitted falls back to the defaults below.  The only
empirically-anchored suitability cell is (Trend, line) = 42/57; every other
cell is a stand-in default and can be overridden per deployment.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace

from .errors import MalformedInput

DEFAULT_WEIGHTS = (0.5, 0.2, 0.3)
SUITABILITY_FLOOR = 0.1

# (fact_type -> chart_type -> probability).  Only (Trend, line) comes from
# published chart-usage statistics; the rest are plausibility defaults.
DEFAULT_SUITABILITY: dict[str, dict[str, float]] = {
    "Trend": {"line": 42.0 / 57.0, "area": 0.5, "bar": 0.2, "point": 0.3, "arc": 0.1},
    "Majority": {"arc": 0.7, "bar": 0.4, "line": 0.1, "area": 0.2, "point": 0.1},
    "Extreme": {"bar": 0.6, "point": 0.5, "line": 0.4, "area": 0.3, "arc": 0.3},
    "Outlier": {"point": 0.7, "bar": 0.5, "line": 0.4, "area": 0.3, "arc": 0.1},
    "TurningPoint": {"line": 0.6, "area": 0.5, "bar": 0.2, "point": 0.3, "arc": 0.1},
    "Difference": {"bar": 0.5, "line": 0.5, "area": 0.4, "point": 0.3, "arc": 0.2},
}


@dataclass(frozen=True)
class MiningConfig:
    k: int = 3
    weights: tuple[float, float, float] = DEFAULT_WEIGHTS
    suitability_table: dict[str, dict[str, float]] = field(
        default_factory=lambda: {k: dict(v) for k, v in DEFAULT_SUITABILITY.items()}
    )
    suitability_floor: float = SUITABILITY_FLOOR
    majority_threshold: float = 0.5
    trend_r2_threshold: float = 0.5

    def __post_init__(self) -> None:
        if self.k < 1:
            raise MalformedInput("k must be >= 1")
        if len(self.weights) != 3 or any(w < 0 for w in self.weights):
            raise MalformedInput("weights must be three non-negative reals")
        if abs(sum(self.weights) - 1.0) > 1e-9:
            raise MalformedInput("weights must sum to 1")


@dataclass(frozen=True)
class CostConfig:
    """Weights for the fact/slide transition-cost terms.

    The subspace term is graded, not binary: moving into a strictly more
    filtered subspace (drill-down) is the cheapest transition.
    """

    dimension_change: float = 1.0
    measure_change: float = 1.0
    subspace_relation: float = 1.0
    focus_overlap: float = 0.5
    fact_type_change: float = 0.25
    chart_order_penalty: float = 0.25
    grade_drill_down: float = 0.3
    grade_roll_up: float = 0.6
    grade_sibling: float = 0.8
    grade_unrelated: float = 1.0

    def __post_init__(self) -> None:
        for name, value in self.__dict__.items():
            if not (value >= 0):
                raise MalformedInput(f"cost weight {name} must be non-negative")


@dataclass(frozen=True)
class Config:
    mining: MiningConfig = field(default_factory=MiningConfig)
    costs: CostConfig = field(default_factory=CostConfig)

    def digest(self) -> str:
        return hashlib.sha256(
            json.dumps(config_to_dict(self), sort_keys=True).encode()
        ).hexdigest()[:12]


def config_to_dict(cfg: Config) -> dict:
    return {
        "k": cfg.mining.k,
        "weights": list(cfg.mining.weights),
        "suitability": {t: dict(row) for t, row in cfg.mining.suitability_table.items()},
        "suitability_floor": cfg.mining.suitability_floor,
        "thresholds": {
            "majority": cfg.mining.majority_threshold,
            "trend_r2": cfg.mining.trend_r2_threshold,
        },
        "costs": {
            "dimension_change": cfg.costs.dimension_change,
            "measure_change": cfg.costs.measure_change,
            "subspace_relation": cfg.costs.subspace_relation,
            "focus_overlap": cfg.costs.focus_overlap,
            "fact_type_change": cfg.costs.fact_type_change,
            "chart_order_penalty": cfg.costs.chart_order_penalty,
            "grades": {
                "drill_down": cfg.costs.grade_drill_down,
                "roll_up": cfg.costs.grade_roll_up,
                "sibling": cfg.costs.grade_sibling,
                "unrelated": cfg.costs.grade_unrelated,
            },
        },
    }


def config_from_dict(doc: dict) -> Config:
    if not isinstance(doc, dict):
        raise MalformedInput("config must be a JSON object")
    thresholds = doc.get("thresholds") or {}
    mining_kwargs: dict = {}
    if "k" in doc:
        mining_kwargs["k"] = doc["k"]
    if "weights" in doc:
        weights = doc["weights"]
        if not isinstance(weights, (list, tuple)) or len(weights) != 3:
            raise MalformedInput("weights must be a triple")
        mining_kwargs["weights"] = tuple(float(w) for w in weights)
    if "suitability" in doc:
        table = {k: dict(v) for k, v in DEFAULT_SUITABILITY.items()}
        for fact_type, row in doc["suitability"].items():
            table.setdefault(fact_type, {}).update(
                {chart: float(p) for chart, p in row.items()}
            )
        mining_kwargs["suitability_table"] = table
    if "suitability_floor" in doc:
        mining_kwargs["suitability_floor"] = float(doc["suitability_floor"])
    if "majority" in thresholds:
        mining_kwargs["majority_threshold"] = float(thresholds["majority"])
    if "trend_r2" in thresholds:
        mining_kwargs["trend_r2_threshold"] = float(thresholds["trend_r2"])

    costs_doc = dict(doc.get("costs") or {})
    grades = costs_doc.pop("grades", {})
    cost_kwargs = {k: float(v) for k, v in costs_doc.items()}
    for grade, value in grades.items():
        cost_kwargs[f"grade_{grade}"] = float(value)
    return Config(mining=MiningConfig(**mining_kwargs), costs=CostConfig(**cost_kwargs))


def load_config(path: str) -> Config:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"bad config JSON: {exc}") from exc
    return config_from_dict(doc)


def with_overrides(
    cfg: Config,
    k: int | None = None,
    weights: tuple[float, float, float] | None = None,
) -> Config:
    mining = cfg.mining
    if k is not None:
        mining = replace(mining, k=k)
    if weights is not None:
        mining = replace(mining, weights=weights)
    return Config(mining=mining, costs=cfg.costs)
