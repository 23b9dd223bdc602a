"""Chart specifications and the analysis frame derived from them.

The spec dialect is a small JSON document::

    {"mark": "bar", "encoding": {"x": {"field": "Category"},
                                 "y": {"field": "Sales", "aggregate": "sum"}},
     "transform": {"filter": [{"column": "Year", "op": "eq", "value": 2009}]}}

From a spec we extract the subspace (filters), the measure (the single
quantitative encoding, aggregate defaulting to sum), the dimension, and the
aggregated series that all fact mining operates on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .errors import (
    EmptySubspace,
    MalformedInput,
    MissingMeasure,
    UnknownColumn,
    UnsupportedChartType,
)
from .tabular import (
    NOMINAL,
    QUANTITATIVE,
    Dataset,
    Predicate,
    matches,
    predicate_from_dict,
    predicate_to_dict,
    value_key,
)

CHART_TYPES = ("bar", "line", "area", "point", "arc")
AGGREGATES = ("sum", "mean", "count", "min", "max")
CHANNELS = ("x", "y", "color", "theta")

# Channel preference when several encodings could carry the measure.
_MEASURE_PREFERENCE = ("y", "theta", "x", "color")


@dataclass(frozen=True)
class Encoding:
    field: str | None
    aggregate: str | None = None


@dataclass(frozen=True)
class Measure:
    """The aggregated dependent variable of a chart."""

    column: str | None
    aggregate: str

    def label(self) -> str:
        """Human-readable name; sum is the unmarked default aggregate."""
        if self.column is None:
            return "count"
        if self.aggregate == "sum":
            return self.column
        return f"{self.aggregate.capitalize()} of {self.column}"

    def base_column(self) -> str | None:
        return self.column


@dataclass(frozen=True)
class ChartSpec:
    id: str
    dataset_id: str
    chart_type: str
    encodings: dict[str, Encoding]
    filters: tuple[Predicate, ...]
    creation_index: int

    @property
    def measure(self) -> Measure:
        channel = _measure_channel(self)
        enc = self.encodings[channel]
        return Measure(enc.field, enc.aggregate or "sum")

    @property
    def dimension(self) -> str:
        return _dimension_field(self)


@dataclass(frozen=True)
class AnalysisFrame:
    """The filtered, grouped, aggregated series a chart visualizes."""

    subspace: tuple[Predicate, ...]
    measure: Measure
    dimension: str
    dimension_kind: str
    series: tuple[tuple[Any, float], ...]
    dataset_row_count: int
    subspace_row_count: int
    chart_type: str
    chart_id: str
    chart_index: int
    # rows per dimension value in the filtered table, for impact computation
    focus_row_counts: dict[Any, int]

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(v for _, v in self.series)

    @property
    def keys(self) -> tuple[Any, ...]:
        return tuple(k for k, _ in self.series)


def _measure_channel(spec_like: "ChartSpec") -> str:
    encodings = spec_like.encodings
    quantish = [
        ch
        for ch in CHANNELS
        if ch in encodings
        and (encodings[ch].aggregate is not None or encodings[ch].field is None)
    ]
    if not quantish:
        raise MissingMeasure("chart spec has no quantitative encoding")
    if len(quantish) == 1:
        return quantish[0]
    aggregated = [ch for ch in quantish if encodings[ch].aggregate]
    pool = aggregated or quantish
    for ch in _MEASURE_PREFERENCE:
        if ch in pool:
            return ch
    return pool[0]


def _dimension_field(spec: ChartSpec) -> str:
    measure_channel = _measure_channel(spec)
    order = ("color", "x", "y", "theta") if spec.chart_type == "arc" else ("x", "y", "color", "theta")
    for ch in order:
        if ch == measure_channel or ch not in spec.encodings:
            continue
        if spec.encodings[ch].field:
            return spec.encodings[ch].field
    raise MalformedInput("chart spec has no dimension encoding")


def parse_chart_spec(
    doc: dict,
    dataset: Dataset,
    chart_id: str = "chart",
    creation_index: int = 0,
) -> ChartSpec:
    """Validate a chart-spec document against a dataset."""
    if not isinstance(doc, dict):
        raise MalformedInput("chart spec must be a JSON object")
    mark = doc.get("mark")
    if mark not in CHART_TYPES:
        raise UnsupportedChartType(f"unsupported mark: {mark!r}")

    raw_encodings = doc.get("encoding") or {}
    if not isinstance(raw_encodings, dict):
        raise MalformedInput("'encoding' must be an object")
    encodings: dict[str, Encoding] = {}
    for channel, body in raw_encodings.items():
        if channel not in CHANNELS:
            raise MalformedInput(f"unknown encoding channel: {channel!r}")
        if isinstance(body, str):
            body = {"field": body}
        if not isinstance(body, dict):
            raise MalformedInput(f"bad encoding for channel {channel!r}")
        aggregate = body.get("aggregate")
        if aggregate is not None and aggregate not in AGGREGATES:
            raise MalformedInput(f"unknown aggregate: {aggregate!r}")
        field = body.get("field")
        if field is None and aggregate != "count":
            raise MalformedInput(f"encoding {channel!r} has no field")
        if field is not None:
            dataset.column(field)  # raises UnknownColumn
        encodings[channel] = Encoding(field, aggregate)
    if not encodings:
        raise MissingMeasure("chart spec has no encodings")

    # aggregate-less quantitative columns carry the measure with a default sum
    promoted = {}
    for channel, enc in encodings.items():
        if enc.field is not None and enc.aggregate is None:
            if dataset.column(enc.field).kind == QUANTITATIVE:
                promoted[channel] = Encoding(enc.field, None)
    # keep them as-is; _measure_channel treats aggregate-less quantitative
    # fields as candidates only if nothing else qualifies
    candidates = [
        ch for ch, enc in encodings.items()
        if enc.aggregate is not None or enc.field is None
    ]
    if not candidates and promoted:
        # mark exactly one promoted channel as the measure by giving it sum
        for ch in _MEASURE_PREFERENCE:
            if ch in promoted:
                encodings[ch] = Encoding(encodings[ch].field, "sum")
                break

    transform = doc.get("transform") or {}
    raw_filters = transform.get("filter") or doc.get("filter") or []
    if isinstance(raw_filters, dict):
        raw_filters = [raw_filters]
    filters = []
    for raw in raw_filters:
        pred = predicate_from_dict(raw)
        dataset.column(pred.column)  # raises UnknownColumn
        filters.append(pred)

    spec = ChartSpec(
        id=doc.get("id", chart_id),
        dataset_id=dataset.id,
        chart_type=mark,
        encodings=encodings,
        filters=tuple(filters),
        creation_index=creation_index,
    )
    spec.measure  # raises MissingMeasure when no quantitative encoding exists
    spec.dimension
    return spec


def _aggregate(values: list[float], aggregate: str) -> float:
    if aggregate == "sum":
        return float(sum(values))
    if aggregate == "mean":
        return float(sum(values) / len(values))
    if aggregate == "count":
        return float(len(values))
    if aggregate == "min":
        return float(min(values))
    return float(max(values))


def extract_frame(spec: ChartSpec, ds: Dataset) -> AnalysisFrame:
    """Filter, group by the dimension, and aggregate the measure.

    Temporal/quantitative dimensions sort ascending by value; nominal
    dimensions sort descending by measure with a lexicographic tie-break.
    """
    if spec.dataset_id != ds.id:
        raise MalformedInput("chart spec refers to a different dataset")
    measure = spec.measure
    dim_col = ds.column(spec.dimension)
    dim_idx = ds.column_index(spec.dimension)
    measure_idx = ds.column_index(measure.column) if measure.column else None

    kinds = {c.name: c.kind for c in ds.columns}
    surviving = [
        row
        for row in ds.rows
        if all(matches(p, kinds[p.column], row[ds.column_index(p.column)]) for p in spec.filters)
    ]
    if not surviving:
        raise EmptySubspace("no rows survive the chart's filters")

    groups: dict[Any, list] = {}
    group_labels: dict[Any, Any] = {}
    for row in surviving:
        key = value_key(dim_col.kind, row[dim_idx])
        groups.setdefault(key, []).append(row)
        group_labels.setdefault(key, row[dim_idx])

    series = []
    focus_row_counts: dict[Any, int] = {}
    for key, rows in groups.items():
        values = [1.0] * len(rows) if measure_idx is None else [row[measure_idx] for row in rows]
        series.append((group_labels[key], _aggregate(values, measure.aggregate)))
        focus_row_counts[group_labels[key]] = len(rows)

    if dim_col.kind == NOMINAL:
        series.sort(key=lambda kv: (-kv[1], str(kv[0])))
    else:
        series.sort(key=lambda kv: value_key(dim_col.kind, kv[0]))

    return AnalysisFrame(
        subspace=spec.filters,
        measure=measure,
        dimension=spec.dimension,
        dimension_kind=dim_col.kind,
        series=tuple(series),
        dataset_row_count=ds.row_count,
        subspace_row_count=len(surviving),
        chart_type=spec.chart_type,
        chart_id=spec.id,
        chart_index=spec.creation_index,
        focus_row_counts=focus_row_counts,
    )


def spec_to_dict(spec: ChartSpec) -> dict:
    encoding = {}
    for channel, enc in spec.encodings.items():
        body: dict[str, Any] = {}
        if enc.field is not None:
            body["field"] = enc.field
        if enc.aggregate is not None:
            body["aggregate"] = enc.aggregate
        encoding[channel] = body
    doc: dict[str, Any] = {
        "id": spec.id,
        "dataset_id": spec.dataset_id,
        "mark": spec.chart_type,
        "encoding": encoding,
        "creation_index": spec.creation_index,
    }
    if spec.filters:
        doc["transform"] = {"filter": [predicate_to_dict(p) for p in spec.filters]}
    return doc


def spec_from_dict(doc: dict, dataset: Dataset) -> ChartSpec:
    return parse_chart_spec(
        doc,
        dataset,
        chart_id=doc.get("id", "chart"),
        creation_index=doc.get("creation_index", 0),
    )
