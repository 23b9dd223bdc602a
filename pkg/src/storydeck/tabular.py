"""Typed tabular datasets: loading, column-kind inference, predicates.

A Dataset is a cleaned table: every row has one cell per column, quantitative
cells are finite numbers, and null cells are a hard ingestion error.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from dataclasses import dataclass
from datetime import date, datetime
from typing import Any, Iterable, Sequence

from .errors import DuplicateColumn, MalformedInput, NullCell, UnknownColumn

NOMINAL = "nominal"
TEMPORAL = "temporal"
QUANTITATIVE = "quantitative"
COLUMN_KINDS = (NOMINAL, TEMPORAL, QUANTITATIVE)

PREDICATE_OPS = ("eq", "neq", "lt", "lte", "gt", "gte", "in")

_YEAR_MONTH = re.compile(r"^\d{4}-(0[1-9]|1[0-2])$")


@dataclass(frozen=True)
class Column:
    name: str
    kind: str

    def __post_init__(self) -> None:
        if not self.name:
            raise MalformedInput("column name must be non-empty")
        if self.kind not in COLUMN_KINDS:
            raise MalformedInput(f"unknown column kind: {self.kind!r}")


@dataclass(frozen=True)
class Dataset:
    id: str
    columns: tuple[Column, ...]
    rows: tuple[tuple[Any, ...], ...]

    @property
    def row_count(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> Column:
        for col in self.columns:
            if col.name == name:
                return col
        raise UnknownColumn(f"unknown column: {name!r}")

    def column_index(self, name: str) -> int:
        for i, col in enumerate(self.columns):
            if col.name == name:
                return i
        raise UnknownColumn(f"unknown column: {name!r}")

    def column_values(self, name: str) -> list[Any]:
        idx = self.column_index(name)
        return [row[idx] for row in self.rows]


@dataclass(frozen=True)
class Predicate:
    """A single filter clause: column <op> value(s)."""

    column: str
    op: str
    value: Any

    def __post_init__(self) -> None:
        if self.op not in PREDICATE_OPS:
            raise MalformedInput(f"unknown predicate op: {self.op!r}")
        if self.op == "in" and not isinstance(self.value, (list, tuple)):
            raise MalformedInput("'in' predicate needs a list of values")

    def key(self) -> tuple:
        value = tuple(self.value) if isinstance(self.value, list) else self.value
        return (self.column, self.op, value)


def is_missing(value: Any) -> bool:
    if value is None:
        return True
    if isinstance(value, float) and math.isnan(value):
        return True
    if isinstance(value, str) and value.strip() == "":
        return True
    return False


def _as_number(value: Any) -> float | None:
    if isinstance(value, bool):
        return None
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(value)
        except ValueError:
            return None
    return None


def _as_date(value: Any) -> date | None:
    if isinstance(value, datetime):
        return value.date()
    if isinstance(value, date):
        return value
    if not isinstance(value, str):
        return None
    text = value.strip()
    if _YEAR_MONTH.match(text):
        text = text + "-01"
    try:
        return datetime.fromisoformat(text).date()
    except ValueError:
        return None


def infer_kind(values: Iterable[Any]) -> str:
    """Infer a column kind: quantitative before temporal before nominal."""
    values = list(values)
    if values and all(_as_number(v) is not None for v in values):
        return QUANTITATIVE
    if values and all(_as_date(v) is not None for v in values):
        return TEMPORAL
    return NOMINAL


def value_key(kind: str, value: Any) -> Any:
    """A comparable key for a cell, used for sorting and predicate matching."""
    if kind == QUANTITATIVE:
        num = _as_number(value)
        if num is None:
            raise MalformedInput(f"non-numeric quantitative value: {value!r}")
        return num
    if kind == TEMPORAL:
        num = _as_number(value)
        if num is not None:
            return num
        parsed = _as_date(value)
        if parsed is not None:
            return parsed.toordinal()
        return str(value)
    return str(value)


def values_equal(kind: str, a: Any, b: Any) -> bool:
    try:
        return value_key(kind, a) == value_key(kind, b)
    except MalformedInput:
        return str(a) == str(b)


def matches(pred: Predicate, kind: str, cell: Any) -> bool:
    if pred.op == "in":
        return any(values_equal(kind, cell, v) for v in pred.value)
    if pred.op == "eq":
        return values_equal(kind, cell, pred.value)
    if pred.op == "neq":
        return not values_equal(kind, cell, pred.value)
    left, right = value_key(kind, cell), value_key(kind, pred.value)
    if pred.op == "lt":
        return left < right
    if pred.op == "lte":
        return left <= right
    if pred.op == "gt":
        return left > right
    return left >= right


def _build_dataset(
    dataset_id: str,
    names: Sequence[str],
    raw_rows: Sequence[Sequence[Any]],
    schema: dict[str, str] | None,
) -> Dataset:
    if len(set(names)) != len(names):
        dupes = sorted({n for n in names if list(names).count(n) > 1})
        raise DuplicateColumn(f"duplicate column name(s): {', '.join(dupes)}")
    for name in names:
        if not name:
            raise MalformedInput("empty column name")

    for r, row in enumerate(raw_rows):
        if len(row) != len(names):
            raise MalformedInput(
                f"row {r} has {len(row)} cells, expected {len(names)}"
            )
        for c, cell in enumerate(row):
            if is_missing(cell):
                raise NullCell(f"null cell at row {r}, column {names[c]!r}")

    schema = schema or {}
    for name in schema:
        if name not in names:
            raise UnknownColumn(f"schema sidecar names unknown column: {name!r}")
        if schema[name] not in COLUMN_KINDS:
            raise MalformedInput(f"bad kind in schema sidecar: {schema[name]!r}")

    columns = []
    for c, name in enumerate(names):
        kind = schema.get(name) or infer_kind(row[c] for row in raw_rows)
        columns.append(Column(name, kind))

    rows = []
    for row in raw_rows:
        cells = []
        for col, cell in zip(columns, row):
            if col.kind == QUANTITATIVE:
                num = _as_number(cell)
                if num is None or not math.isfinite(num):
                    raise MalformedInput(
                        f"non-finite value {cell!r} in quantitative column {col.name!r}"
                    )
                cells.append(num)
            else:
                cells.append(cell)
        rows.append(tuple(cells))
    return Dataset(dataset_id, tuple(columns), tuple(rows))


def load_dataset(
    source: bytes | str,
    format: str,
    dataset_id: str = "dataset",
    schema: dict[str, str] | None = None,
) -> Dataset:
    """Load a CSV or JSON-record-array stream into a typed Dataset.

    Column kinds are inferred (numeric -> quantitative, ISO-date-parsable ->
    temporal, else nominal) unless overridden by the ``schema`` sidecar.
    """
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedInput(f"undecodable input: {exc}") from exc

    if format == "csv":
        try:
            reader = csv.reader(io.StringIO(source))
            table = [row for row in reader if row]
        except csv.Error as exc:
            raise MalformedInput(f"bad CSV: {exc}") from exc
        if not table:
            raise MalformedInput("empty CSV input")
        return _build_dataset(dataset_id, table[0], table[1:], schema)

    if format == "json-records":
        try:
            records = json.loads(source)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"bad JSON: {exc}") from exc
        if not isinstance(records, list) or not all(
            isinstance(r, dict) for r in records
        ):
            raise MalformedInput("expected a JSON array of record objects")
        if not records:
            raise MalformedInput("empty record array")
        names = list(records[0].keys())
        for r, rec in enumerate(records):
            if list(rec.keys()) != names:
                raise MalformedInput(f"record {r} does not match the first record's keys")
        rows = [[rec[n] for n in names] for rec in records]
        return _build_dataset(dataset_id, names, rows, schema)

    raise MalformedInput(f"unknown dataset format: {format!r}")


def dataset_to_dict(ds: Dataset) -> dict:
    return {
        "id": ds.id,
        "columns": [{"name": c.name, "kind": c.kind} for c in ds.columns],
        "rows": [list(row) for row in ds.rows],
    }


def dataset_from_dict(doc: dict) -> Dataset:
    columns = tuple(Column(c["name"], c["kind"]) for c in doc["columns"])
    return Dataset(doc["id"], columns, tuple(tuple(r) for r in doc["rows"]))


def predicate_to_dict(pred: Predicate) -> dict:
    return {"column": pred.column, "op": pred.op, "value": pred.value}


def predicate_from_dict(doc: dict) -> Predicate:
    column = doc.get("column") or doc.get("field")
    if column is None or "op" not in doc:
        raise MalformedInput(f"bad predicate: {doc!r}")
    return Predicate(column, doc["op"], doc.get("value"))
