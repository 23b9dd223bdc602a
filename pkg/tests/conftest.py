import json
import os

import pytest

from storydeck.config import Config, with_overrides
from storydeck.pipeline import mine_chart
from storydeck.tabular import load_dataset

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")

# creation order matters: the scenario drills down chart by chart
CHART_FILES = [
    "bmw_year_line.json",
    "all_year_line.json",
    "category_2009_bar.json",
    "model_2009_bar.json",
    "model_mean_bar.json",
]


def fixture_path(*parts: str) -> str:
    return os.path.join(FIXTURES, *parts)


def load_chart_doc(name: str) -> dict:
    with open(fixture_path("charts", name), "r", encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def car_schema() -> dict:
    with open(fixture_path("car_sales.schema.json"), "r", encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def car_dataset(car_schema):
    with open(fixture_path("car_sales.csv"), "rb") as fh:
        return load_dataset(fh.read(), "csv", dataset_id="car_sales", schema=car_schema)


@pytest.fixture(scope="session")
def config() -> Config:
    # k=4 keeps every fact type of the scenario charts in the mined payloads
    return with_overrides(Config(), k=4)


@pytest.fixture(scope="session")
def mined_charts(car_dataset, config):
    """chart_id -> (spec, frame, illustrated facts) for the five scenario
    charts, mined in creation order."""
    result = {}
    for index, name in enumerate(CHART_FILES):
        chart_id = f"chart-{index + 1}"
        result[chart_id] = mine_chart(
            car_dataset, load_chart_doc(name), chart_id, index, config
        )
    return result


@pytest.fixture(scope="session")
def all_facts(mined_charts):
    return {
        ill.id: ill
        for _, _, ills in mined_charts.values()
        for ill in ills
    }
