"""Per-session state and JSON persistence.

A session holds everything one authoring run needs: datasets, chart specs
(in creation order), candidate illustrated facts per chart, the selected
fact ids, the story, and the configuration.  Every mutation bumps the
revision by exactly one; a session round-trips through a single JSON file.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from dataclasses import dataclass, field

from .chartspec import ChartSpec, extract_frame, spec_from_dict, spec_to_dict
from .config import Config, config_from_dict, config_to_dict
from .errors import CorruptSession, StorydeckError, UnknownId
from .illustrate import IllustratedFact
from .serialize import illustrated_from_dict, illustrated_to_dict
from .story import Story, story_from_dict, story_to_dict
from .tabular import Dataset, dataset_from_dict, dataset_to_dict


@dataclass
class Session:
    id: str
    config: Config = field(default_factory=Config)
    datasets: dict[str, Dataset] = field(default_factory=dict)
    charts: dict[str, ChartSpec] = field(default_factory=dict)
    chart_dataset: dict[str, str] = field(default_factory=dict)
    chart_facts: dict[str, list[str]] = field(default_factory=dict)
    facts: dict[str, IllustratedFact] = field(default_factory=dict)
    selected: list[str] = field(default_factory=list)
    story: Story = field(default_factory=Story)
    revision: int = 0
    dataset_count: int = 0
    chart_count: int = 0
    user_fact_count: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def dataset(self, dataset_id: str) -> Dataset:
        try:
            return self.datasets[dataset_id]
        except KeyError:
            raise UnknownId(f"unknown dataset: {dataset_id!r}") from None

    def chart(self, chart_id: str) -> ChartSpec:
        try:
            return self.charts[chart_id]
        except KeyError:
            raise UnknownId(f"unknown chart: {chart_id!r}") from None

    def fact(self, fact_id: str) -> IllustratedFact:
        try:
            return self.facts[fact_id]
        except KeyError:
            raise UnknownId(f"unknown fact: {fact_id!r}") from None

    def frame_for(self, chart_id: str):
        spec = self.chart(chart_id)
        return extract_frame(spec, self.dataset(self.chart_dataset[chart_id]))

    def selected_story_facts(self) -> dict[str, 'IllustratedFact']:
        return {fid: self.facts[fid] for fid in self.selected}

    def data_facts(self) -> dict:
        return {fid: ill.fact for fid, ill in self.facts.items()}


def new_session(config: Config | None = None) -> Session:
    return Session(id=uuid.uuid4().hex[:12], config=config or Config())


def session_to_dict(session: Session) -> dict:
    return {
        "id": session.id,
        "revision": session.revision,
        "config": config_to_dict(session.config),
        "datasets": {k: dataset_to_dict(v) for k, v in session.datasets.items()},
        "charts": {k: spec_to_dict(v) for k, v in session.charts.items()},
        "chart_dataset": dict(session.chart_dataset),
        "chart_facts": {k: list(v) for k, v in session.chart_facts.items()},
        "facts": {k: illustrated_to_dict(v) for k, v in session.facts.items()},
        "selected": list(session.selected),
        "story": story_to_dict(session.story),
        "counters": {
            "dataset": session.dataset_count,
            "chart": session.chart_count,
            "user_fact": session.user_fact_count,
        },
    }


def session_from_dict(doc: dict) -> Session:
    try:
        session = Session(id=doc["id"], config=config_from_dict(doc.get("config", {})))
        session.revision = doc["revision"]
        session.datasets = {
            k: dataset_from_dict(v) for k, v in doc.get("datasets", {}).items()
        }
        session.chart_dataset = dict(doc.get("chart_dataset", {}))
        for chart_id, spec_doc in doc.get("charts", {}).items():
            dataset = session.datasets[session.chart_dataset[chart_id]]
            session.charts[chart_id] = spec_from_dict(spec_doc, dataset)
        session.chart_facts = {k: list(v) for k, v in doc.get("chart_facts", {}).items()}
        session.facts = {
            k: illustrated_from_dict(v) for k, v in doc.get("facts", {}).items()
        }
        session.selected = list(doc.get("selected", []))
        session.story = story_from_dict(doc.get("story", {}))
        counters = doc.get("counters", {})
        session.dataset_count = counters.get("dataset", len(session.datasets))
        session.chart_count = counters.get("chart", len(session.charts))
        session.user_fact_count = counters.get("user_fact", 0)
    except (KeyError, TypeError, ValueError, StorydeckError) as exc:
        raise CorruptSession(f"cannot restore session: {exc}") from exc

    # restore-time invariant checks
    if any(fid not in session.facts for fid in session.selected):
        raise CorruptSession("selected fact ids reference unknown facts")
    if any(fid not in session.selected for fid in session.story.fact_ids()):
        raise CorruptSession("story references unselected facts")
    return session


class SessionStore:
    """In-memory session registry with optional one-file-per-session
    persistence."""

    def __init__(self, directory: str | None = None):
        self.directory = directory
        self.sessions: dict[str, Session] = {}
        if directory:
            os.makedirs(directory, exist_ok=True)

    def create(self, config: Config | None = None) -> Session:
        session = new_session(config)
        self.sessions[session.id] = session
        self.save(session)
        return session

    def get(self, session_id: str) -> Session:
        if session_id in self.sessions:
            return self.sessions[session_id]
        if self.directory:
            path = self._path(session_id)
            if os.path.exists(path):
                session = load_session(path)
                self.sessions[session.id] = session
                return session
        raise UnknownId(f"unknown session: {session_id!r}")

    def _path(self, session_id: str) -> str:
        return os.path.join(self.directory, f"{session_id}.json")

    def save(self, session: Session) -> None:
        if not self.directory:
            return
        save_session(session, self._path(session.id))


def save_session(session: Session, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(session_to_dict(session), fh, sort_keys=True, indent=2)


def load_session(path: str) -> Session:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CorruptSession(f"unreadable session file: {exc}") from exc
    return session_from_dict(doc)
