"""HTTP/JSON session service.

One session per authoring run; optimistic concurrency via a per-session
revision counter.  Mutating requests may carry ``If-Match: <revision>``;
a stale revision gets 409 and the client refetches.  Domain errors map to
422, unknown ids to 404.
"""

from __future__ import annotations

import json
from dataclasses import replace

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import story as story_ops
from .config import Config, config_from_dict, config_to_dict
from .deck import EXPORT_FORMATS, export, render_deck
from .errors import (
    FocusNotInChart,
    MalformedInput,
    StorydeckError,
    UnknownId,
)
from .facts import FactType, detect_all, make_user_fact, score_fact
from .illustrate import (
    IllustratedFact,
    apply_user_highlight,
    describe,
    embellish,
    illustrate,
)
from .pipeline import mine_chart
from .schemas import SCHEMAS
from .serialize import canonical_json, facts_payload, illustrated_to_dict
from .session import Session, SessionStore
from .tabular import load_dataset

_MEDIA_TYPES = {
    "json": "application/json",
    "markdown": "text/markdown; charset=utf-8",
    "html": "text/html; charset=utf-8",
}


def create_app(session_dir: str | None = None, config: Config | None = None) -> FastAPI:
    app = FastAPI(title="storydeck", docs_url=None, redoc_url=None)
    # the web client may be served from any origin (file://, a dev server…)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore(session_dir)
    base_config = config or Config()

    @app.exception_handler(StorydeckError)
    async def domain_error(request: Request, exc: StorydeckError):
        status = 404 if isinstance(exc, UnknownId) else 422
        return JSONResponse(
            status_code=status,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    def check_revision(request: Request, session: Session) -> Response | None:
        header = request.headers.get("if-match")
        if header is None:
            return None
        try:
            expected = int(header.strip().strip('"'))
        except ValueError:
            raise MalformedInput(f"bad If-Match revision: {header!r}")
        if expected != session.revision:
            return JSONResponse(
                status_code=409,
                content={
                    "error": "RevisionConflict",
                    "detail": f"expected revision {session.revision}, got {expected}",
                    "revision": session.revision,
                },
            )
        return None

    def commit(session: Session) -> None:
        session.revision += 1
        store.save(session)

    @app.get("/schemas")
    async def schemas():
        return SCHEMAS

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        body = await request.body()
        cfg = base_config
        if body:
            doc = json.loads(body)
            if doc.get("config"):
                cfg = config_from_dict(doc["config"])
        session = store.create(cfg)
        return {"session_id": session.id, "revision": session.revision}

    @app.get("/sessions/{sid}")
    async def get_session(sid: str):
        session = store.get(sid)
        return {
            "session_id": session.id,
            "revision": session.revision,
            "datasets": list(session.datasets),
            "charts": [
                {
                    "chart_id": cid,
                    "creation_index": session.charts[cid].creation_index,
                    "fact_ids": session.chart_facts.get(cid, []),
                }
                for cid in session.charts
            ],
            "selected": list(session.selected),
            "config": config_to_dict(session.config),
        }

    @app.post("/sessions/{sid}/datasets", status_code=201)
    async def add_dataset(sid: str, request: Request):
        session = store.get(sid)
        conflict = check_revision(request, session)
        if conflict:
            return conflict
        body = await request.body()
        content_type = request.headers.get("content-type", "")
        schema = None
        dataset_id = None
        if "json" in content_type:
            doc = json.loads(body)
            if isinstance(doc, list):
                payload, format = json.dumps(doc), "json-records"
            else:
                payload = doc.get("content")
                if isinstance(payload, (list, dict)):
                    payload = json.dumps(payload)
                format = doc.get("format", "json-records")
                schema = doc.get("schema")
                dataset_id = doc.get("id")
        else:
            payload, format = body, "csv"
        with session.lock:
            conflict = check_revision(request, session)
            if conflict:
                return conflict
            session.dataset_count += 1
            dataset_id = dataset_id or f"dataset-{session.dataset_count}"
            dataset = load_dataset(payload, format, dataset_id=dataset_id, schema=schema)
            session.datasets[dataset.id] = dataset
            commit(session)
        return {
            "dataset_id": dataset.id,
            "revision": session.revision,
            "columns": [{"name": c.name, "kind": c.kind} for c in dataset.columns],
            "row_count": dataset.row_count,
        }

    @app.post("/sessions/{sid}/charts", status_code=201)
    async def add_chart(sid: str, request: Request):
        session = store.get(sid)
        doc = json.loads(await request.body())
        with session.lock:
            conflict = check_revision(request, session)
            if conflict:
                return conflict
            dataset_id = doc.pop("dataset_id", None)
            if dataset_id is None:
                if len(session.datasets) != 1:
                    raise MalformedInput("chart body must name a dataset_id")
                dataset_id = next(iter(session.datasets))
            dataset = session.dataset(dataset_id)
            chart_id = doc.get("id") or f"chart-{session.chart_count + 1}"
            spec, frame, illustrated = mine_chart(
                dataset, doc, chart_id, session.chart_count, session.config
            )
            session.chart_count += 1
            session.charts[spec.id] = spec
            session.chart_dataset[spec.id] = dataset_id
            session.chart_facts[spec.id] = [ill.id for ill in illustrated]
            for ill in illustrated:
                session.facts[ill.id] = ill
            commit(session)
            payload = {
                "chart_id": spec.id,
                "revision": session.revision,
                "facts": facts_payload(illustrated),
            }
        return Response(content=canonical_json(payload), media_type="application/json",
                        status_code=201)

    @app.post("/sessions/{sid}/facts", status_code=201)
    async def add_user_fact(sid: str, request: Request):
        session = store.get(sid)
        doc = json.loads(await request.body())
        with session.lock:
            conflict = check_revision(request, session)
            if conflict:
                return conflict
            chart_id = doc.get("chart_id")
            if not chart_id:
                raise MalformedInput("custom fact body must name a chart_id")
            spec = session.chart(chart_id)
            frame = session.frame_for(chart_id)
            try:
                fact_type = FactType(doc.get("fact_type", "Extreme"))
            except ValueError:
                raise MalformedInput(f"unknown fact type: {doc.get('fact_type')!r}")
            focus = doc.get("focus") or [frame.keys[0]]
            resolved = []
            for value in focus:
                match = next((k for k in frame.keys if str(k) == str(value)), None)
                if match is None:
                    raise FocusNotInChart(f"focus value not in chart: {value!r}")
                resolved.append(match)
            fact = make_user_fact(frame, fact_type, tuple(resolved),
                                  doc.get("parameters"))
            session.user_fact_count += 1
            fact_id = f"{chart_id}-u{session.user_fact_count}"
            description = doc.get("description")
            ill = IllustratedFact(
                id=fact_id,
                fact=fact,
                description=description or _safe_description(fact),
                embellished_spec=embellish(spec, fact, frame),
                user_edited_description=bool(description),
                series=frame.series,
            )
            session.facts[fact_id] = ill
            session.chart_facts.setdefault(chart_id, []).append(fact_id)
            commit(session)
            payload = illustrated_to_dict(ill)
            payload["revision"] = session.revision
        return payload

    @app.patch("/sessions/{sid}/facts/{fid}")
    async def patch_fact(sid: str, fid: str, request: Request):
        session = store.get(sid)
        doc = json.loads(await request.body())
        with session.lock:
            conflict = check_revision(request, session)
            if conflict:
                return conflict
            ill = session.fact(fid)
            chart_id = ill.fact.chart_id
            spec = session.chart(chart_id)
            frame = session.frame_for(chart_id)
            if "fact_type" in doc:
                try:
                    fact_type = FactType(doc["fact_type"])
                except ValueError:
                    raise MalformedInput(f"unknown fact type: {doc['fact_type']!r}")
                ill = _retype_fact(ill, fact_type, spec, frame, session)
            if "focus" in doc:
                focus = doc["focus"]
                if isinstance(focus, list):  # accept ["2009"] as well as "2009"
                    if len(focus) != 1:
                        raise MalformedInput("focus patch takes a single value")
                    focus = focus[0]
                ill = apply_user_highlight(ill, focus, spec, frame)
            if "description" in doc:
                ill = replace(ill, description=str(doc["description"]),
                              user_edited_description=True)
            session.facts[fid] = ill
            commit(session)
            payload = illustrated_to_dict(ill)
            payload["revision"] = session.revision
        return payload

    @app.put("/sessions/{sid}/story/facts/{fid}")
    async def select_fact(sid: str, fid: str, request: Request):
        session = store.get(sid)
        with session.lock:
            conflict = check_revision(request, session)
            if conflict:
                return conflict
            session.fact(fid)
            if fid not in session.selected:
                session.selected.append(fid)
                session.story = story_ops.insert_fact(
                    session.story, fid, session.data_facts(), session.config.costs
                )
                commit(session)
            return _outline(session)

    @app.delete("/sessions/{sid}/story/facts/{fid}")
    async def deselect_fact(sid: str, fid: str, request: Request):
        session = store.get(sid)
        with session.lock:
            conflict = check_revision(request, session)
            if conflict:
                return conflict
            session.fact(fid)
            if fid in session.selected:
                session.selected.remove(fid)
                session.story = story_ops.remove_fact(session.story, fid)
                commit(session)
            return _outline(session)

    @app.post("/sessions/{sid}/story/moves")
    async def story_move(sid: str, request: Request):
        session = store.get(sid)
        doc = json.loads(await request.body())
        with session.lock:
            conflict = check_revision(request, session)
            if conflict:
                return conflict
            op = doc.get("op")
            facts = session.data_facts()
            if op == "move_slide":
                session.story = story_ops.move_slide(
                    session.story, doc["slide_id"], int(doc["position"])
                )
            elif op in ("move_fact", "merge"):
                session.story = story_ops.move_fact(
                    session.story,
                    doc["fact_id"],
                    doc["slide_id"],
                    int(doc.get("position", 0)),
                    facts,
                )
            elif op == "split":
                session.story = story_ops.split_fact(session.story, doc["fact_id"], facts)
            elif op == "remove_fact":
                session.story = story_ops.remove_fact(session.story, doc["fact_id"])
                if doc["fact_id"] in session.selected:
                    session.selected.remove(doc["fact_id"])
            else:
                raise MalformedInput(f"unknown story move op: {op!r}")
            commit(session)
            return _outline(session)

    @app.patch("/sessions/{sid}/story/slides/{slide_id}/title")
    async def patch_title(sid: str, slide_id: str, request: Request):
        session = store.get(sid)
        doc = json.loads(await request.body())
        with session.lock:
            conflict = check_revision(request, session)
            if conflict:
                return conflict
            if "title" not in doc:
                raise MalformedInput("body must carry a 'title'")
            session.story = story_ops.set_slide_title(
                session.story, slide_id, str(doc["title"])
            )
            commit(session)
            return _outline(session)

    @app.get("/sessions/{sid}/story")
    async def get_story(sid: str):
        return _outline(store.get(sid))

    @app.post("/sessions/{sid}/export")
    async def export_deck(sid: str, format: str = "json"):
        session = store.get(sid)
        if format not in EXPORT_FORMATS:
            raise MalformedInput(f"unknown export format: {format!r}")
        deck = render_deck(
            session.story,
            session.selected_story_facts(),
            dataset_id=",".join(session.datasets) or "dataset",
            config_digest=session.config.digest(),
        )
        return Response(content=export(deck, format), media_type=_MEDIA_TYPES[format])

    def _outline(session: Session) -> dict:
        return {
            "revision": session.revision,
            "selected": list(session.selected),
            "slides": [
                {
                    "id": slide.id,
                    "title": slide.title,
                    "title_user_edited": slide.title_user_edited,
                    "pinned": slide.pinned,
                    "facts": [
                        {
                            "id": fid,
                            "chart_id": session.facts[fid].fact.chart_id,
                            "chart_type": session.facts[fid].embellished_spec.get("mark"),
                            "fact_type": session.facts[fid].fact.fact_type.value,
                            "description": session.facts[fid].description,
                            "pinned": fid in slide.pinned_fact_ids,
                        }
                        for fid in slide.fact_ids
                    ],
                }
                for slide in session.story.slides
            ],
        }

    def _retype_fact(ill, fact_type, spec, frame, session):
        candidates = [
            f for f in detect_all(frame, session.config.mining)
            if f.fact_type is fact_type
        ]
        if candidates:
            scored = [
                replace(f, score=score_fact(f, frame, session.config.mining))
                for f in candidates
            ]
            best = max(scored, key=lambda f: f.score.total)
            fresh = illustrate(best, spec, frame, fact_id=ill.id)
            if ill.user_edited_description:
                fresh = replace(fresh, description=ill.description,
                                user_edited_description=True)
            return fresh
        # the detector finds nothing: keep the focus, mark the fact as
        # user-authored (its parameters and score cannot be inferred)
        fact = make_user_fact(frame, fact_type, ill.fact.focus)
        return IllustratedFact(
            id=ill.id,
            fact=fact,
            description=ill.description if ill.user_edited_description
            else _safe_description(fact),
            embellished_spec=embellish(spec, fact, frame),
            user_edited_description=ill.user_edited_description,
            series=frame.series,
        )

    return app


def _safe_description(fact) -> str:
    try:
        return describe(fact)
    except StorydeckError:
        focus = ", ".join(str(v) for v in fact.focus)
        return f"{fact.dimension} {focus}: {fact.measure.label()}."


app = create_app()
