"""Batch front door: mine, organize, export, serve.

Exit codes: 0 success, 2 validation error (diagnostic on stderr), 1
internal error.
"""

from __future__ import annotations

import json
import os
import sys

import click

from . import story as story_ops
from .config import Config, load_config, with_overrides
from .deck import EXPORT_FORMATS, export as export_deck, render_deck
from .errors import MalformedInput, StorydeckError, UnknownId
from .pipeline import mine_chart
from .serialize import canonical_json, facts_payload, illustrated_from_dict
from .story import Story
from .tabular import load_dataset


def _load_dataset_arg(path: str, schema_path: str | None, dataset_id: str | None = None):
    schema = None
    if schema_path:
        with open(schema_path, "r", encoding="utf-8") as fh:
            schema = json.load(fh)
    format = "json-records" if path.endswith(".json") else "csv"
    with open(path, "rb") as fh:
        content = fh.read()
    name = dataset_id or os.path.splitext(os.path.basename(path))[0]
    return load_dataset(content, format, dataset_id=name, schema=schema)


def _parse_weights(text: str | None):
    if text is None:
        return None
    parts = text.split(",")
    if len(parts) != 3:
        raise click.BadParameter("expected three comma-separated weights")
    return tuple(float(p) for p in parts)


def _build_config(config_path: str | None, k: int | None, weights: str | None) -> Config:
    cfg = load_config(config_path) if config_path else Config()
    return with_overrides(cfg, k=k, weights=_parse_weights(weights))


def _mine_all(dataset, chart_paths, cfg, include_subspace):
    illustrated = []
    charts = {}
    for index, path in enumerate(chart_paths):
        with open(path, "r", encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise MalformedInput(f"bad chart spec {path}: {exc}") from exc
        chart_id = doc.get("id") or os.path.splitext(os.path.basename(path))[0]
        spec, frame, facts = mine_chart(
            dataset, doc, chart_id, index, cfg, include_subspace=include_subspace
        )
        charts[spec.id] = spec
        illustrated.extend(facts)
    return charts, illustrated


@click.group()
def main():
    """Mine data facts from charts, organize them into a story, export a deck."""


@main.command()
@click.argument("dataset_path", type=click.Path(exists=True))
@click.argument("chart_paths", type=click.Path(exists=True), nargs=-1, required=True)
@click.option("--k", type=int, default=None, help="facts per chart (default 3)")
@click.option("--weights", default=None, help="significance,impact,suitability weights")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--schema", "schema_path", type=click.Path(exists=True), default=None,
              help="column-kind sidecar JSON")
@click.option("--include-subspace", is_flag=True, default=False)
def mine(dataset_path, chart_paths, k, weights, config_path, schema_path, include_subspace):
    """Print the ranked illustrated facts of each chart as JSON."""
    cfg = _build_config(config_path, k, weights)
    dataset = _load_dataset_arg(dataset_path, schema_path)
    _, illustrated = _mine_all(dataset, chart_paths, cfg, include_subspace)
    click.echo(canonical_json(facts_payload(illustrated)))


@main.command()
@click.argument("dataset_path", type=click.Path(exists=True))
@click.option("--chart", "chart_paths", type=click.Path(exists=True), multiple=True,
              required=True, help="chart spec JSON, in creation order")
@click.option("--selection", "selection_path", type=click.Path(exists=True),
              required=True, help="JSON file with the selected fact ids")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--schema", "schema_path", type=click.Path(exists=True), default=None)
@click.option("--k", type=int, default=None)
@click.option("--weights", default=None)
@click.option("--include-subspace", is_flag=True, default=False)
@click.option("-o", "--output", type=click.Path(), default=None)
def organize(dataset_path, chart_paths, selection_path, config_path, schema_path,
             k, weights, include_subspace, output):
    """Organize selected facts into a story and emit it as JSON."""
    cfg = _build_config(config_path, k, weights)
    dataset = _load_dataset_arg(dataset_path, schema_path)
    _, illustrated = _mine_all(dataset, chart_paths, cfg, include_subspace)
    by_id = {ill.id: ill for ill in illustrated}

    with open(selection_path, "r", encoding="utf-8") as fh:
        selection = json.load(fh)
    fact_ids = selection["facts"] if isinstance(selection, dict) else selection
    unknown = [fid for fid in fact_ids if fid not in by_id]
    if unknown:
        raise UnknownId(f"selection names unknown fact ids: {unknown}")

    story = Story()
    data_facts = {fid: ill.fact for fid, ill in by_id.items()}
    for fid in fact_ids:
        story = story_ops.insert_fact(story, fid, data_facts, cfg.costs)

    doc = {
        "dataset_id": dataset.id,
        "config_digest": cfg.digest(),
        "story": story_ops.story_to_dict(story),
        "facts": {fid: f for fid, f in zip(by_id, facts_payload(list(by_id.values())))
                  if fid in set(story.fact_ids())},
    }
    text = canonical_json(doc)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        click.echo(text)


@main.command(name="export")
@click.argument("story_path", type=click.Path(exists=True))
@click.option("--format", "format_", type=click.Choice(sorted(EXPORT_FORMATS)),
              default="json")
@click.option("-o", "--output", type=click.Path(), default=None)
def export_cmd(story_path, format_, output):
    """Render a story file (from `organize`) into a deck document."""
    with open(story_path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    story = story_ops.story_from_dict(doc["story"])
    facts = {fid: illustrated_from_dict(f) for fid, f in doc["facts"].items()}
    deck = render_deck(
        story, facts,
        dataset_id=doc.get("dataset_id", "dataset"),
        config_digest=doc.get("config_digest", ""),
    )
    payload = export_deck(deck, format_)
    if output:
        with open(output, "wb") as fh:
            fh.write(payload)
    else:
        sys.stdout.buffer.write(payload)


@main.command()
@click.option("--port", type=int, default=None, help="defaults to $STORYDECK_PORT or 8000")
@click.option("--host", default="127.0.0.1")
@click.option("--session-dir", type=click.Path(), default=None)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
def serve(port, host, session_dir, config_path):
    """Run the HTTP/JSON session service."""
    import uvicorn

    from .service import create_app

    if port is None:
        port = int(os.environ.get("STORYDECK_PORT", "8000"))
    cfg = load_config(config_path) if config_path else Config()
    uvicorn.run(create_app(session_dir=session_dir, config=cfg), host=host, port=port)


def entrypoint() -> int:
    try:
        main(standalone_mode=False)
        return 0
    except click.exceptions.Abort:
        return 1
    except click.ClickException as exc:
        exc.show(file=sys.stderr)
        return 2
    except StorydeckError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - genuine bugs
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(entrypoint())
