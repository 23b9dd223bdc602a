"""The single mining pipeline shared by the CLI and the HTTP service.

Both front ends call ``mine_chart`` so their fact payloads are identical for
identical inputs.
"""

from __future__ import annotations

from .chartspec import AnalysisFrame, ChartSpec, extract_frame, parse_chart_spec
from .config import Config
from .facts import mine_facts
from .illustrate import IllustratedFact, illustrate
from .tabular import Dataset


def mine_chart(
    dataset: Dataset,
    chart_doc: dict,
    chart_id: str,
    creation_index: int,
    config: Config | None = None,
    include_subspace: bool = False,
) -> tuple[ChartSpec, AnalysisFrame, list[IllustratedFact]]:
    """Parse the spec, extract the frame, mine, score, and illustrate."""
    config = config or Config()
    spec = parse_chart_spec(
        chart_doc, dataset, chart_id=chart_id, creation_index=creation_index
    )
    frame = extract_frame(spec, dataset)
    facts = mine_facts(frame, config.mining)
    illustrated = [
        illustrate(fact, spec, frame, fact_id=f"{spec.id}-f{i}",
                   include_subspace=include_subspace)
        for i, fact in enumerate(facts)
    ]
    return spec, frame, illustrated
