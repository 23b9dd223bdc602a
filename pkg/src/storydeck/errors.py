"""Exception hierarchy shared by every module.

Validation problems (bad input, unknown ids, contract violations) derive from
StorydeckError so the CLI and the HTTP service can map them uniformly to
exit code 2 / status 422.
"""


class StorydeckError(Exception):
    """Base class for all domain errors."""


class MalformedInput(StorydeckError):
    """Input stream or document does not parse in the declared format."""


class NullCell(MalformedInput):
    """A dataset cell is missing; ingestion rejects incomplete tables."""


class DuplicateColumn(MalformedInput):
    """Two dataset columns share a name."""


class UnsupportedChartType(StorydeckError):
    """Chart mark is outside the five supported types."""


class UnknownColumn(StorydeckError):
    """A chart spec or predicate references a column the dataset lacks."""


class MissingMeasure(StorydeckError):
    """No quantitative encoding found in the chart spec."""


class EmptySubspace(StorydeckError):
    """No rows survive the chart's filter predicates."""


class MissingParameter(StorydeckError):
    """A description template slot has no value on the fact."""


class FocusNotInChart(StorydeckError):
    """A focus value does not exist in the chart's series."""


class DuplicateFact(StorydeckError):
    """The fact is already part of the story."""


class UnknownId(StorydeckError):
    """Referenced session / chart / fact / slide id does not exist."""


class InvalidPosition(StorydeckError):
    """Move target index is out of range or would overfill a slide."""


class CorruptSession(StorydeckError):
    """A persisted session file cannot be restored."""


class EmptyStory(StorydeckError):
    """Deck rendering requires at least one slide."""
