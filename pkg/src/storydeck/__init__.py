"""storydeck: mine data facts from charts, organize them into a story,
and export the result as a slide deck."""

from .config import Config, CostConfig, MiningConfig
from .errors import StorydeckError
from .facts import DataFact, FactType, detect_all, mine_facts, select_top_k
from .illustrate import IllustratedFact, describe, illustrate
from .story import Story, insert_fact, story_from_dict, story_to_dict
from .deck import render_deck, export

__all__ = [
    "Config",
    "CostConfig",
    "MiningConfig",
    "StorydeckError",
    "DataFact",
    "FactType",
    "detect_all",
    "mine_facts",
    "select_top_k",
    "IllustratedFact",
    "describe",
    "illustrate",
    "Story",
    "insert_fact",
    "story_from_dict",
    "story_to_dict",
    "render_deck",
    "export",
]

__version__ = "0.1.0"
