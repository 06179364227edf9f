"""Winning shifts of automatic words: the choice game, automata and predicates."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    AlphabetError,
    DimensionExceeded,
    FormulaError,
    RepresentationError,
    ResourceError,
    UnknownWord,
    UnsupportedFeature,
    WinshiftError,
)

__all__ = [
    "AlphabetError",
    "DimensionExceeded",
    "FormulaError",
    "RepresentationError",
    "ResourceError",
    "UnknownWord",
    "UnsupportedFeature",
    "WinshiftError",
    "__version__",
]
