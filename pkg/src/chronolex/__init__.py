"""Diachronic word meaning and emotion toolkit.

Builds per-time-slice word embeddings (truncated SVD over PPMI) from plain-text
corpora, derives similarity / frequency / co-occurrence / emotion series from
them, persists everything in a single store file, and serves the result over a
REST API for interactive exploration.
"""

from chronolex.errors import ChronolexError

__version__ = "0.1.0"

__all__ = ["ChronolexError", "__version__"]
