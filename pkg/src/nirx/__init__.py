"""Content-focused explorer for neural re-ranking results."""

__version__ = "0.1.0"
