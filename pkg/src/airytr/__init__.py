"""Exact topological recursion, Airy structures, Virasoro constraints and genus-one period checks."""
from __future__ import annotations

__version__ = "0.1.0"
