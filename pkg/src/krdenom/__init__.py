"""Exact denominator formulas and related combinatorics for KR modules."""

from __future__ import annotations

__version__ = "0.1.0"
