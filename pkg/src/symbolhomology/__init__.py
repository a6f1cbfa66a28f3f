"""Symbolic algebra of decorated polygon moduli spaces over GF(2)."""

from __future__ import annotations

__version__ = "0.1.0"
