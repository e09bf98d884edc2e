"""Exact valuative-stability invariants of polarised toric varieties."""

__version__ = "0.1.0"
