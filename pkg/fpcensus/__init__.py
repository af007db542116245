"""Finitely presented group toolkit and index-four cover census."""

__version__ = "0.1.0"
