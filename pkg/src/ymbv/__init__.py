"""Exact verification engine for the homotopy BV structure on the Yang-Mills dgca."""

__version__ = "0.1.0"
