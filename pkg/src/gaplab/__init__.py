"""GapLab - executable laboratory for gap-based counting classes."""

__version__ = "0.1.0"
