"""Figures from bie2d error-field CSV files."""

from .fields import Field, ParseError, read_field
from .render import PlotSpec, render

__all__ = ["Field", "ParseError", "read_field", "PlotSpec", "render"]
