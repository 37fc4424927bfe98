"""Batch figure rendering for simulation result CSVs.

Pure CSV-to-image transforms: the input schemas are the documented result
formats of the simulation/link-budget command line tools, and rendering the
same inputs twice produces byte-identical files.
"""

from .figures import FigureSpec, build_figure, render
from .schema import SchemaError, read_csv

__all__ = ["FigureSpec", "build_figure", "render", "SchemaError", "read_csv"]

__version__ = "0.1.0"
