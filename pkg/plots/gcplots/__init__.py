"""Offline figure generation from giantcavity experiment output files.

This package never computes physics: it parses the documented table and
grid formats and renders them.
"""

from .figures import FigureSpec, plot_trajectories, plot_wigner_row
from .io_formats import SchemaError, read_table, read_wigner_grid

__all__ = [
    "FigureSpec",
    "SchemaError",
    "plot_trajectories",
    "plot_wigner_row",
    "read_table",
    "read_wigner_grid",
]
