"""plotkit: figure rendering for planarqb sweep outputs."""

__version__ = "0.1.0"

from .reader import SchemaError, TrajectoryFile, read_trajectory
from .render import PlotSpec, RenderResult, render_sweep, sweep_plot_spec

__all__ = ["SchemaError", "TrajectoryFile", "read_trajectory",
           "PlotSpec", "RenderResult", "render_sweep", "sweep_plot_spec"]
