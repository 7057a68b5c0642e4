"""Figure rendering for wiretapgame sweep CSV artifacts."""

from .figures import (
    FIGURE_KINDS,
    EmptyCsvError,
    MissingColumnError,
    PlotSpec,
    read_csv,
    render,
)

__version__ = "0.1.0"
