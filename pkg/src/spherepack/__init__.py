"""Numerical verification toolkit for the E8 sphere packing bound."""

__version__ = "0.1.0"

from .qseries import Nome, QSeries
from .forms import FormId, HalfPlanePoint

__all__ = ["Nome", "QSeries", "FormId", "HalfPlanePoint", "__version__"]
