"""Spectra of quasi-periodic Schrödinger operators from periodic approximants."""
from .errors import HarperLabError
from .intervals import IntervalSet, hausdorff
from .numtheory import Frequency, cf_expand
from .potential import TrigPotential, make_amo

__version__ = "0.1.0"

__all__ = [
    "HarperLabError",
    "IntervalSet",
    "hausdorff",
    "Frequency",
    "cf_expand",
    "TrigPotential",
    "make_amo",
    "__version__",
]
