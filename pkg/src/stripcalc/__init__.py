"""Numerical toolkit for spectral multipliers of sub-Laplacians with drift.

Submodules
----------
grid          sampled functions and transforms on centred grids
spaces        dyadic cutoffs, Bessel and weighted Sobolev norms
paley_wiener  band cutoffs, local/global splitting, strip shifts, decay checks
euclid        R^n with a drift: kernels, conjugated multipliers, propagation
solvable      rank-one solvable extensions: characters and ball integrals
verifier      thresholds, assumption constants, atoms, bmo, operator norms
cli           command-line front end (``stripcalc``)
"""

from . import errors
from .errors import *  # noqa: F401,F403
from .euclid import EuclidGroup
from .grid import GridFunction, SpectralObject
from .solvable import SolvableGroup

__version__ = "0.1.0"

__all__ = ["errors", "EuclidGroup", "GridFunction", "SpectralObject", "SolvableGroup",
           "__version__", *errors.__all__]
