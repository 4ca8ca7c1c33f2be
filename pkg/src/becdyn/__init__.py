"""becdyn: nonlinear dynamics of Bose-Einstein condensates with long-range
interactions.

Variational Gaussian reductions of the mean-field dynamics (monopolar 1/r
and dipolar interactions), a chaos toolkit for the resulting Hamiltonian
systems, and a numerically exact radial grid solver for cross-validation.
"""

__version__ = "0.1.0"

from .scaling import (
    MonopolarPhysical,
    MonopolarScaled,
    DipolarPhysical,
    DipolarScaled,
    to_scaled_monopolar,
    to_scaled_dipolar,
    unscale_energy,
    scale_energy,
)
from .dynamics import HamSystem, Trajectory, SectionPoint, integrate, poincare
from .monopolar import MonoState, MonoFixedPoint
from .dipolar import DipState, DipFixedPoint
from .radial import RadialGrid, RadialState, StationaryResult

__all__ = [
    "__version__",
    "MonopolarPhysical", "MonopolarScaled", "DipolarPhysical", "DipolarScaled",
    "to_scaled_monopolar", "to_scaled_dipolar", "unscale_energy", "scale_energy",
    "HamSystem", "Trajectory", "SectionPoint", "integrate", "poincare",
    "MonoState", "MonoFixedPoint", "DipState", "DipFixedPoint",
    "RadialGrid", "RadialState", "StationaryResult",
]
