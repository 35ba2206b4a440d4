"""Closed-form Dirac bound states for inverse-square-root fields.

Submodules: ``specfun`` (Gamma, 1F1, Hermite functions), ``model``
(constants, field configurations, parameter maps), ``wavefun`` (solutions
and spinors), ``spectrum`` (quantization and approximations), ``oracle``
(shooting integrator) and ``cli``.
"""
from .errors import (
    ContinuityError,
    ConvergenceError,
    DegenerateOrderError,
    DomainError,
    NoBoundStatesError,
    StiffnessError,
)
from .model import (
    UNIT,
    ElectrostaticConfig,
    GeneralConfig,
    PhysicalConstants,
    PseudoSpinConfig,
    SpinSymConfig,
)
from .spectrum import Branch, SpectralLine

__version__ = "0.1.0"
