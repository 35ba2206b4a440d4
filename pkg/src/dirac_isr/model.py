"""Physical constants, field configurations and the derived parameter maps.

Every formula carries (m, hbar, c) explicitly.  Sign conventions for the
Hermite-function solutions:

* ``alpha2 = -sqrt(-A) / (2 c hbar)`` so that the Gaussian factor decays;
* ``y = sqrt(-2 alpha2) (sqrt(2x) - alpha1 / (2 alpha2))``, which places the
  origin at ``y(0) = -sgn(B) sqrt(2 nu)`` in the symmetric case;
* ``g = -alpha1 / sqrt(-2 alpha2) - i sqrt(V1 - S1) sqrt(V1 + S1) / (sqrt(-alpha2) c hbar)``.

With these choices the solutions satisfy their governing equations; see the
residual tests in ``tests/test_wavefun.py``.  Passing ``chbar_sign=-1`` gives
the partner solution obtained by flipping the sign of ``c hbar`` (order
``-nu``, imaginary ``y``).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = [
    "PhysicalConstants",
    "UNIT",
    "GeneralConfig",
    "SpinSymConfig",
    "PseudoSpinConfig",
    "ElectrostaticConfig",
    "ReducedParams",
    "compute_AB",
    "alphas_from_AB",
    "reduced_params",
    "spinsym_params",
    "nu_g_general",
    "nu_symmetric",
    "nu_electrostatic",
    "map_y",
    "map_y_symmetric",
    "lambda_theta",
    "coupling",
]


def _finite(*vals):
    return all(cmath.isfinite(complex(v)) for v in vals)


def _maybe_real(z: complex, tol: float = 0.0):
    """Return a float when the imaginary part is exactly (or within tol) zero."""
    if isinstance(z, complex) and abs(z.imag) <= tol * abs(z.real):
        return z.real
    return z


@dataclass(frozen=True)
class PhysicalConstants:
    m: float = 1.0
    hbar: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        for name in ("m", "hbar", "c"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be a positive finite number, got {v!r}")

    @property
    def mc2(self) -> float:
        return self.m * self.c**2

    @property
    def chbar(self) -> float:
        return self.c * self.hbar


UNIT = PhysicalConstants()


@dataclass(frozen=True)
class GeneralConfig:
    """V = V0 + V1/sqrt(x), W = W0, S = S0 + S1/sqrt(x)."""

    V0: complex = 0.0
    V1: complex = 0.0
    W0: complex = 0.0
    S0: complex = 0.0
    S1: complex = 0.0

    def __post_init__(self):
        if not _finite(self.V0, self.V1, self.W0, self.S0, self.S1):
            raise DomainError("field coefficients must be finite")


@dataclass(frozen=True)
class SpinSymConfig:
    """V = V1/sqrt(x), W = W1/sqrt(x), S = Cs + V1/sqrt(x)."""

    V1: float
    W1: float = 0.0
    Cs: float = 0.0

    def __post_init__(self):
        if not _finite(self.V1, self.W1, self.Cs):
            raise DomainError("field coefficients must be finite")


@dataclass(frozen=True)
class PseudoSpinConfig:
    """V = V1/sqrt(x), W = W1/sqrt(x), S = Cp - V1/sqrt(x)."""

    V1: float
    W1: float = 0.0
    Cp: float = 0.0

    def __post_init__(self):
        if not _finite(self.V1, self.W1, self.Cp):
            raise DomainError("field coefficients must be finite")

    def mirrored(self) -> SpinSymConfig:
        """Spin-symmetric configuration whose upper component is our lower one."""
        return SpinSymConfig(V1=-self.V1, W1=-self.W1, Cs=self.Cp)


@dataclass(frozen=True)
class ElectrostaticConfig:
    """V = V1/sqrt(x), W = S = 0."""

    V1: float

    def __post_init__(self):
        if not _finite(self.V1):
            raise DomainError("V1 must be finite")
        if self.V1 == 0:
            raise DomainError("electrostatic configuration needs V1 != 0")


def as_general(config) -> GeneralConfig:
    """Embed a specialised configuration in the general family (W1 = 0 only)."""
    if isinstance(config, GeneralConfig):
        return config
    if isinstance(config, ElectrostaticConfig):
        return GeneralConfig(V1=config.V1)
    if isinstance(config, SpinSymConfig):
        if config.W1 != 0:
            raise DomainError("W1/sqrt(x) is not part of the general family; use spinsym_params")
        return GeneralConfig(V1=config.V1, S0=config.Cs, S1=config.V1)
    if isinstance(config, PseudoSpinConfig):
        if config.W1 != 0:
            raise DomainError("W1/sqrt(x) is not part of the general family")
        return GeneralConfig(V1=config.V1, S0=config.Cp, S1=-config.V1)
    raise TypeError(f"unsupported configuration {type(config).__name__}")


@dataclass(frozen=True)
class ReducedParams:
    """Derived quantities of one (configuration, energy) pair."""

    A: complex
    B: complex
    alpha1: complex
    alpha2: complex
    nu: complex
    g: complex
    chbar_sign: int = 1

    def y(self, x: float):
        return map_y(x, self.alpha1, self.alpha2)

    @property
    def y0(self):
        return map_y(0.0, self.alpha1, self.alpha2)

    @property
    def slope(self):
        """dy/dt for t = sqrt(x): y = y0 + slope * t."""
        return _maybe_real(2.0 * cmath.sqrt(-complex(self.alpha2)))


def compute_AB(config, E, k: PhysicalConstants = UNIT):
    """(A, B) of the reduced second-order equation."""
    g = as_general(config)
    mc2 = k.mc2
    A = (E - g.V0) ** 2 - (mc2 + g.S0) ** 2 - g.W0**2
    B = -2.0 * ((E - g.V0) * g.V1 + (mc2 + g.S0) * g.S1)
    return A, B


def _is_real(*vals):
    return all(not isinstance(v, complex) or v.imag == 0 for v in vals)


def alphas_from_AB(A, B, k: PhysicalConstants = UNIT, chbar_sign: int = 1):
    """(alpha1, alpha2) for the decaying convention."""
    ch = chbar_sign * k.chbar
    if _is_real(A) and complex(A).real >= 0:
        raise DomainError(f"bound-state maps need A < 0, got A = {A}")
    sq = cmath.sqrt(-complex(A))
    a1 = -complex(B) / (ch * cmath.sqrt(2.0) * sq)
    a2 = -sq / (2.0 * ch)
    if _is_real(A, B):
        return a1.real, a2.real
    return a1, a2


def _sqrt(z):
    z = complex(z)
    return cmath.sqrt(z)


def _nu_g(a1, a2, V1, S1, ch):
    a1, a2 = complex(a1), complex(a2)
    nu = -a1 * a1 / (4.0 * a2) - (V1 * V1 - S1 * S1) / (2.0 * a2 * ch * ch)
    g = -a1 / _sqrt(-2.0 * a2) - 1j * _sqrt(V1 - S1) * _sqrt(V1 + S1) / (_sqrt(-a2) * ch)
    return nu, g


def reduced_params(config, E, k: PhysicalConstants = UNIT, chbar_sign: int = 1) -> ReducedParams:
    """All derived parameters of the general family at energy E."""
    gc = as_general(config)
    A, B = compute_AB(gc, E, k)
    a1, a2 = alphas_from_AB(A, B, k, chbar_sign)
    nu, g = _nu_g(a1, a2, complex(gc.V1), complex(gc.S1), chbar_sign * k.chbar)
    return ReducedParams(A, B, a1, a2, _maybe_real(nu, 1e-15), _maybe_real(g), chbar_sign)


def spinsym_params(config: SpinSymConfig, E, k: PhysicalConstants = UNIT, chbar_sign: int = 1) -> ReducedParams:
    """Parameters of the spin-symmetric family with the W1/sqrt(x) field."""
    M = k.mc2 + config.Cs
    ch = chbar_sign * k.chbar
    if not M * M > E * E:
        raise DomainError(f"bound regime needs (mc^2 + Cs)^2 > E^2, got E = {E}")
    A = E * E - M * M
    B = -2.0 * (E + M) * config.V1
    a1, a2 = alphas_from_AB(A, B, k, chbar_sign)
    a1c, a2c = complex(a1), complex(a2)
    nu = -a1c * a1c / (4.0 * a2c) + config.W1**2 / (2.0 * a2c * ch * ch)
    g = -a1c / _sqrt(-2.0 * a2c) - config.W1 / (ch * _sqrt(-a2c))
    return ReducedParams(A, B, a1, a2, _maybe_real(nu, 1e-15), _maybe_real(g), chbar_sign)


def nu_g_general(config: GeneralConfig, E, k: PhysicalConstants = UNIT, chbar_sign: int = 1):
    """(nu, g) of the general fundamental solution."""
    p = reduced_params(config, E, k, chbar_sign)
    return p.nu, p.g


def nu_symmetric(A, B, k: PhysicalConstants = UNIT, chbar_sign: int = 1):
    """nu = B^2 / (4 c hbar (-A)^{3/2})."""
    if _is_real(A) and complex(A).real >= 0:
        raise DomainError(f"bound-state maps need A < 0, got A = {A}")
    nu = complex(B) ** 2 / (4.0 * chbar_sign * k.chbar * (-complex(A)) ** 1.5)
    return _maybe_real(nu)


def nu_electrostatic(E: float, V1: float, k: PhysicalConstants = UNIT) -> float:
    """Order of the electrostatic problem at energy E (|E| < mc^2)."""
    mc2 = k.mc2
    if not abs(E) < mc2:
        raise DomainError(f"electrostatic order needs |E| < mc^2, got E = {E}")
    return k.m**2 * k.c**3 * V1**2 / k.hbar / (mc2 * mc2 - E * E) ** 1.5


def map_y(x: float, alpha1, alpha2):
    """y(x) for x >= 0 (the half-line; x < 0 is handled by parity)."""
    if x < 0:
        raise DomainError("map_y is defined for x >= 0; use parity for x < 0")
    s = cmath.sqrt(-2.0 * complex(alpha2))
    y = s * (math.sqrt(2.0 * x) - complex(alpha1) / (2.0 * complex(alpha2)))
    if _is_real(alpha1, alpha2) and complex(alpha2).real < 0:
        return y.real
    return y


def map_y_symmetric(x: float, A, B, k: PhysicalConstants = UNIT, chbar_sign: int = 1):
    """y = sqrt(sqrt(-4A)/(c hbar)) (sqrt(x) + B/(2A)) for the symmetric case."""
    if x < 0:
        raise DomainError("map_y_symmetric is defined for x >= 0")
    A, B = complex(A), complex(B)
    pre = cmath.sqrt(cmath.sqrt(-4.0 * A) / (chbar_sign * k.chbar))
    y = pre * (math.sqrt(x) + B / (2.0 * A))
    if chbar_sign > 0 and _is_real(A, B) and A.real < 0:
        return y.real
    return y


def coupling(V1: float, k: PhysicalConstants = UNIT) -> float:
    """Dimensionless strength lambda = V1^2 / (m hbar c^3)."""
    return V1 * V1 / (k.m * k.hbar * k.c**3)


def lambda_theta(V1: float, k: PhysicalConstants = UNIT, nu: float = 1.0):
    """(lambda, theta) with theta = lambda / (3^{3/2} nu)."""
    if not nu > 0:
        raise DomainError("theta needs nu > 0")
    lam = coupling(V1, k)
    return lam, lam / (3.0**1.5 * nu)
