"""Closed-form solutions w, w_G and the spinor components built from them.

All solutions are written as ``w = exp(-y^2/2) Q(y)`` with ``y = y0 + s t``
linear in ``t = sqrt(x)``.  The x-derivative ``dw/dx = s W_y / (2 t)`` is
singular-looking at the origin; spinor components at ``x = 0`` are therefore
obtained as one-sided limits from the Taylor jet of ``W(y)`` at ``y0``.

Full-line bound states use the parity of the |x|-extended problem: if
``(psiA, psiB)`` solves the system for x > 0 then ``(-psiA(-x), psiB(-x))``
and ``(psiA(-x), -psiB(-x))`` solve it for x < 0.  Continuity at the origin
selects the first form when psiA(0) = 0 (branch A) and the second when
psiB(0) = 0 (branch B).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import ContinuityError, DegenerateOrderError, DomainError
from .model import (
    UNIT,
    ElectrostaticConfig,
    GeneralConfig,
    PhysicalConstants,
    PseudoSpinConfig,
    ReducedParams,
    SpinSymConfig,
    as_general,
    compute_AB,
    map_y_symmetric,
    nu_symmetric,
    reduced_params,
    spinsym_params,
)
from .specfun import hermite_fn, kummer_1f1, rgamma

__all__ = [
    "SpinorSample",
    "WavefunctionSample",
    "GeneralSolution",
    "BoundState",
    "w_jet",
    "eval_w_symmetric",
    "eval_w_general",
    "eval_w_general_solution",
    "darboux_coefficients",
    "darboux_spinor",
    "general_spinor",
    "spinsym_spinor",
    "pseudospin_spinor",
    "electrostatic_spinor",
    "electrostatic_crosscheck",
    "decay_constraint",
    "assemble_bound_state",
]


@dataclass(frozen=True)
class SpinorSample:
    x: float
    psiA: complex
    psiB: complex


@dataclass(frozen=True)
class WavefunctionSample:
    """Samples of a normalised full-line state."""

    x: np.ndarray
    psiA: np.ndarray
    psiB: np.ndarray
    E: float
    nu: float
    norm: float
    metadata: dict = field(default_factory=dict)


@dataclass(frozen=True)
class GeneralSolution:
    """w_G with Phi = c1 H_nu(y) + c2 1F1(-nu/2; 1/2; y^2)."""

    c1: complex
    c2: complex
    params: ReducedParams

    def __post_init__(self):
        if self.c1 == 0 and self.c2 == 0:
            raise DomainError("(c1, c2) must not both vanish")


# ---------------------------------------------------------------------------
# The Hermite-type building block and its y-derivatives
# ---------------------------------------------------------------------------

def _phi_pair(nu, y, c1, c2):
    """(Phi, D) with D = Phi'/(2 nu), written so that nu = 0 is harmless."""
    phi = c1 * hermite_fn(nu, y) if c1 != 0 else 0j
    d = c1 * hermite_fn(nu - 1.0, y) if c1 != 0 else 0j
    if c2 != 0:
        y2 = y * y
        phi += c2 * kummer_1f1(-0.5 * nu, 0.5, y2)
        d -= c2 * y * kummer_1f1(1.0 - 0.5 * nu, 1.5, y2)
    return phi, d


def w_jet(nu, g, y, c1=1.0, c2=0.0):
    """(W, W_y, W_yy) for W = exp(-y^2/2) (Phi + (g/2nu) Phi').

    With c2 = 0 this is exp(-y^2/2)(H_nu + g H_{nu-1}).
    """
    nu, y = complex(nu), complex(y)
    phi, d = _phi_pair(nu, y, c1, c2)
    u = 2.0 * y * d - phi            # Phi''/(2 nu)
    q = phi + g * d
    q1 = 2.0 * nu * d + g * u
    q2 = 2.0 * nu * u + g * (2.0 * (1.0 - nu) * d + 2.0 * y * u)
    e = cmath.exp(-0.5 * y * y)
    return e * q, e * (q1 - y * q), e * (q2 - 2.0 * y * q1 + (y * y - 1.0) * q)


def _w_and_dx(params: ReducedParams, x: float, c1=1.0, c2=0.0):
    """(w, dw/dx) at x > 0."""
    t = math.sqrt(x)
    y = params.y0 + params.slope * t
    W, Wy, _ = w_jet(params.nu, params.g, y, c1, c2)
    return W, params.slope * Wy / (2.0 * t)


def eval_w_symmetric(x: float, A, B, chbar_sign: int = 1, k: PhysicalConstants = UNIT) -> complex:
    """Fundamental solution of w'' + (A + B/sqrt(x)) w / (c hbar)^2 = 0.

    ``x`` may be negative: the extended map uses sqrt(|x|), so w(-x) = w(x).
    """
    if not complex(A).real < 0:
        raise DomainError(f"need A < 0, got {A}")
    nu = nu_symmetric(A, B, k, chbar_sign)
    y0 = map_y_symmetric(0.0, A, B, k, chbar_sign)
    y = map_y_symmetric(abs(x), A, B, k, chbar_sign)
    # g = -sgn(AB) sqrt(2 nu) for the primary solution; -y0 covers the partner
    W, _, _ = w_jet(nu, -complex(y0), y)
    return W


def eval_w_general(x: float, config: GeneralConfig, E, chbar_sign: int = 1, k: PhysicalConstants = UNIT) -> complex:
    """Fundamental solution exp(-y^2/2)(H_nu(y) + g H_{nu-1}(y)) of the reduced equation."""
    p = reduced_params(config, E, k, chbar_sign)
    W, _, _ = w_jet(p.nu, p.g, p.y(x))
    return W


def eval_w_general_solution(x: float, gs: GeneralSolution, k: PhysicalConstants = UNIT) -> complex:
    """General solution exp(-y^2/2)(Phi + (g/2nu) dPhi/dy)."""
    p = gs.params
    if p.nu == 0:
        raise DegenerateOrderError("g/(2 nu) is undefined at nu = 0")
    W, _, _ = w_jet(p.nu, p.g, p.y(x), gs.c1, gs.c2)
    return W


# ---------------------------------------------------------------------------
# Spinors
# ---------------------------------------------------------------------------

def darboux_coefficients(config, E, k: PhysicalConstants = UNIT):
    """(a1, a2_reg, a2_sing, b1, b2_reg, b2_sing) with a2 = a2_reg + a2_sing/sqrt(x)."""
    gc = as_general(config)
    ch = k.chbar
    mc2 = k.mc2
    a1 = cmath.sqrt(complex(gc.V1 - gc.S1))
    b1 = cmath.sqrt(complex(gc.V1 + gc.S1))
    a2r = (1j * b1 * (E + mc2 + gc.S0 - gc.V0) + a1 * gc.W0) / ch
    a2s = 1j * b1 * (gc.S1 - gc.V1) / ch
    b2r = -(1j * a1 * (-E + mc2 + gc.S0 + gc.V0) + b1 * gc.W0) / ch
    b2s = -1j * a1 * (gc.S1 + gc.V1) / ch
    return a1, a2r, a2s, b1, b2r, b2s


def darboux_spinor(x: float, config, E, w_value, w_derivative, k: PhysicalConstants = UNIT) -> SpinorSample:
    """(psiA, psiB) = (a1 w' + a2 w, b1 w' + b2 w) at x > 0."""
    gc = as_general(config)
    if gc.V1 == 0 and gc.S1 == 0:
        raise DomainError("the transformation needs (V1, S1) != (0, 0)")
    if x <= 0:
        raise DomainError("F = 1/sqrt(x) is singular at x = 0; use general_spinor for the limit")
    a1, a2r, a2s, b1, b2r, b2s = darboux_coefficients(gc, E, k)
    F = 1.0 / math.sqrt(x)
    psiA = a1 * w_derivative + (a2r + a2s * F) * w_value
    psiB = b1 * w_derivative + (b2r + b2s * F) * w_value
    return SpinorSample(x, psiA, psiB)


def _origin_limit(params: ReducedParams, c1, c2, d1, r, sng):
    """Limit at t -> 0 of d1 dw/dx + (r + sng/t) w; raises if it diverges."""
    s = params.slope
    W, Wy, Wyy = w_jet(params.nu, params.g, params.y0, c1, c2)
    singular = d1 * 0.5 * s * Wy + sng * W
    value = d1 * 0.5 * s * s * Wyy + sng * s * Wy + r * W
    jet = max(abs(W), abs(Wy), abs(s * Wyy))
    scale = max(abs(d1 * s) * jet, abs(sng) * jet, abs(r * W), 1e-300)
    if abs(singular) > 1e-7 * scale:
        raise DomainError("component diverges at the origin for these parameters")
    return value


def general_spinor(x: float, config, E, k: PhysicalConstants = UNIT, c1=1.0, c2=0.0) -> SpinorSample:
    """Spinor of the general family from w_G, including the x = 0 limit."""
    gc = as_general(config)
    if gc.V1 == 0 and gc.S1 == 0:
        raise DomainError("the transformation needs (V1, S1) != (0, 0)")
    p = reduced_params(gc, E, k)
    if x < 0:
        raise DomainError("general_spinor is defined for x >= 0")
    if x == 0:
        a1, a2r, a2s, b1, b2r, b2s = darboux_coefficients(gc, E, k)
        return SpinorSample(
            0.0,
            _origin_limit(p, c1, c2, a1, a2r, a2s),
            _origin_limit(p, c1, c2, b1, b2r, b2s),
        )
    w, dw = _w_and_dx(p, x, c1, c2)
    return darboux_spinor(x, gc, E, w, dw, k)


def spinsym_spinor(x: float, config: SpinSymConfig, E, k: PhysicalConstants = UNIT) -> SpinorSample:
    """psiA from the two-Hermite solution; psiB = i(W psiA - c hbar psiA')/(E + mc^2 + Cs)."""
    den = E + k.mc2 + config.Cs
    if den == 0:
        raise ZeroDivisionError("E = -(mc^2 + Cs): the lower component is undefined")
    p = spinsym_params(config, E, k)
    if x < 0:
        raise DomainError("spinsym_spinor is defined for x >= 0")
    if x == 0:
        W, _, _ = w_jet(p.nu, p.g, p.y0)
        psiB = _origin_limit(p, 1.0, 0.0, -1j * k.chbar / den, 0.0, 1j * config.W1 / den)
        return SpinorSample(0.0, W, psiB)
    w, dw = _w_and_dx(p, x)
    Wf = config.W1 / math.sqrt(x)
    return SpinorSample(x, w, 1j * (Wf * w - k.chbar * dw) / den)


def pseudospin_spinor(x: float, config: PseudoSpinConfig, E, k: PhysicalConstants = UNIT) -> SpinorSample:
    """Pseudo-spin solution: psiB is the spin-symmetric upper component under
    (V1, W1, E, Cs) -> (-V1, -W1, -E, Cp); psiA = i(c hbar psiB' + W psiB)/(mc^2 + Cp - E).
    """
    den = k.mc2 + config.Cp - E
    if den == 0:
        raise ZeroDivisionError("E = mc^2 + Cp: the upper component is undefined")
    mirror = config.mirrored()
    p = spinsym_params(mirror, -E, k)
    if x < 0:
        raise DomainError("pseudospin_spinor is defined for x >= 0")
    if x == 0:
        W, _, _ = w_jet(p.nu, p.g, p.y0)
        psiA = _origin_limit(p, 1.0, 0.0, 1j * k.chbar / den, 0.0, 1j * config.W1 / den)
        return SpinorSample(0.0, psiA, W)
    w, dw = _w_and_dx(p, x)
    Wf = config.W1 / math.sqrt(x)
    return SpinorSample(x, 1j * (k.chbar * dw + Wf * w) / den, w)


def electrostatic_spinor(
    x: float, cfg: ElectrostaticConfig, E, gs: GeneralSolution | None = None, k: PhysicalConstants = UNIT
) -> SpinorSample:
    """psiA = w_G' + (i/c hbar)(E + mc^2 - V1/sqrt(x)) w_G and psiB likewise with E - mc^2.

    ``gs`` defaults to the x > 0 decaying solution (c1, c2) = (1, 0).
    """
    if not abs(E) < k.mc2:
        raise DomainError(f"bound regime needs |E| < mc^2, got {E}")
    p = gs.params if gs is not None else reduced_params(cfg, E, k)
    c1, c2 = (gs.c1, gs.c2) if gs is not None else (1.0, 0.0)
    ch = p.chbar_sign * k.chbar
    mc2 = k.mc2
    if x < 0:
        raise DomainError("electrostatic_spinor is defined for x >= 0")
    if x == 0:
        sng = -1j * cfg.V1 / ch
        return SpinorSample(
            0.0,
            _origin_limit(p, c1, c2, 1.0, 1j * (E + mc2) / ch, sng),
            _origin_limit(p, c1, c2, 1.0, 1j * (E - mc2) / ch, sng),
        )
    w, dw = _w_and_dx(p, x, c1, c2)
    pot = cfg.V1 / math.sqrt(x)
    return SpinorSample(x, dw + 1j * (E + mc2 - pot) * w / ch, dw + 1j * (E - mc2 - pot) * w / ch)


def electrostatic_crosscheck(
    x: float, cfg: ElectrostaticConfig, E, gs: GeneralSolution | None = None,
    k: PhysicalConstants = UNIT, printed: bool = False,
):
    """Ratios psi(direct) / psi(simplified form) for both components.

    The simplified form is exp(-y^2/2)((E +- mc^2 - 2i c hbar alpha2) Phi
    + (g/2nu)(E +- mc^2 + 2i c hbar alpha2) Phi').  Agreement means both ratios
    equal i/(c hbar).  ``printed=True`` drops the factor c from the alpha2
    terms, as the formula is printed; that variant is not proportional.
    """
    p = gs.params if gs is not None else reduced_params(cfg, E, k)
    c1, c2 = (gs.c1, gs.c2) if gs is not None else (1.0, 0.0)
    ch = p.chbar_sign * k.chbar
    kk = p.chbar_sign * k.hbar if printed else ch
    y = p.y(x)
    phi, d = _phi_pair(complex(p.nu), complex(y), c1, c2)
    e = cmath.exp(-0.5 * y * y)
    direct = electrostatic_spinor(x, cfg, E, gs, k)
    out = []
    for shift, val in ((k.mc2, direct.psiA), (-k.mc2, direct.psiB)):
        simple = e * ((E + shift - 2j * kk * p.alpha2) * phi + p.g * (E + shift + 2j * kk * p.alpha2) * d)
        out.append(val / simple)
    return tuple(out)


def decay_constraint(nu):
    """(c1, c2) with 2^nu Gamma((nu+1)/2) c1 + (-i)^nu sqrt(pi) c2 = 0.

    Written with 1/Gamma and normalised to c2 = 1, so at the poles
    nu = -1, -3, ... the relation gives c1 = 0.  ``nu`` is the order of the
    representation the constraint is applied to.
    """
    nu = complex(nu)
    r = rgamma(0.5 * (nu + 1.0))
    c1 = -cmath.exp(-0.5j * math.pi * nu) * math.sqrt(math.pi) * r * cmath.exp(-nu * math.log(2.0))
    return c1, 1.0 + 0j


# ---------------------------------------------------------------------------
# Full-line bound states
# ---------------------------------------------------------------------------

def _half_line(family: str, config, E, k: PhysicalConstants):
    """(evaluator on x >= 0, nu, y0, slope) for the decaying x > 0 solution."""
    if family == "spinsym":
        p = spinsym_params(config, E, k)
        return (lambda x: spinsym_spinor(x, config, E, k)), p
    if family == "pseudospin":
        p = spinsym_params(config.mirrored(), -E, k)
        return (lambda x: pseudospin_spinor(x, config, E, k)), p
    if family == "electrostatic":
        if config.V1 > 0:
            raise DomainError("electrostatic assembly is implemented for V1 < 0; use the E -> -E mirror")
        p = reduced_params(config, E, k)
        return (lambda x: electrostatic_spinor(x, config, E, None, k)), p
    raise DomainError(f"unknown family {family!r}")


def _envelope(p: ReducedParams, drop: float = 36.0) -> float:
    """x at which exp(-y^2/2)|y|^nu has fallen by exp(-drop) below its peak."""
    nu = max(complex(p.nu).real, 0.0)
    y0, s = complex(p.y0).real, complex(p.slope).real

    def logamp(y):
        return -0.5 * y * y + nu * math.log(max(abs(y), 1e-300))

    peak_y = max(math.sqrt(max(nu, 0.25)), y0)
    ref = logamp(peak_y)
    y = peak_y
    while logamp(y) > ref - drop:
        y += 0.25
    return ((y - y0) / s) ** 2


@dataclass(frozen=True)
class BoundState:
    """Normalised full-line bound state; call it to sample (psiA, psiB)."""

    family: str
    branch: str
    E: float
    nu: float
    X: float
    norm: float
    mismatch: float
    _half: object = field(repr=False, compare=False)

    def __call__(self, x: float) -> SpinorSample:
        s = self._half(abs(x))
        a, b = s.psiA / self.norm, s.psiB / self.norm
        if x < 0:
            if self.branch == "A":
                a = -a
            else:
                b = -b
        return SpinorSample(x, a, b)

    def sample(self, xs) -> WavefunctionSample:
        xs = np.asarray(xs, dtype=float)
        # the half-line solution is shared by x and -x
        half = {ax: self._half(ax) for ax in np.unique(np.abs(xs))}
        psiA = np.empty(xs.shape, complex)
        psiB = np.empty(xs.shape, complex)
        flip_a, flip_b = (-1.0, 1.0) if self.branch == "A" else (1.0, -1.0)
        for i, x in enumerate(xs):
            s = half[abs(x)]
            psiA[i] = s.psiA / self.norm * (flip_a if x < 0 else 1.0)
            psiB[i] = s.psiB / self.norm * (flip_b if x < 0 else 1.0)
        return WavefunctionSample(
            x=xs,
            psiA=psiA,
            psiB=psiB,
            E=self.E,
            nu=self.nu,
            norm=self.norm,
            metadata={"family": self.family, "branch": self.branch, "X": self.X, "mismatch": self.mismatch},
        )


def assemble_bound_state(
    family: str, branch: str, E: float, config, k: PhysicalConstants = UNIT, continuity_tol: float = 1e-4
) -> BoundState:
    """Build the normalised bound state at eigenvalue E.

    ``mismatch`` is the jump of the odd component at the origin relative to
    the largest amplitude of the normalised state; ``ContinuityError`` is
    raised when it exceeds ``continuity_tol`` (E is not an eigenvalue of the
    requested branch).
    """
    branch = str(branch).upper()
    if branch not in ("A", "B"):
        raise DomainError(f"branch must be 'A' or 'B', got {branch!r}")
    half, p = _half_line(family, config, E, k)
    X = _envelope(p)
    T = math.sqrt(X)

    def dens(t):
        s = half(t * t)
        return (abs(s.psiA) ** 2 + abs(s.psiB) ** 2) * 2.0 * t

    edges = np.linspace(0.0, T, 9)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        total += integrate.quad(dens, lo, hi, epsabs=0.0, epsrel=1e-12, limit=200)[0]
    norm = math.sqrt(2.0 * total)

    at0 = half(0.0)
    odd = at0.psiA if branch == "A" else at0.psiB
    amp = 0.0
    for t in np.linspace(0.0, T, 200):
        s = half(t * t)
        amp = max(amp, abs(s.psiA), abs(s.psiB))
    mismatch = 2.0 * abs(odd) / amp
    if mismatch > continuity_tol:
        raise ContinuityError(
            f"E = {E} is not a branch-{branch} eigenvalue (origin mismatch {mismatch:.3g})", mismatch
        )
    nu = complex(p.nu).real
    return BoundState(family, branch, float(E), nu, X, norm, mismatch, half)
