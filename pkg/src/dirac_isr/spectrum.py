"""Quantization conditions, root isolation and the approximate spectra.

Spin-symmetric field V = S = V1/sqrt|x| (V1 < 0): the levels are fixed by
universal order roots nu_n of

    H_nu(-sqrt(2 nu)) +- sqrt(2 nu) H_{nu-1}(-sqrt(2 nu)) = 0

(+ for branch A, psiA(0) = 0; - for branch B, psiB(0) = 0) and mapped to
energies by the real root of a cubic.  Electrostatic field V = V1/sqrt|x|:
the condition is the same pair with argument -(E/mc^2) sqrt(2 nu) and an
energy-dependent order nu(E).

Roots are refined by bisection on sign changes; the Hermite functions carry
mild cancellation noise near their zeros and bisection is insensitive to it.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .errors import ConvergenceError, DomainError, NoBoundStatesError
from .model import UNIT, PhysicalConstants, coupling, nu_electrostatic
from .specfun import gamma, hermite_fn

__all__ = [
    "Branch",
    "SpectralLine",
    "PhaseCharacteristics",
    "FRatio",
    "quantization_residual_spinsym",
    "solve_nu_roots",
    "energy_from_nu",
    "energy_from_nu_cubic",
    "solve_spinsym_spectrum",
    "solve_pseudospin_spectrum",
    "d0",
    "approx_nu",
    "approx_energy_expansion",
    "F_ratio_function",
    "electrostatic_residual",
    "f_phase",
    "phase_characteristics",
    "f_phase_parabola",
    "f_phase_positive_approx",
    "approx_electrostatic_energy",
    "asymptotic_electrostatic_energy",
    "solve_electrostatic_spectrum",
    "maslov_index",
    "v1_from_lambda",
]

NU_TOL = 1e-12
E_TOL = 1e-15   # relative to mc^2; the residual is steep at large nu, so refine to rounding level
_A_COEF = (4.0 - 3.0 * math.pi) / (24.0 * math.pi)
_B_COEF = 0.75


class Branch(str, enum.Enum):
    A = "A"   # psiA(0) = 0
    B = "B"   # psiB(0) = 0

    @classmethod
    def parse(cls, value) -> "Branch":
        try:
            return cls(str(getattr(value, "value", value)).upper())
        except ValueError:
            raise DomainError(f"branch must be A or B, got {value!r}") from None

    @property
    def other(self) -> "Branch":
        return Branch.B if self is Branch.A else Branch.A

    @property
    def sign(self) -> float:
        return 1.0 if self is Branch.A else -1.0


@dataclass(frozen=True)
class SpectralLine:
    n: int
    branch: Branch
    nu: float | None
    E: float
    method: str
    residual: float | None = None


@dataclass(frozen=True)
class PhaseCharacteristics:
    f_min: float
    f0: float
    f_inf: float
    n_minus: int


@dataclass(frozen=True)
class FRatio:
    exact: float
    approx: float
    pole: bool


def v1_from_lambda(lam: float, k: PhysicalConstants = UNIT, sign: float = -1.0) -> float:
    """V1 with coupling lambda = V1^2/(m hbar c^3) and the given sign."""
    if not lam > 0:
        raise DomainError("lambda must be positive")
    return math.copysign(math.sqrt(lam * k.m * k.hbar * k.c**3), sign)


def _hermite_pair(nu: float, z: float):
    h0 = hermite_fn(nu, z).real
    h1 = math.sqrt(2.0 * nu) * hermite_fn(nu - 1.0, z).real
    return h0, h1


# ---------------------------------------------------------------------------
# Spin-symmetric spectrum
# ---------------------------------------------------------------------------

def quantization_residual_spinsym(nu: float, branch, v1_sign: float = -1.0, with_scale: bool = False):
    """Origin condition of the spin-symmetric state as a function of nu.

    For V1 < 0 this is H_nu(-sqrt(2nu)) +- sqrt(2nu) H_{nu-1}(-sqrt(2nu)).
    For V1 > 0 the origin sits at y0 = +sqrt(2nu) and the same construction
    gives H_nu(y0) -+ y0 H_{nu-1}(y0) (there are no roots).
    """
    br = Branch.parse(branch)
    if not nu > 0:
        raise DomainError("nu must be positive")
    y0 = math.copysign(math.sqrt(2.0 * nu), v1_sign)
    h0, h1 = _hermite_pair(nu, y0)
    sgn = 1.0 if v1_sign < 0 else -1.0
    r = h0 + br.sign * sgn * h1
    if with_scale:
        return r, max(abs(h0), abs(h1))
    return r


def _bisect(f, a, b, xtol, label):
    try:
        return optimize.bisect(f, a, b, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=200)
    except (ValueError, RuntimeError) as exc:
        raise ConvergenceError(f"bisection failed on bracket [{a!r}, {b!r}] ({label}): {exc}") from exc


def solve_nu_roots(branch, n_max: int, step: float = 0.05) -> list[float]:
    """First n_max positive roots of the spin-symmetric condition (V1 < 0).

    Branch A roots sit near n - 1/6 (n >= 1), branch B near n + 1/6 (n >= 0).
    A scan with the given step isolates every sign change; each prediction
    window of half-width 0.3 must contain exactly one root.
    """
    br = Branch.parse(branch)
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    first = 1 if br is Branch.A else 0
    preds = [n + (-1.0 / 6.0 if br is Branch.A else 1.0 / 6.0) for n in range(first, first + n_max)]
    top = preds[-1] + 0.5
    grid = np.arange(0.01, top + step, step)

    def res(nu):
        return quantization_residual_spinsym(nu, br)

    vals = [res(v) for v in grid]
    roots = []
    for (a, fa), (b, fb) in zip(zip(grid, vals), zip(grid[1:], vals[1:])):
        if fa == 0.0:
            roots.append(float(a))
        elif fa * fb < 0:
            roots.append(_bisect(res, float(a), float(b), NU_TOL, f"branch {br.value}"))
    out = []
    for n, p in zip(range(first, first + n_max), preds):
        inside = [r for r in roots if abs(r - p) <= 0.3]
        if len(inside) != 1:
            raise ConvergenceError(
                f"branch {br.value}, n = {n}: found {len(inside)} roots in [{p - 0.3:.4f}, {p + 0.3:.4f}]"
            )
        out.append(inside[0])
    return out


def energy_from_nu(nu: float, V1: float, k: PhysicalConstants = UNIT) -> float:
    """Real root of c^2 hbar^2 (E - mc^2)^3 nu^2 + (E + mc^2) V1^4 = 0 in closed form."""
    if not nu > 0:
        raise DomainError("nu must be positive")
    if V1 == 0:
        raise DomainError("V1 must be nonzero")
    mc2 = k.mc2
    theta = V1 * V1 / (3.0**1.5 * k.m * k.hbar * k.c**3 * nu)
    r = math.hypot(theta, 1.0)
    u = theta * theta / (r + 1.0)     # sqrt(theta^2 + 1) - 1 without cancellation
    t23 = abs(theta) ** (2.0 / 3.0)
    return mc2 + 3.0 * mc2 * t23 * (u ** (2.0 / 3.0) - t23) / u ** (1.0 / 3.0)


def energy_from_nu_cubic(nu: float, V1: float, k: PhysicalConstants = UNIT) -> float:
    """Same root by bracketing (cross-check).

    In s = E - mc^2 the cubic a s^3 + V1^4 (s + 2 mc^2) is strictly
    increasing and changes sign on [-2 mc^2, 0].
    """
    mc2 = k.mc2
    a = (k.chbar * nu) ** 2
    v4 = V1**4
    s = optimize.brentq(lambda s: a * s**3 + v4 * (s + 2.0 * mc2), -2.0 * mc2, 0.0, xtol=1e-300, rtol=1e-15, maxiter=500)
    return mc2 + s


def solve_spinsym_spectrum(V1: float, branch, n_max: int, k: PhysicalConstants = UNIT) -> list[SpectralLine]:
    """Exact spin-symmetric levels (V = S = V1/sqrt|x|, W = 0)."""
    br = Branch.parse(branch)
    if V1 >= 0:
        raise NoBoundStatesError("spin-symmetric field with V1 >= 0 has no bound states")
    first = 1 if br is Branch.A else 0
    lines = []
    for n, nu in zip(range(first, first + n_max), solve_nu_roots(br, n_max)):
        r, sc = quantization_residual_spinsym(nu, br, with_scale=True)
        lines.append(SpectralLine(n, br, nu, energy_from_nu(nu, V1, k), "exact-root", abs(r) / sc))
    return lines


def solve_pseudospin_spectrum(V1: float, branch, n_max: int, k: PhysicalConstants = UNIT) -> list[SpectralLine]:
    """Pseudo-spin levels (S + V = 0, V = V1/sqrt|x|).

    The map (V1, E) -> (-V1, -E) with psiA <-> psiB turns them into
    spin-symmetric levels of the other branch, so E_n = -E_n(spin, -V1).
    """
    br = Branch.parse(branch)
    if V1 <= 0:
        raise NoBoundStatesError("pseudo-spin field with V1 <= 0 has no bound states")
    mirror = solve_spinsym_spectrum(-V1, br.other, n_max, k)
    return [SpectralLine(l.n, br, l.nu, -l.E, l.method, l.residual) for l in mirror]


def d0() -> float:
    """Gamma(1/3) / (12 * 3^{1/3} * Gamma(2/3))."""
    return (gamma(1.0 / 3.0) / (12.0 * 3.0 ** (1.0 / 3.0) * gamma(2.0 / 3.0))).real


def approx_nu(branch, n: int) -> float:
    """Perturbative order roots (branch A n >= 1, branch B n >= 0)."""
    br = Branch.parse(branch)
    if br is Branch.A:
        if n < 1:
            raise DomainError("branch A levels start at n = 1")
        D = d0()
        m = n - 1.0 / 6.0
        return m + math.sqrt(3.0) * D / (2.0 * math.pi * m ** (2.0 / 3.0)) - math.sqrt(3.0) * D * D / (
            4.0 * math.pi * m ** (4.0 / 3.0)
        )
    if n < 0:
        raise DomainError("branch B levels start at n = 0")
    return n + 1.0 / 6.0


def approx_energy_expansion(branch, n: int, lam: float, k: PhysicalConstants = UNIT, printed: bool = False) -> float:
    """mc^2 (1 - d + d^2/6), d = 2 (3 lam)^{2/3} / (6n -+ 1)^{2/3}.

    ``printed=True`` uses d^2/2 for the second-order term instead.
    """
    br = Branch.parse(branch)
    if br is Branch.A and n < 1:
        raise DomainError("branch A levels start at n = 1")
    if br is Branch.B and n < 0:
        raise DomainError("branch B levels start at n = 0")
    den = 6.0 * n - 1.0 if br is Branch.A else 6.0 * n + 1.0
    d = 2.0 * (3.0 * lam) ** (2.0 / 3.0) / den ** (2.0 / 3.0)
    return k.mc2 * (1.0 - d + d * d * (0.5 if printed else 1.0 / 6.0))


def F_ratio_function(nu: float, branch) -> FRatio:
    """Exact condition function and its oscillatory approximation at nu.

    Branch A: exact F = 1 + H_nu/(sqrt(2nu) H_{nu-1}) at -sqrt(2nu); approx is
    sin(pi(nu + 1/6))/sin(pi(nu - 1/6)) + D0/nu^{2/3}, whose zeros approximate
    those of F.  Branch B: exact is the residual H_nu - sqrt(2nu) H_{nu-1};
    approx is pi (2nu)^{(3nu+1)/6} e^{nu/2} (sin(pi nu - pi/6)
    + sin(pi nu + pi/6) / (64 nu^{4/3})).
    """
    br = Branch.parse(branch)
    if not nu > 0:
        raise DomainError("nu must be positive")
    z = -math.sqrt(2.0 * nu)
    h0, h1 = _hermite_pair(nu, z)
    if br is Branch.A:
        pole = abs(h1) <= 1e-12 * max(abs(h0), 1e-300)
        exact = math.inf if pole else 1.0 + h0 / h1
        s = math.sin(math.pi * (nu - 1.0 / 6.0))
        approx = math.inf if s == 0 else math.sin(math.pi * (nu + 1.0 / 6.0)) / s + d0() / nu ** (2.0 / 3.0)
        return FRatio(exact, approx, pole)
    fnu = math.pi * (2.0 * nu) ** ((3.0 * nu + 1.0) / 6.0) * math.exp(0.5 * nu)
    approx = fnu * (
        math.sin(math.pi * nu - math.pi / 6.0) + math.sin(math.pi * nu + math.pi / 6.0) / (64.0 * nu ** (4.0 / 3.0))
    )
    return FRatio(h0 - h1, approx, False)


# ---------------------------------------------------------------------------
# Electrostatic spectrum
# ---------------------------------------------------------------------------

def electrostatic_residual(E: float, V1: float, branch, k: PhysicalConstants = UNIT, with_scale: bool = False):
    """H_nu(z) +- sqrt(2nu) H_{nu-1}(z), z = -(E/mc^2) sqrt(2nu), nu = nu(E).

    Written for V1 < 0.  For V1 > 0 charge conjugation maps the problem to
    (-E, -V1) with the branches exchanged.
    """
    br = Branch.parse(branch)
    if V1 > 0:
        return electrostatic_residual(-E, -V1, br.other, k, with_scale)
    nu = nu_electrostatic(E, V1, k)
    z = -(E / k.mc2) * math.sqrt(2.0 * nu)
    h0, h1 = _hermite_pair(nu, z)
    r = h0 + br.sign * h1
    if with_scale:
        return r, max(abs(h0), abs(h1))
    return r


def f_phase(E: float, lam: float, branch, k: PhysicalConstants = UNIT) -> float:
    """nu +- 1/4 + (nu/pi)(eps sqrt(1 - eps^2) - arccos eps), eps = E/mc^2."""
    br = Branch.parse(branch)
    eps = E / k.mc2
    if not abs(eps) < 1:
        raise DomainError(f"f is defined for |E| < mc^2, got E = {E}")
    nu = lam / (1.0 - eps * eps) ** 1.5
    return nu + 0.25 * br.sign + nu / math.pi * (eps * math.sqrt(1.0 - eps * eps) - math.acos(eps))


def phase_characteristics(lam: float, branch) -> PhaseCharacteristics:
    br = Branch.parse(branch)
    q = 0.25 * br.sign
    f_min = q + 2.0 * lam / (3.0 * math.pi)
    f0 = q + 0.5 * lam
    f_inf = q - 2.0 * lam / (3.0 * math.pi)
    return PhaseCharacteristics(f_min, f0, f_inf, math.floor(f0) - math.floor(f_min))


def f_phase_parabola(E: float, lam: float, branch, k: PhysicalConstants = UNIT) -> float:
    """Quadratic approximation of f, meant for E < 0."""
    pc = phase_characteristics(lam, branch)
    eps = E / k.mc2
    return pc.f0 + 0.5 * lam * eps + 2.0 * lam / (3.0 * math.pi) * eps * eps


def f_phase_positive_approx(E: float, lam: float, branch, k: PhysicalConstants = UNIT) -> float:
    """nu + f_inf + a lam^2/(nu + b lam), meant for E > 0."""
    eps = E / k.mc2
    if not abs(eps) < 1:
        raise DomainError(f"f is defined for |E| < mc^2, got E = {E}")
    pc = phase_characteristics(lam, branch)
    nu = lam / (1.0 - eps * eps) ** 1.5
    return nu + pc.f_inf + _A_COEF * lam * lam / (nu + _B_COEF * lam)


def approx_electrostatic_energy(n: int, lam: float, branch, k: PhysicalConstants = UNIT):
    """Approximate level n (n >= 1): parabola inversion for n <= n_minus,
    the nu-quadratic for the positive levels.  None when the square root
    has no real value for this n.
    """
    br = Branch.parse(branch)
    if n < 1:
        raise DomainError("levels are numbered from n = 1")
    pc = phase_characteristics(lam, br)
    kk = n + math.floor(pc.f_min)
    mc2 = k.mc2
    if n <= pc.n_minus:
        arg = 1.0 + 32.0 / (3.0 * math.pi) * (kk - pc.f0) / lam
        if arg < 0:
            return None
        return -mc2 * 3.0 * math.pi / 8.0 * (1.0 - math.sqrt(arg))
    disc = (kk - pc.f_inf + _B_COEF * lam) ** 2 - 4.0 * _A_COEF * lam * lam
    if disc < 0:
        return None
    nu = 0.5 * (kk - pc.f_inf - _B_COEF * lam + math.sqrt(disc))
    if not nu > 0:
        return None
    arg = 1.0 - (lam / nu) ** (2.0 / 3.0)
    if arg < 0:
        return None
    return mc2 * math.sqrt(arg)


def asymptotic_electrostatic_energy(n: int, lam: float, branch, k: PhysicalConstants = UNIT):
    """Large-n form mc^2 sqrt(1 - lam^{2/3} / (n + floor(f_min) - f_inf)^{2/3})."""
    pc = phase_characteristics(lam, branch)
    m = n + math.floor(pc.f_min) - pc.f_inf
    if not m > 0:
        return None
    arg = 1.0 - (lam / m) ** (2.0 / 3.0)
    return k.mc2 * math.sqrt(arg) if arg >= 0 else None


def _invert_f(target: float, lam: float, br: Branch, k: PhysicalConstants) -> float:
    mc2 = k.mc2
    lo, hi = -mc2 * (1 - 1e-15), mc2 * (1 - 1e-15)
    return optimize.brentq(lambda E: f_phase(E, lam, br, k) - target, lo, hi, xtol=1e-15 * mc2, maxiter=200)


def solve_electrostatic_spectrum(
    lam: float, branch, n_max: int, k: PhysicalConstants = UNIT, v1_sign: float = -1.0, nu_cap: float = 100.0
) -> list[SpectralLine]:
    """Exact electrostatic levels n = 1..n_max (ascending for V1 < 0).

    The f-phase supplies a grid with phase step 0.05 (plus points 1e-3 mc^2
    apart around each predicted level); every sign change of the exact
    residual on it is refined by bisection.  The scan starts where the order
    reaches ``nu_cap``; a level predicted below that point is reported as a
    convergence failure rather than silently skipped.

    For V1 > 0 the levels are E_n = -E_n(other branch, V1 < 0), numbered
    downward from +mc^2.
    """
    br = Branch.parse(branch)
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    if v1_sign > 0:
        lines = solve_electrostatic_spectrum(lam, br.other, n_max, k, -1.0, nu_cap)
        return [SpectralLine(l.n, br, l.nu, -l.E, l.method, l.residual) for l in lines]
    V1 = v1_from_lambda(lam, k)
    mc2 = k.mc2
    pc = phase_characteristics(lam, br)
    fl = math.floor(pc.f_min)
    cap = max(nu_cap, 3.0 * lam)
    e_cut = -mc2 * math.sqrt(1.0 - (lam / cap) ** (2.0 / 3.0))
    f_cut = f_phase(e_cut, lam, br, k)
    if math.floor(f_cut) > fl:
        raise ConvergenceError(
            f"level(s) with f <= {f_cut:.3f} lie below E = {e_cut:.6g} (order > {cap:g}); outside the kernel envelope"
        )
    k_top = n_max + fl
    phases = np.arange(f_cut, k_top + 0.6, 0.05)
    grid = {e_cut}
    grid.update(_invert_f(p, lam, br, k) for p in phases[1:])
    for kk in range(fl + 1, k_top + 1):
        ep = _invert_f(kk, lam, br, k)
        for j in range(-3, 4):
            e = ep + j * 1e-3 * mc2
            if e_cut < e < mc2:
                grid.add(e)
    grid = sorted(grid)

    def res(E):
        return electrostatic_residual(E, V1, br, k)

    vals = [res(E) for E in grid]
    lines = []
    for (a, fa), (b, fb) in zip(zip(grid, vals), zip(grid[1:], vals[1:])):
        if fa * fb < 0 or fa == 0.0:
            E = a if fa == 0.0 else _bisect(res, a, b, E_TOL * mc2, f"electrostatic branch {br.value}")
            r, sc = electrostatic_residual(E, V1, br, k, with_scale=True)
            lines.append(SpectralLine(len(lines) + 1, br, nu_electrostatic(E, V1, k), E, "exact-root", abs(r) / sc))
            if len(lines) == n_max:
                break
    if len(lines) < n_max:
        raise ConvergenceError(f"only {len(lines)} of {n_max} electrostatic levels found for branch {br.value}")
    return lines


def maslov_index(lam: float, branch) -> float:
    """-{f_inf}, minus the fractional part of the large-n phase offset."""
    if not lam > 0:
        raise DomainError("lambda must be positive")
    f_inf = phase_characteristics(lam, branch).f_inf
    return -(f_inf - math.floor(f_inf))
