"""Direct numerical integration of the Dirac system with shooting.

Independent of the closed forms: only the field coefficients and the
constants are shared.  With psiB = i*phi and x = t^2 the half-line system

    dpsiA/dt = (2/c hbar) [ (W0 t + W1) psiA + ((V0 - S0 - mc^2 - E) t + V1 - S1) phi ]
    dphi/dt  = -(2/c hbar) [ ((V0 + S0 + mc^2 - E) t + V1 + S1) psiA + (W0 t + W1) phi ]

is real, traceless and regular at t = 0, so the origin condition is an
ordinary initial value and the Wronskian psiA1 phi2 - phi1 psiA2 is
constant in t.  The outward solution starts at t0 from its Taylor expansion;
the inward one starts at x_max on the locally decaying exponential.  Their
normalised Wronskian vanishes exactly at eigenvalues.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize
from scipy.integrate import simpson, solve_ivp

from .errors import ConvergenceError, DomainError, StiffnessError
from .model import UNIT, ElectrostaticConfig, GeneralConfig, PhysicalConstants, PseudoSpinConfig, SpinSymConfig
from .spectrum import Branch, SpectralLine

__all__ = ["ShootingProblem", "HalfLineData", "integrate_halfline", "find_eigenvalues", "eigenfunction"]


@dataclass(frozen=True)
class ShootingProblem:
    """Half-line shooting setup.

    ``config`` may be any of the configuration types; the |x|-extended
    problem has the needed parity only when W vanishes, which
    ``find_eigenvalues`` enforces.  ``x_max=None`` picks the outer radius
    per energy as the outer turning point plus ``decay_lengths / kappa``.
    """

    family: str
    branch: Branch
    config: object
    constants: PhysicalConstants = UNIT
    x_max: float | None = None
    decay_lengths: float = 40.0
    t0: float = 1e-4
    rtol: float = 1e-10
    coeffs: tuple = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "branch", Branch.parse(self.branch))
        object.__setattr__(self, "coeffs", _coefficients(self.config))
        if not 0 < self.t0 < 1e-2:
            raise DomainError("t0 must satisfy 0 < t0 << 1")


def _coefficients(config):
    """(V0, V1, W0, W1, S0, S1) of the field."""
    if isinstance(config, GeneralConfig):
        vals = (config.V0, config.V1, config.W0, 0.0, config.S0, config.S1)
    elif isinstance(config, SpinSymConfig):
        vals = (0.0, config.V1, 0.0, config.W1, config.Cs, config.V1)
    elif isinstance(config, PseudoSpinConfig):
        vals = (0.0, config.V1, 0.0, config.W1, config.Cp, -config.V1)
    elif isinstance(config, ElectrostaticConfig):
        vals = (0.0, config.V1, 0.0, 0.0, 0.0, 0.0)
    else:
        raise TypeError(f"unsupported configuration {type(config).__name__}")
    if any(isinstance(v, complex) and v.imag != 0 for v in vals):
        raise DomainError("the oracle integrates real fields only")
    return tuple(float(getattr(v, "real", v)) for v in vals)


@dataclass(frozen=True)
class HalfLineData:
    E: float
    t_match: float
    x_max: float
    outward: np.ndarray   # (psiA, phi) at t_match from the origin
    inward: np.ndarray    # (psiA, phi) at t_match from x_max
    mismatch: float       # normalised Wronskian, zero at eigenvalues


def _matrices(prob: ShootingProblem, E: float):
    V0, V1, W0, W1, S0, S1 = prob.coeffs
    k = prob.constants
    c = 2.0 / k.chbar
    mc2 = k.mc2
    M0 = c * np.array([[W1, V1 - S1], [-(V1 + S1), -W1]])
    M1 = c * np.array([[W0, V0 - S0 - mc2 - E], [-(V0 + S0 + mc2 - E), -W0]])
    return M0, M1


def _local_k2(prob: ShootingProblem, E: float, x: float) -> float:
    """a(x) b(x) - W(x)^2 in units of (c hbar)^2; positive means classically forbidden."""
    V0, V1, W0, W1, S0, S1 = prob.coeffs
    k = prob.constants
    r = 1.0 / math.sqrt(x)
    V, S, W = V0 + V1 * r, S0 + S1 * r, W0 + W1 * r
    a = V - S - k.mc2 - E
    b = E - V - S - k.mc2
    return (a * b - W * W) / k.chbar**2


def _geometry(prob: ShootingProblem, E: float):
    """(kappa_inf, matching radius, outer radius)."""
    if not abs(E) < prob.constants.mc2 + abs(prob.coeffs[4]) + abs(prob.coeffs[0]):
        raise DomainError(f"E = {E} lies outside the bound-state window")
    k2_inf = _local_k2(prob, E, 1e300)
    if not k2_inf > 0:
        raise DomainError(f"E = {E}: no decaying solution at infinity")
    kappa = math.sqrt(k2_inf)
    # outermost classically allowed point on a geometric grid
    xs = np.geomspace(1e-8, 1e8, 801)
    allowed = [x for x in xs if _local_k2(prob, E, x) < 0]
    x_turn = max(allowed) if allowed else 0.0
    x_match = max(x_turn, 0.5 / kappa)
    x_max = prob.x_max if prob.x_max is not None else x_turn + prob.decay_lengths / kappa
    if x_max <= x_match:
        raise DomainError("x_max must lie beyond the matching point")
    return kappa, x_match, x_max


def _solve(M0, M1, y0, t_span, rtol, dense=False):
    def rhs(t, y):
        a11 = M0[0, 0] + M1[0, 0] * t
        a12 = M0[0, 1] + M1[0, 1] * t
        a21 = M0[1, 0] + M1[1, 0] * t
        return [a11 * y[0] + a12 * y[1], a21 * y[0] - a11 * y[1]]

    sol = solve_ivp(rhs, t_span, y0, method="DOP853", rtol=rtol, atol=1e-300, dense_output=dense)
    if sol.status != 0:
        raise StiffnessError(f"integration failed on t in {t_span}: {sol.message}")
    return sol


def _origin_start(prob: ShootingProblem, M0, M1):
    y0 = np.array([0.0, 1.0]) if prob.branch is Branch.A else np.array([1.0, 0.0])
    t = prob.t0
    # y(t) = y0 + t M0 y0 + t^2/2 (M0^2 + M1) y0 + O(t^3)
    return y0 + t * (M0 @ y0) + 0.5 * t * t * ((M0 @ M0 + M1) @ y0)


def _outer_start(prob: ShootingProblem, E: float, x_max: float):
    V0, V1, W0, W1, S0, S1 = prob.coeffs
    k = prob.constants
    r = 1.0 / math.sqrt(x_max)
    a = (V0 + V1 * r) - (S0 + S1 * r) - k.mc2 - E
    W = W0 + W1 * r
    kap = math.sqrt(_local_k2(prob, E, x_max))
    # psiA' = (W psiA + a phi)/(c hbar) = -kappa psiA
    return np.array([1.0, -(kap * k.chbar + W) / a])


def integrate_halfline(prob: ShootingProblem, E: float) -> HalfLineData:
    """Outward and inward solutions at the matching point for energy E."""
    _, x_m, x_max = _geometry(prob, E)
    M0, M1 = _matrices(prob, E)
    t_m = math.sqrt(x_m)
    out = _solve(M0, M1, _origin_start(prob, M0, M1), (prob.t0, t_m), prob.rtol).y[:, -1]
    inn = _solve(M0, M1, _outer_start(prob, E, x_max), (math.sqrt(x_max), t_m), prob.rtol).y[:, -1]
    wr = out[0] * inn[1] - out[1] * inn[0]
    return HalfLineData(E, t_m, x_max, out, inn, wr / (np.linalg.norm(out) * np.linalg.norm(inn)))


def _mismatch(prob, E):
    return integrate_halfline(prob, E).mismatch


def _refine(prob, a, b, tol):
    # Brent's method keeps the bracket, so it degrades to bisection at worst
    return optimize.brentq(lambda E: _mismatch(prob, E), a, b, xtol=tol, maxiter=200)


def _check_parity(prob: ShootingProblem):
    V0, V1, W0, W1, S0, S1 = prob.coeffs
    if W0 != 0 or W1 != 0:
        raise DomainError("full-line bound states need W = 0 (parity of the |x| extension)")


def find_eigenvalues(
    prob: ShootingProblem, n_max: int, E_lo: float | None = None, E_hi: float | None = None,
    dE: float = 0.02, tol: float = 1e-11,
) -> list[SpectralLine]:
    """Lowest n_max levels of the branch in (E_lo, E_hi) by a scan and bracketed refinement.

    Levels are numbered from 1 in ascending order; the node count of psiA on
    the half line is recorded in ``method`` as ``oracle:nodes=<k>``.  A
    ``ConvergenceError`` flags node counts that do not step by one in a
    single direction.
    """
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    _check_parity(prob)
    mc2 = prob.constants.mc2 + prob.coeffs[4]
    lo = -mc2 * (1 - 1e-3) if E_lo is None else E_lo
    hi = mc2 * (1 - 1e-4) if E_hi is None else E_hi
    grid = np.arange(lo, hi, dE * prob.constants.mc2)
    levels = []
    prev_e, prev_f = None, None
    for E in grid:
        f = _mismatch(prob, float(E))
        if prev_f is not None and (f == 0 or f * prev_f < 0):
            root = float(E) if f == 0 else _refine(prob, prev_e, float(E), tol)
            levels.append(root)
            if len(levels) == n_max:
                break
        prev_e, prev_f = float(E), f
    lines = []
    counts = []
    for i, E in enumerate(levels):
        nodes = eigenfunction(prob, E).nodes
        counts.append(nodes)
        lines.append(SpectralLine(i + 1, prob.branch, None, E, f"oracle:nodes={nodes}", _mismatch(prob, E)))
    steps = {b - a for a, b in zip(counts, counts[1:])}
    # nodes fall with E when the lower component carries the binding (mirrored fields)
    if steps and steps != {1} and steps != {-1}:
        raise ConvergenceError(f"node counts {counts} skip or repeat: a level may have been missed")
    return lines


@dataclass(frozen=True)
class OracleEigenfunction:
    x: np.ndarray
    psiA: np.ndarray
    psiB: np.ndarray
    nodes: int


def eigenfunction(prob: ShootingProblem, E: float, n_points: int = 2000) -> OracleEigenfunction:
    """Normalised half-line eigenfunction (x >= 0) at an oracle eigenvalue.

    Returned with psiB = i*phi; normalisation is over the full line, which
    by parity is twice the half-line integral.
    """
    _, x_m, x_max = _geometry(prob, E)
    M0, M1 = _matrices(prob, E)
    t_m = math.sqrt(x_m)
    s_out = _solve(M0, M1, _origin_start(prob, M0, M1), (prob.t0, t_m), prob.rtol, dense=True)
    s_in = _solve(M0, M1, _outer_start(prob, E, x_max), (math.sqrt(x_max), t_m), prob.rtol, dense=True)
    ts = np.linspace(0.0, math.sqrt(x_max), n_points)
    yo = s_out.sol(np.clip(ts[ts <= t_m], prob.t0, None))
    yi = s_in.sol(ts[ts > t_m])
    a, b = s_out.y[:, -1], s_in.y[:, -1]
    # scale the inward piece onto the outward one at t_m
    scale = (a @ b) / (b @ b)
    y = np.concatenate([yo, scale * yi], axis=1)
    psiA, phi = y
    dens = (psiA**2 + phi**2) * 2.0 * ts
    half = simpson(dens, x=ts)
    norm = math.sqrt(2.0 * half)
    sign = np.sign(psiA[np.argmax(abs(psiA) > 1e-8 * abs(psiA).max())])
    inner = psiA[1:][abs(psiA[1:]) > 1e-9 * abs(psiA).max()]
    nodes = int(np.count_nonzero(np.diff(np.sign(inner)) != 0))
    return OracleEigenfunction(ts**2, sign * psiA / norm, 1j * sign * phi / norm, nodes)
