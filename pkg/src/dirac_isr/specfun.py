"""Gamma, Kummer 1F1 and the Hermite function of arbitrary complex order.

All routines are scalar and pure.  The Hermite function is

    H_nu(z) = 2^nu sqrt(pi) [ 1F1(-nu/2; 1/2; z^2) / Gamma((1-nu)/2)
                              - 2 z 1F1((1-nu)/2; 3/2; z^2) / Gamma(-nu/2) ]

which is entire in both nu and z and collapses to the classical Hermite
polynomials at non-negative integer nu (the reciprocal Gamma factors vanish).

Near zeros of H_nu, and for large positive z, the two 1F1 terms cancel.  Two
remedies are layered on top of the double-precision series:

* for Re z > |Im z| and large |z| the convergent part of the large-argument
  expansion 2^nu U(-nu/2, 1/2, z^2) is used when it reaches ``rel_tol``;
* for real z beyond the turning point (z^2 > 2 nu + 1) and real nu, either
  upward recurrence in the order from two low orders (larger nu and z), or
  Taylor stepping of the Hermite ODE inward from a point where the expansion
  above converges; both are stable there;
* otherwise, when the series result is smaller than ``fallback_below`` times
  the summed magnitude of the series terms, the same definition is re-evaluated in extended
  precision (mpmath numbers, working precision raised until the cancellation
  is covered).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import mpmath

from .errors import ConvergenceError, DomainError

__all__ = [
    "EvalOptions",
    "DEFAULT_OPTIONS",
    "gamma",
    "rgamma",
    "loggamma",
    "kummer_1f1",
    "hermite_fn",
    "hermite_fn_derivative",
    "hermite_inner_asymptotic",
]

_LOG_MAX = 709.78  # log(max double)


@dataclass(frozen=True)
class EvalOptions:
    rel_tol: float = 1e-13
    max_terms: int = 10_000
    compensated_summation: bool = True
    #: relative size of the result (vs. the summed magnitude of all series
    #: terms) below which the extended-precision path is used
    fallback_below: float = 1e-3
    extended_fallback: bool = True

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


DEFAULT_OPTIONS = EvalOptions()


# ---------------------------------------------------------------------------
# Gamma
# ---------------------------------------------------------------------------

# Lanczos-type rational approximation, g = 671/128, 14 terms.
_LANCZOS_G = 5.24218750000000000
_LANCZOS_C0 = 0.999999999999997092
_LANCZOS_COF = (
    57.1562356658629235,
    -59.5979603554754912,
    14.1360979747417471,
    -0.491913816097620199,
    0.339946499848118887e-4,
    0.465236289270485756e-4,
    -0.983744753048795646e-4,
    0.158088703224912494e-3,
    -0.210264441724104883e-3,
    0.217439618115212643e-3,
    -0.164318106536763890e-3,
    0.844182239838527433e-4,
    -0.261908384015814087e-4,
    0.368991826595316234e-5,
)


def _sincospi(x: float) -> tuple[float, float]:
    """(sin(pi x), cos(pi x)) with exact zeros at (half-)integers."""
    n = round(2.0 * x)
    f = x - 0.5 * n
    s, c = math.sin(math.pi * f), math.cos(math.pi * f)
    q = n % 4
    if q == 0:
        return s, c
    if q == 1:
        return c, -s
    if q == 2:
        return -s, -c
    return -c, s


def _sinpi(z: complex) -> complex:
    s, c = _sincospi(z.real)
    py = math.pi * z.imag
    if py == 0.0:
        return complex(s, 0.0)
    return complex(s * math.cosh(py), c * math.sinh(py))


def _is_pole(z: complex) -> bool:
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def _loggamma_right(z: complex) -> complex:
    # valid for Re z >= 1/2
    tmp = z + _LANCZOS_G
    tmp = (z + 0.5) * cmath.log(tmp) - tmp
    ser = _LANCZOS_C0
    y = z
    for cof in _LANCZOS_COF:
        y = y + 1.0
        ser += cof / y
    return tmp + cmath.log(2.5066282746310005 * ser / z)


def loggamma(z) -> complex:
    """A logarithm of Gamma(z) (branch not normalised; exp() is exact)."""
    z = complex(z)
    if _is_pole(z):
        raise DomainError(f"Gamma has a pole at {z.real:g}")
    if z.real < 0.5:
        return math.log(math.pi) - cmath.log(_sinpi(z)) - _loggamma_right(1.0 - z)
    return _loggamma_right(z)


def _real_rgamma(x: float) -> float:
    if abs(x) < 0.5:
        return x / math.gamma(1.0 + x)   # Gamma(x) itself may overflow here
    if abs(x) < 170.0:
        return 1.0 / math.gamma(x)
    sign = -1.0 if x < 0 and math.floor(x) % 2 == 1 else 1.0
    lg = math.lgamma(x)
    if -lg > _LOG_MAX:
        raise OverflowError(f"1/Gamma({x}) exceeds the double range")
    return sign * math.exp(-lg)


def gamma(z) -> complex:
    """Gamma function on the complex plane (reflection for Re z < 1/2)."""
    z = complex(z)
    if z.imag == 0.0 and not _is_pole(z):
        # libm is ~1 ulp on the real axis; the Lanczos/log route loses ~|z| ulps
        try:
            return complex(math.gamma(z.real))
        except OverflowError:
            raise OverflowError(f"Gamma({z.real}) exceeds the double range") from None
    lg = loggamma(z)
    if lg.real > _LOG_MAX:
        raise OverflowError(f"Gamma({complex(z)}) exceeds the double range")
    return cmath.exp(lg)


def rgamma(z) -> complex:
    """1/Gamma(z); exactly zero at the poles 0, -1, -2, ..."""
    z = complex(z)
    if _is_pole(z):
        return 0j
    if z.imag == 0.0:
        return complex(_real_rgamma(z.real))
    if z.real < 0.5:
        lg = _loggamma_right(1.0 - z)
        s = _sinpi(z)
        if lg.real + math.log(abs(s)) - math.log(math.pi) > _LOG_MAX:
            raise OverflowError(f"1/Gamma({z}) exceeds the double range")
        return s * cmath.exp(lg) / math.pi
    lg = _loggamma_right(z)
    return cmath.exp(-lg)


# ---------------------------------------------------------------------------
# Kummer 1F1
# ---------------------------------------------------------------------------

def _check_b(b: complex) -> None:
    if _is_pole(b):
        raise DomainError(f"1F1 undefined for b = {b.real:g} (non-positive integer)")


def _series_1f1(a: complex, b: complex, z: complex, opts: EvalOptions):
    """Power series of 1F1; returns (sum, sum of |terms|)."""
    sr, si = 1.0, 0.0
    cr = ci = 0.0
    term = 1.0 + 0.0j
    absum = 1.0
    compensated = opts.compensated_summation
    for k in range(opts.max_terms):
        term = term * ((a + k) * z / ((b + k) * (k + 1)))
        if term == 0:
            break
        tr, ti = term.real, term.imag
        if compensated:
            t = sr + tr
            if abs(sr) >= abs(tr):
                cr += (sr - t) + tr
            else:
                cr += (tr - t) + sr
            sr = t
            t = si + ti
            if abs(si) >= abs(ti):
                ci += (si - t) + ti
            else:
                ci += (ti - t) + si
            si = t
        else:
            sr += tr
            si += ti
        mag = abs(term)
        absum += mag
        ratio = abs((a + k + 1) * z / ((b + k + 1) * (k + 2)))
        if ratio < 0.5 and mag <= opts.rel_tol * abs(complex(sr + cr, si + ci)) * (1.0 - ratio):
            break
    else:
        partial = complex(sr + cr, si + ci)
        raise ConvergenceError(
            f"1F1({a}; {b}; {z}) did not converge in {opts.max_terms} terms", partial
        )
    return complex(sr + cr, si + ci), absum


def _series_1f1_mp(a, b, z, tol, max_terms):
    """Same series in mpmath arithmetic (current working precision)."""
    total = mpmath.mpc(1)
    term = mpmath.mpc(1)
    absum = mpmath.mpf(1)
    for k in range(max_terms):
        term = term * (a + k) * z / ((b + k) * (k + 1))
        if term == 0:
            break
        total += term
        mag = abs(term)
        absum += mag
        ratio = abs((a + k + 1) * z / ((b + k + 1) * (k + 2)))
        if ratio < 0.5 and mag <= tol * abs(total):
            break
    else:
        raise ConvergenceError("extended-precision 1F1 did not converge", complex(total))
    return total, absum


def _kummer(a: complex, b: complex, z: complex, opts: EvalOptions):
    """1F1 with the Kummer transformation for Re z < 0; returns (value, scale)."""
    if z.real < 0:
        s, absum = _series_1f1(b - a, b, -z, opts)
        e = cmath.exp(z)
        return e * s, abs(e) * absum
    return _series_1f1(a, b, z, opts)


def kummer_1f1(a, b, z, opts: EvalOptions = DEFAULT_OPTIONS) -> complex:
    """Confluent hypergeometric function 1F1(a; b; z)."""
    a, b, z = complex(a), complex(b), complex(z)
    _check_b(b)
    if not all(cmath.isfinite(v) for v in (a, b, z)):
        raise DomainError("1F1 arguments must be finite")
    if z == 0:
        return 1.0 + 0j
    return _kummer(a, b, z, opts)[0]


# ---------------------------------------------------------------------------
# Hermite function
# ---------------------------------------------------------------------------

def _hermite_large_z(nu: complex, z: complex, opts: EvalOptions):
    """(2z)^nu 2F0(-nu/2, (1-nu)/2;; -1/z^2), or None if it cannot reach tol."""
    if not (z.real > abs(z.imag) and abs(z) >= 4.0):
        return None
    a = -0.5 * nu
    c = 0.5 - 0.5 * nu
    w = -1.0 / (z * z)
    total = 1.0 + 0j
    term = 1.0 + 0j
    prev = math.inf
    for k in range(200):
        term = term * ((a + k) * (c + k) / (k + 1)) * w
        mag = abs(term)
        if mag == 0.0:
            break
        if mag > prev:
            return None
        total += term
        if mag <= opts.rel_tol * abs(total):
            break
        prev = mag
    else:
        return None
    return cmath.exp(nu * cmath.log(2.0 * z)) * total


def _hermite_upward(nu: float, z: float, opts: EvalOptions):
    """Real z beyond the turning point: H_nu is the dominant solution of
    H_{v+1} = 2z H_v - 2v H_{v-1}, so upward recurrence from low orders
    (where the large-z expansion converges) is stable."""
    steps = int(math.floor(nu)) - 1
    v = nu - steps
    h_prev = _hermite_large_z(complex(v - 1.0), complex(z), opts)
    h = _hermite_large_z(complex(v), complex(z), opts)
    if h_prev is None or h is None:
        return None
    h_prev, h = h_prev.real, h.real
    for _ in range(steps):
        h_prev, h = h, 2.0 * z * h - 2.0 * v * h_prev
        v += 1.0
    return complex(h)


def _hermite_outer(nu: float, z: float, opts: EvalOptions):
    """Real H_nu(z) from the large-z expansion or upward recurrence, else None."""
    v = _hermite_large_z(complex(nu), complex(z), opts)
    if v is None and nu > 3 and z >= 4 and z * z > 2 * nu + 1:
        v = _hermite_upward(nu, z, opts)
    return None if v is None else v.real


def _hermite_inward(nu: float, z: float, opts: EvalOptions, max_step: float = 0.5):
    """Real z > 0 beyond the turning point, where H_nu is the recessive
    solution of h'' - 2z h' + 2 nu h = 0: start further out, where the
    large-z forms are accurate, and Taylor-step the ODE back in to z."""
    za = max(6.0, math.sqrt(max(2.0 * nu + 1.0, 0.0)) + 2.0, z)
    for _ in range(4):
        h, hm = _hermite_outer(nu, za, opts), _hermite_outer(nu - 1.0, za, opts)
        if h is not None and hm is not None:
            break
        za += 1.0
    else:
        return None
    d = 2.0 * nu * hm
    nsteps = math.ceil((za - z) / max_step)
    if nsteps == 0:
        return complex(h)
    step = (z - za) / nsteps
    for _ in range(nsteps):
        # Taylor coefficients about za: (k+2)(k+1) c_{k+2} = 2 za (k+1) c_{k+1} + 2 (k - nu) c_k
        ck, ck1 = h, d
        val, der = h + d * step, d
        pw = step
        for k in range(opts.max_terms):
            ck2 = (2.0 * za * (k + 1) * ck1 + 2.0 * (k - nu) * ck) / ((k + 2) * (k + 1))
            tv = ck2 * pw * step
            td = (k + 2) * ck2 * pw
            val += tv
            der += td
            if k > 4 and abs(tv) <= 0.01 * opts.rel_tol * abs(val) and abs(td) <= 0.01 * opts.rel_tol * (abs(der) + abs(val)):
                break
            ck, ck1, pw = ck1, ck2, pw * step
        else:
            return None
        h, d = val, der
        za += step
    return complex(h)


def _hermite_series(nu: complex, z: complex, opts: EvalOptions):
    z2 = z * z
    r1 = rgamma(0.5 - 0.5 * nu)
    r2 = rgamma(-0.5 * nu)
    t1 = t2 = 0j
    s1 = s2 = 0.0
    if r1 != 0:
        f1, m1 = _kummer(-0.5 * nu, 0.5 + 0j, z2, opts)
        t1 = r1 * f1
        s1 = abs(r1) * m1
    if r2 != 0 and z != 0:
        f2, m2 = _kummer(0.5 - 0.5 * nu, 1.5 + 0j, z2, opts)
        t2 = 2.0 * z * r2 * f2
        s2 = abs(2.0 * z * r2) * m2
    pre = cmath.exp(nu * math.log(2.0)) * math.sqrt(math.pi)
    return pre * (t1 - t2), abs(pre) * max(s1, s2)


def _hermite_extended(nu: complex, z: complex, opts: EvalOptions, digits_lost: float):
    dps = int(digits_lost) + 30
    for _ in range(6):
        with mpmath.workdps(dps):
            n = mpmath.mpc(nu)
            x = mpmath.mpc(z)
            x2 = x * x
            tol = mpmath.mpf(10) ** (-(dps - 5))
            parts = []
            for a, b, pref in (
                (-n / 2, mpmath.mpf(0.5), mpmath.rgamma((1 - n) / 2)),
                ((1 - n) / 2, mpmath.mpf(1.5), -2 * x * mpmath.rgamma(-n / 2)),
            ):
                if pref == 0:
                    continue
                if mpmath.re(x2) < 0:
                    s, big = _series_1f1_mp(b - a, b, -x2, tol, 50 * opts.max_terms)
                    e = mpmath.exp(x2)
                    parts.append((pref * e * s, abs(pref * e) * big))
                else:
                    s, big = _series_1f1_mp(a, b, x2, tol, 50 * opts.max_terms)
                    parts.append((pref * s, abs(pref) * big))
            val = sum((p for p, _ in parts), mpmath.mpc(0))
            scale = max((s for _, s in parts), default=mpmath.mpf(0))
            if val == 0 and scale == 0:
                return 0j
            lost = float(mpmath.log10(scale / abs(val))) if val != 0 else float(dps)
            if lost < dps - 20:
                return complex(mpmath.power(2, n) * mpmath.sqrt(mpmath.pi) * val)
            dps = int(lost) + 40
    raise ConvergenceError(
        f"H_{nu}({z}): cancellation not resolved at {dps} digits", None
    )


def hermite_fn(nu, z, opts: EvalOptions = DEFAULT_OPTIONS) -> complex:
    """Hermite function H_nu(z) of arbitrary complex order and argument."""
    nu, z = complex(nu), complex(z)
    if not (cmath.isfinite(nu) and cmath.isfinite(z)):
        raise DomainError("Hermite function arguments must be finite")
    val = _hermite_large_z(nu, z, opts)
    if val is not None:
        return val
    if nu.imag == 0 and z.imag == 0 and z.real >= 1 and z.real**2 > 2 * nu.real + 1:
        if nu.real > 3 and z.real >= 4:
            val = _hermite_upward(nu.real, z.real, opts)
        else:
            val = _hermite_inward(nu.real, z.real, opts)
        if val is not None:
            return val
    val, scale = _hermite_series(nu, z, opts)
    if opts.extended_fallback and scale > 0 and abs(val) < opts.fallback_below * scale:
        lost = math.log10(scale / abs(val)) if val != 0 else 17.0
        val = _hermite_extended(nu, z, opts, lost)
    return val


def hermite_fn_derivative(nu, z, opts: EvalOptions = DEFAULT_OPTIONS) -> complex:
    """d/dz H_nu(z) = 2 nu H_{nu-1}(z)."""
    nu = complex(nu)
    if nu == 0:
        return 0j
    return 2.0 * nu * hermite_fn(nu - 1.0, z, opts)


def hermite_inner_asymptotic(nu: float, z: float) -> float:
    """Oscillatory approximation of H_nu(z) in the inner region |z| < sqrt(2 nu).

    The classical formula is only a proportionality; its constant is fixed
    per order by matching the exact function at z = 0 (or its slope there when
    cos(pi nu / 2) is too small to match on).
    """
    nu = float(nu)
    z = float(z)
    if not nu > 0:
        raise DomainError("inner-region approximation needs nu > 0")
    if abs(z) >= math.sqrt(2.0 * nu):
        raise DomainError(f"|z| = {abs(z):g} is outside the inner region |z| < sqrt(2 nu)")

    log_amp0 = 0.5 * (1.0 + nu) * math.log(2.0) + 0.5 * (-nu + nu * math.log(nu))
    s0, c0 = _sincospi(0.5 * nu)
    if abs(c0) > 0.1:
        const = hermite_fn(nu, 0.0).real / (math.exp(log_amp0) * c0)
    else:
        slope = math.sqrt(0.5 * nu) + (2.0 * nu + 1.0) / (2.0 * math.sqrt(2.0 * nu))
        const = hermite_fn_derivative(nu, 0.0).real / (math.exp(log_amp0) * s0 * slope)

    log_amp = (
        0.5 * (1.0 + nu) * math.log(2.0)
        + 0.5 * (z * z - nu + nu * math.log(nu))
        - 0.25 * math.log1p(-z * z / (2.0 * nu))
    )
    phase = (
        0.5 * math.pi * nu
        - z * math.sqrt(0.5 * nu - 0.25 * z * z)
        - 0.5 * (2.0 * nu + 1.0) * math.asin(z / math.sqrt(2.0 * nu))
    )
    return const * math.exp(log_amp) * math.cos(phase)
