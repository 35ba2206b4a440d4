"""Command-line front end: spectra, comparison tables, figure data,
wavefunctions and oracle verification as CSV or JSON.

Exit codes: 0 success, 1 usage error, 2 convergence failure, 3 no bound
states.  Energies are in the units of the constants given (units of mc^2
with the default m = hbar = c = 1).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, replace

import numpy as np

from . import oracle, spectrum
from .errors import ContinuityError, ConvergenceError, DomainError, NoBoundStatesError, StiffnessError
from .model import (
    ElectrostaticConfig,
    GeneralConfig,
    PhysicalConstants,
    PseudoSpinConfig,
    SpinSymConfig,
    coupling,
)
from .spectrum import Branch
from .wavefun import assemble_bound_state

EXIT_OK, EXIT_USAGE, EXIT_CONVERGENCE, EXIT_NO_STATES = 0, 1, 2, 3

FAMILIES = ("spinsym", "pseudospin", "electrostatic", "general")
UNRECONCILED = "printed-formula-unreconciled"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    family: str = "spinsym"
    branch: str = "A"
    lam: float | None = None
    v1: float | None = None
    m: float = 1.0
    hbar: float = 1.0
    c: float = 1.0
    v0: float = 0.0
    w0: float = 0.0
    s0: float = 0.0
    s1: float = 0.0
    n_max: int = 7
    fmt: str = "csv"
    out: str | None = None
    tol: float | None = None

    @property
    def constants(self) -> PhysicalConstants:
        return PhysicalConstants(self.m, self.hbar, self.c)

    @property
    def V1(self) -> float:
        """V1 from --v1, or from lambda with the sign that binds for the family."""
        if self.v1 is not None:
            return self.v1
        sign = 1.0 if self.family == "pseudospin" else -1.0
        return spectrum.v1_from_lambda(self.lam if self.lam is not None else 1.0, self.constants, sign)

    @property
    def strength(self) -> float:
        return coupling(self.V1, self.constants)

    def field(self):
        V1 = self.V1
        if self.family == "spinsym":
            return SpinSymConfig(V1)
        if self.family == "pseudospin":
            return PseudoSpinConfig(V1)
        if self.family == "electrostatic":
            return ElectrostaticConfig(V1)
        return GeneralConfig(self.v0, V1, self.w0, self.s0, self.s1)


# config-file keys -> RunConfig fields
_KEYS = {
    "family": ("family", str), "branch": ("branch", str), "lambda": ("lam", float),
    "v1": ("v1", float), "m": ("m", float), "hbar": ("hbar", float), "c": ("c", float),
    "v0": ("v0", float), "w0": ("w0", float), "s0": ("s0", float), "s1": ("s1", float),
    "n_max": ("n_max", int), "n-max": ("n_max", int), "format": ("fmt", str),
    "out": ("out", str), "tol": ("tol", float),
}


def read_config_file(path: str) -> dict:
    """Flat ``key = value`` file; '#' starts a comment."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key, val = (s.strip() for s in line.split("=", 1))
            if key.lower() not in _KEYS:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            name, conv = _KEYS[key.lower()]
            try:
                values[name] = conv(val)
            except ValueError:
                raise UsageError(f"{path}:{lineno}: bad value for {key}: {val!r}") from None
    return values


def build_config(args: argparse.Namespace) -> RunConfig:
    """Merge flags over the config file over the defaults, then validate."""
    merged = read_config_file(args.config) if args.config else {}
    flags = {name: getattr(args, name) for name, _ in _KEYS.values() if getattr(args, name, None) is not None}
    if "lam" in flags and "v1" in flags:
        raise UsageError("give either --lambda or --v1, not both")
    if "lam" in flags or "v1" in flags:
        merged.pop("lam", None)
        merged.pop("v1", None)
    merged.update(flags)
    cfg = RunConfig(**merged)
    if cfg.family not in FAMILIES:
        raise UsageError(f"family must be one of {', '.join(FAMILIES)}")
    if cfg.branch.upper() not in ("A", "B"):
        raise UsageError("branch must be A or B")
    if cfg.fmt not in ("csv", "json"):
        raise UsageError("format must be csv or json")
    if cfg.n_max < 1:
        raise UsageError("n-max must be >= 1")
    if cfg.lam is not None and cfg.v1 is None and not cfg.lam > 0:
        raise UsageError("lambda must be positive")
    if cfg.v1 is not None and cfg.v1 == 0 and cfg.family != "general":
        raise UsageError("V1 must be nonzero")
    if cfg.tol is not None and not cfg.tol > 0:
        raise UsageError("tol must be positive")
    return replace(cfg, branch=cfg.branch.upper())


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------

def _num(v, fmt=".12g"):
    if v is None:
        return ""
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v + 0.0, fmt)   # no "-0"
    return str(v)


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def render(blocks, fmt: str, meta: dict | None = None, float_fmt: str = ".12g") -> str:
    """Render named blocks of (columns, rows); a block name of None is the main table."""
    if fmt == "json":
        doc = dict(meta or {})
        for name, (cols, rows) in blocks:
            doc[name or "records"] = [{c: _jsonable(v) for c, v in zip(cols, row)} for row in rows]
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    for key, val in (meta or {}).items():
        buf.write(f"# {key}={_num(val, float_fmt)}\n")
    w = csv.writer(buf, lineterminator="\n")
    for i, (name, (cols, rows)) in enumerate(blocks):
        if i:
            buf.write("\n")
        if name:
            buf.write(f"# {name}\n")
        w.writerow(cols)
        for row in rows:
            w.writerow([_num(v, float_fmt) for v in row])
    return buf.getvalue()


def emit(text: str, cfg: RunConfig) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Spectra
# ---------------------------------------------------------------------------

RECORD_COLUMNS = ("n", "branch", "nu", "E_exact", "E_approx", "method", "residual", "approx_provenance")


def exact_lines(cfg: RunConfig, n_max: int | None = None) -> list[spectrum.SpectralLine]:
    n_max = n_max or cfg.n_max
    k, V1, br = cfg.constants, cfg.V1, cfg.branch
    if cfg.family == "spinsym":
        return spectrum.solve_spinsym_spectrum(V1, br, n_max, k)
    if cfg.family == "pseudospin":
        return spectrum.solve_pseudospin_spectrum(V1, br, n_max, k)
    if cfg.family == "electrostatic":
        return spectrum.solve_electrostatic_spectrum(cfg.strength, br, n_max, k, v1_sign=math.copysign(1.0, V1))
    # no closed-form quantization for the general family: shooting only
    prob = oracle.ShootingProblem("general", br, cfg.field(), k)
    lines = oracle.find_eigenvalues(prob, n_max)
    if not lines:
        raise NoBoundStatesError("no bound states found for this general configuration")
    if len(lines) < n_max:
        raise ConvergenceError(f"only {len(lines)} of {n_max} levels found below mc^2")
    return lines


def approx_energy(cfg: RunConfig, n: int):
    """(E_approx, provenance) for level n, or (None, '') when not defined."""
    k, lam, br = cfg.constants, cfg.strength, Branch.parse(cfg.branch)
    if cfg.family == "spinsym":
        return spectrum.approx_energy_expansion(br, n, lam, k), "expansion"
    if cfg.family == "pseudospin":
        return -spectrum.approx_energy_expansion(br.other, n, lam, k), "expansion"
    if cfg.family == "electrostatic":
        if cfg.V1 < 0:
            e = spectrum.approx_electrostatic_energy(n, lam, br, k)
        else:
            e = spectrum.approx_electrostatic_energy(n, lam, br.other, k)
            e = None if e is None else -e
        return e, UNRECONCILED
    return None, ""


def spectrum_records(cfg: RunConfig) -> list[tuple]:
    rows = []
    for line in exact_lines(cfg):
        e_apx, prov = approx_energy(cfg, line.n)
        rows.append((line.n, line.branch.value, line.nu, line.E, e_apx, line.method, line.residual, prov))
    return rows


def cmd_spectrum(cfg: RunConfig) -> str:
    meta = {"family": cfg.family, "V1": cfg.V1, "lambda": cfg.strength, "energy_unit": "m c^2" if cfg.constants == PhysicalConstants() else "E"}
    return render([(None, (RECORD_COLUMNS, spectrum_records(cfg)))], cfg.fmt, meta)


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------

_TABLE_SETUP = {
    1: ("spinsym", "A"),
    2: ("spinsym", "B"),
    3: ("electrostatic", "A"),
}


def table_rows(which: int, cfg: RunConfig):
    lam = cfg.lam if cfg.lam is not None else 1.0
    if which in _TABLE_SETUP:
        family, branch = _TABLE_SETUP[which]
        sub = replace(cfg, family=family, branch=branch, lam=lam, v1=None)
        cols = ("n", "branch", "E_exact", "E_approx", "abs_deviation", "approx_provenance")
        rows = []
        for line in exact_lines(sub):
            e_apx, prov = approx_energy(sub, line.n)
            dev = None if e_apx is None else abs(e_apx - line.E)
            rows.append((line.n, branch, line.E, e_apx, dev, prov))
        return cols, rows
    if which == 4:
        a = exact_lines(replace(cfg, family="electrostatic", branch="A", lam=lam, v1=None))
        b = exact_lines(replace(cfg, family="electrostatic", branch="B", lam=lam, v1=None))
        cols = ("n", "E_branch_A", "E_branch_B")
        return cols, [(la.n, la.E, lb.E) for la, lb in zip(a, b)]
    raise UsageError("table must be 1, 2, 3 or 4")


def cmd_tables(which: int, cfg: RunConfig) -> str:
    cols, rows = table_rows(which, cfg)
    return render([(None, (cols, rows))], cfg.fmt, {"table": which}, float_fmt=".6f")


# ---------------------------------------------------------------------------
# Figure data
# ---------------------------------------------------------------------------

def figdata_rows(which: int, cfg: RunConfig):
    br = Branch.parse(cfg.branch)
    if which == 1:
        cols = ("nu", "F_exact", "F_approx", "pole")
        rows = []
        for nu in np.round(np.arange(0.2, 8.0 + 1e-9, 0.01), 10):
            r = spectrum.F_ratio_function(float(nu), br)
            rows.append((float(nu), r.exact, r.approx, int(r.pole)))
        return cols, rows
    if which == 2:
        lam = cfg.lam if cfg.lam is not None else (cfg.strength if cfg.v1 is not None else 9.0)
        k = cfg.constants
        mc2 = k.mc2
        cols = ("E", "f", "f_parabola", "f_positive_approx", "floor_f")
        rows = []
        n = 800
        for i in range(n):
            E = mc2 * (-1.0 + (2 * i + 1) / n)
            f = spectrum.f_phase(E, lam, br, k)
            parab = spectrum.f_phase_parabola(E, lam, br, k)
            pos = spectrum.f_phase_positive_approx(E, lam, br, k)
            rows.append((E, f, parab, pos, math.floor(f)))
        return cols, rows
    raise UsageError("figure must be 1 or 2")


def cmd_figdata(which: int, cfg: RunConfig) -> str:
    cols, rows = figdata_rows(which, cfg)
    return render([(None, (cols, rows))], cfg.fmt, {"figure": which, "branch": cfg.branch})


# ---------------------------------------------------------------------------
# Wavefunctions
# ---------------------------------------------------------------------------

def wavefunction_sample(cfg: RunConfig, level: int, x_max: float | None = None, points: int = 4001):
    if cfg.family == "general":
        raise UsageError("wavefunctions are available for spinsym, pseudospin and electrostatic")
    if cfg.family == "electrostatic" and cfg.V1 > 0:
        raise UsageError("electrostatic wavefunctions need V1 < 0 (use the E -> -E mirror)")
    lines = exact_lines(cfg, n_max=level + 1)
    match = [l for l in lines if l.n == level]
    if not match:
        raise UsageError(f"no level n = {level} for this family and branch")
    E = match[0].E
    state = assemble_bound_state(
        cfg.family, cfg.branch, E, cfg.field(), cfg.constants,
        continuity_tol=cfg.tol if cfg.tol is not None else 1e-4,
    )
    X = x_max if x_max is not None else state.X
    if points < 3:
        raise UsageError("points must be >= 3")
    return state.sample(np.linspace(-X, X, points))


def cmd_wavefunction(cfg: RunConfig, level: int, x_max: float | None = None, points: int = 4001) -> str:
    s = wavefunction_sample(cfg, level, x_max, points)
    cols = ("x", "re_psiA", "im_psiA", "re_psiB", "im_psiB")
    rows = [
        (float(x), float(a.real), float(a.imag), float(b.real), float(b.imag))
        for x, a, b in zip(s.x, s.psiA, s.psiB)
    ]
    meta = {"family": cfg.family, "branch": cfg.branch, "level": level, "E": s.E, "nu": s.nu,
            "origin_mismatch": s.metadata["mismatch"]}
    return render([(None, (cols, rows))], cfg.fmt, meta)


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

def verify_rows(cfg: RunConfig):
    """Per-level comparison of the exact spectrum against the shooting oracle."""
    if cfg.family == "general":
        raise UsageError("verify compares closed forms against the oracle; general has no closed form")
    tol = cfg.tol if cfg.tol is not None else 1e-4
    mc2 = cfg.constants.mc2
    exact = exact_lines(cfg)
    es = sorted(l.E for l in exact)
    gaps = np.diff(es) if len(es) > 1 else np.array([0.02 * mc2])
    pad = min(0.01 * mc2, 0.5 * float(gaps.min()))
    prob = oracle.ShootingProblem(cfg.family, cfg.branch, cfg.field(), cfg.constants)
    found = oracle.find_eigenvalues(
        prob, len(exact), E_lo=max(es[0] - pad, -mc2 * (1 - 1e-6)), E_hi=min(es[-1] + pad, mc2 * (1 - 1e-6)),
        dE=min(0.02, pad / mc2),
    )
    if len(found) < len(exact):
        raise ConvergenceError(f"oracle found {len(found)} of {len(exact)} levels")
    by_energy = sorted(found, key=lambda l: l.E)
    order = sorted(range(len(exact)), key=lambda i: exact[i].E)
    rows = []
    for rank, i in enumerate(order):
        ex, orc = exact[i], by_energy[rank]
        dev = abs(ex.E - orc.E)
        rows.append((ex.n, ex.branch.value, ex.E, orc.E, dev, ex.residual, orc.residual, orc.method, int(dev <= tol * mc2)))
    rows.sort(key=lambda r: r[0])
    cols = ("n", "branch", "E_exact", "E_oracle", "abs_deviation", "residual_exact", "residual_oracle", "oracle_method", "pass")
    return cols, rows, all(r[-1] for r in rows)


def discrepancy_rows(n_max: int = 7):
    """Measured quantities that are reported rather than asserted."""
    rows = []
    for n, nu in zip(range(1, n_max + 1), spectrum.solve_nu_roots(Branch.A, n_max)):
        approx = spectrum.approx_nu(Branch.A, n)
        rows.append(("nu_approx_rel_error", "A", n, abs(approx - nu) / nu, "claimed < 1e-4 for n >= 2"))
    for br in (Branch.A, Branch.B):
        for line in spectrum.solve_electrostatic_spectrum(1.0, br, n_max):
            f = spectrum.f_phase(line.E, 1.0, br)
            rows.append(("phase_offset_from_integer", br.value, line.n, abs(f - round(f)), "lambda=1"))
    exact3 = spectrum.solve_electrostatic_spectrum(1.0, Branch.A, n_max)
    for line in exact3:
        e = spectrum.approx_electrostatic_energy(line.n, 1.0, Branch.A)
        dev = None if e is None else abs(e - line.E)
        rows.append(("electrostatic_approx_abs_error", "A", line.n, dev, UNRECONCILED))
    return ("quantity", "branch", "n", "value", "note"), rows


def cmd_verify(cfg: RunConfig) -> tuple[str, bool]:
    cols, rows, ok = verify_rows(cfg)
    dcols, drows = discrepancy_rows()
    meta = {"family": cfg.family, "tol": cfg.tol if cfg.tol is not None else 1e-4, "all_pass": int(ok)}
    return render([(None, (cols, rows)), ("discrepancies", (dcols, drows))], cfg.fmt, meta), ok


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def make_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("configuration")
    g.add_argument("--family", choices=FAMILIES)
    g.add_argument("--branch", type=str.upper, choices=("A", "B"))
    g.add_argument("--lambda", dest="lam", type=float, help="coupling V1^2/(m hbar c^3)")
    g.add_argument("--v1", type=float, help="V1 (overrides the sign convention of --lambda)")
    g.add_argument("--m", type=float)
    g.add_argument("--hbar", type=float)
    g.add_argument("--c", type=float)
    g.add_argument("--v0", type=float, help="general family only")
    g.add_argument("--w0", type=float, help="general family only")
    g.add_argument("--s0", type=float, help="general family only")
    g.add_argument("--s1", type=float, help="general family only")
    g.add_argument("--n-max", dest="n_max", type=int)
    g.add_argument("--format", dest="fmt", choices=("csv", "json"))
    g.add_argument("--out")
    g.add_argument("--tol", type=float, help="verify threshold in units of mc^2 / assembly continuity tolerance")
    g.add_argument("--config", help="flat key = value file; flags take precedence")

    p = _Parser(prog="dirac-isr", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("spectrum", parents=[common], help="exact levels with approximations")
    t = sub.add_parser("tables", parents=[common], help="reference comparison tables")
    t.add_argument("which", type=int, choices=(1, 2, 3, 4))
    f = sub.add_parser("figdata", parents=[common], help="data behind the reference figures")
    f.add_argument("which", type=int, choices=(1, 2))
    w = sub.add_parser("wavefunction", parents=[common], help="normalised bound-state samples")
    w.add_argument("--level", type=int, required=True)
    w.add_argument("--x-max", dest="x_max", type=float)
    w.add_argument("--points", type=int, default=4001)
    sub.add_parser("verify", parents=[common], help="closed forms against the shooting oracle")
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = build_config(args)
        if args.command == "spectrum":
            emit(cmd_spectrum(cfg), cfg)
        elif args.command == "tables":
            emit(cmd_tables(args.which, cfg), cfg)
        elif args.command == "figdata":
            emit(cmd_figdata(args.which, cfg), cfg)
        elif args.command == "wavefunction":
            emit(cmd_wavefunction(cfg, args.level, args.x_max, args.points), cfg)
        else:
            text, ok = cmd_verify(cfg)
            emit(text, cfg)
            if not ok:
                print("verify: deviations above tolerance", file=sys.stderr)
                return EXIT_CONVERGENCE
    except NoBoundStatesError as exc:
        print(f"no bound states: {exc}", file=sys.stderr)
        return EXIT_NO_STATES
    except (ConvergenceError, ContinuityError, StiffnessError) as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (UsageError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
