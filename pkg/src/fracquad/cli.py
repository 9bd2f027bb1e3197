"""Command-line front end.

Subcommands::

    fracquad coeffs        dump convolution weights
    fracquad integrate     fractional integral of a reference or CSV signal
    fracquad differentiate fractional derivative (direct GL or composition)
    fracquad convergence   grid-refinement error sweep with empirical orders
    fracquad dielectric    susceptibility sweeps and time-domain polarization

Every command writes CSV to stdout: header row, comma separator, LF line
endings, floats in shortest round-trip form.  Exit codes: 0 success,
1 runtime/data error, 2 usage error.

``FRACQUAD_THREADS`` caps internal parallelism (0 = auto).  All current
evaluation paths are deterministic and single-process, so the cap is
honored trivially; it is validated and reserved for batch drivers.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from typing import Callable, Iterable, Sequence

import numpy as np

from . import oracle
from .derivative import gl_derivative, rl_derivative_via_integral
from .dielectric import (
    DebyeModel,
    LorentzEnsemble,
    UniversalResponse,
    debye_susceptibility,
    fractional_polarization,
    lorentz_susceptibility,
    universal_susceptibility,
    verify_universal_ratio,
)
from .exceptions import FracquadError
from .quadrature import (
    SampledSignal,
    UniformGrid,
    frac_integral,
    frac_newton_cotes,
    frac_trapezoid,
    short_memory_integral,
)
from .weights import Scheme, weights_for_scheme

__all__ = ["main"]

_WEIGHT_SCHEMES = {"gl": Scheme.GL, "nc0": Scheme.NC0,
                   "flmm-trap": Scheme.FLMM_TRAP}
_RULE_CHOICES = [*_WEIGHT_SCHEMES, "trap", "nc3"]


class _CliDataError(Exception):
    """Input-data problem; reported on stderr with exit code 1."""


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _emit(header: Sequence[str], rows: Iterable[Sequence]) -> None:
    out = sys.stdout
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(_fmt(x) for x in row) + "\n")


def _thread_cap() -> int:
    raw = os.environ.get("FRACQUAD_THREADS")
    if raw is None:
        return 0
    try:
        value = int(raw)
    except ValueError:
        value = -1
    if value < 0:
        raise _UsageError(
            f"FRACQUAD_THREADS must be a non-negative integer, got {raw!r}"
        )
    return value


class _UsageError(Exception):
    pass


# ---------------------------------------------------------------- integrands

def _load_csv_signal(path: str) -> SampledSignal:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise _CliDataError(f"cannot read {path}: {exc}") from exc
    if not lines or [c.strip() for c in lines[0].split(",")] != ["t", "f"]:
        raise _CliDataError(f"{path}:1: expected header 't,f'")
    ts, fs = [], []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise _CliDataError(f"{path}:{lineno}: expected 2 fields")
        try:
            ts.append(float(parts[0]))
            fs.append(float(parts[1]))
        except ValueError as exc:
            raise _CliDataError(f"{path}:{lineno}: {exc}") from exc
    if len(ts) < 2:
        raise _CliDataError(f"{path}: need at least 2 samples")
    t = np.array(ts)
    dt = t[1] - t[0]
    if not dt > 0:
        raise _CliDataError(f"{path}: time column must increase")
    expected = t[0] + dt * np.arange(len(t))
    bad = np.nonzero(np.abs(t - expected) > 1e-9 * dt)[0]
    if t[0] != 0.0:
        raise _CliDataError(f"{path}:2: grid must start at t = 0")
    if bad.size:
        raise _CliDataError(
            f"{path}:{bad[0] + 2}: node off the uniform grid by more than "
            "1e-9*dt"
        )
    return SampledSignal(UniformGrid(float(dt), len(t)), np.array(fs))


def _resolve_integrand(spec: str, args) -> tuple[
        SampledSignal, "Callable[[float], float] | None", str]:
    """Returns (signal, callable or None, kind)."""
    if spec.startswith("csv:"):
        return _load_csv_signal(spec[4:]), None, "csv"
    if args.t_end is None or args.n is None:
        raise _UsageError("--t-end and --n are required unless --f csv: is used")
    if args.n < 2:
        raise _UsageError("--n must be at least 2")
    grid = UniformGrid(args.t_end / (args.n - 1), args.n)
    if spec == "const":
        fn = lambda u: args.c + 0.0 * u
    elif spec == "exp":
        fn = np.exp
    elif spec == "sin":
        fn = lambda u: np.sin(args.omega0 * u)
    else:
        raise _UsageError(f"unknown integrand {spec!r}")
    return SampledSignal.sample(fn, grid), (lambda u: float(fn(u))), spec


def _exact_integral_column(kind, args, alpha, t, f_callable, use_oracle):
    if kind == "const":
        return np.array([oracle.exact_integral_const(x, alpha, args.c)
                         for x in t])
    if kind == "exp":
        return np.array([oracle.exact_integral_exp(x, alpha) for x in t])
    if use_oracle:
        vals = [0.0 if x == 0.0 else
                oracle.brute_force_rl(f_callable, x, alpha, args.oracle_tol)
                for x in t]
        return np.array(vals)
    return None


def _apply_rule(signal, rule, alpha, method, memory, starting):
    if rule in _WEIGHT_SCHEMES:
        scheme = _WEIGHT_SCHEMES[rule]
        w = weights_for_scheme(scheme, alpha, signal.grid.dt, signal.grid.n)
        if memory is not None:
            return short_memory_integral(signal, w, memory, method=method)
        return frac_integral(signal, w, method=method,
                             starting_degree=starting)
    if memory is not None or starting is not None:
        raise _UsageError(
            "--memory/--starting-weights apply to the gl/nc0/flmm-trap "
            "schemes only"
        )
    if rule == "trap":
        return frac_trapezoid(signal, alpha, method=method)
    if rule == "nc3":
        return frac_newton_cotes(signal, alpha, 3)
    raise _UsageError(f"unknown scheme {rule!r}")


# -------------------------------------------------------------- subcommands

def _cmd_coeffs(args) -> None:
    scheme = _WEIGHT_SCHEMES[args.scheme]
    alpha = args.alpha
    if args.derivative:
        if scheme is Scheme.NC0:
            raise _UsageError("nc0 weights have no derivative role")
        alpha = -alpha
    w = weights_for_scheme(scheme, alpha, args.dt, args.count)
    _emit(("k", "weight"), ((k, v) for k, v in enumerate(w.values)))


def _cmd_integrate(args) -> None:
    signal, f_callable, kind = _resolve_integrand(args.f, args)
    if args.oracle and f_callable is None:
        raise _UsageError("--oracle needs a callable integrand, not csv:")
    alpha = args.alpha
    out = _apply_rule(signal, args.scheme, alpha, args.method,
                      args.memory, args.starting_weights)
    t = signal.grid.nodes
    exact = _exact_integral_column(
        kind, args, alpha, t, f_callable, args.oracle)
    if exact is None:
        _emit(("t", "approx"), zip(t, out.values))
        return
    abs_err = np.abs(out.values - exact)
    with np.errstate(divide="ignore", invalid="ignore"):
        rel_err = np.where(exact != 0.0, abs_err / np.abs(exact), np.nan)
    _emit(("t", "approx", "exact", "abs_err", "rel_err"),
          zip(t, out.values, exact, abs_err, rel_err))


def _cmd_differentiate(args) -> None:
    signal, _, kind = _resolve_integrand(args.f, args)
    alpha = args.alpha
    if args.route == "gl":
        out = gl_derivative(signal, alpha, direction=args.direction,
                            method=args.method)
    else:
        scheme = _WEIGHT_SCHEMES[args.scheme]
        out = rl_derivative_via_integral(signal, alpha, scheme=scheme,
                                         method=args.method)
    t = signal.grid.nodes
    exact = _exact_derivative_column(kind, args, alpha, t)
    if exact is None:
        _emit(("t", "approx"), zip(t, out.values))
        return
    abs_err = np.abs(out.values - exact)
    with np.errstate(divide="ignore", invalid="ignore"):
        rel_err = np.where(
            np.isfinite(exact) & (exact != 0.0),
            abs_err / np.abs(exact), np.nan)
    _emit(("t", "approx", "exact", "abs_err", "rel_err"),
          zip(t, out.values, exact, abs_err, rel_err))


def _exact_derivative_column(kind, args, alpha, t):
    if kind == "const":
        vals = [math.inf if x == 0.0 else
                args.c * oracle.exact_derivative_monomial(x, alpha, 0.0)
                for x in t]
        return np.array(vals)
    if kind == "exp" and 0.0 < alpha < 1.0:
        return np.array([math.inf if x == 0.0 else
                         oracle.exact_derivative_exp(x, alpha) for x in t])
    if kind == "sin":
        # whole-line rule; valid as the large-t asymptote only
        return np.array([oracle.exact_derivative_sin(x, args.omega0, alpha)
                         for x in t])
    return None


def _cmd_convergence(args) -> None:
    n_list = args.n_list
    if len(n_list) < 3:
        raise _UsageError("--n-list needs at least 3 grid sizes")
    exact = _probe_reference(args)
    rows = []
    prev_err = prev_n = None
    for n in n_list:
        grid = UniformGrid(args.t_probe / (n - 1), n)
        signal, _, _ = _resolve_probe_signal(args, grid)
        out = _apply_rule(signal, args.scheme, args.alpha, args.method,
                          None, None)
        err = abs(out.values[-1] - exact)
        noise_floor = 1e-14 * max(abs(exact), 1.0)
        if prev_err is None or err <= noise_floor or prev_err <= noise_floor:
            order = math.nan
        else:
            order = math.log(prev_err / err) / math.log(n / prev_n)
        rows.append((n, grid.dt, err, order))
        prev_err, prev_n = err, n
    _emit(("n", "dt", "abs_err", "empirical_order"), rows)


def _probe_reference(args) -> float:
    t, alpha = args.t_probe, args.alpha
    if args.f == "const":
        return oracle.exact_integral_const(t, alpha, args.c)
    if args.f == "exp":
        return oracle.exact_integral_exp(t, alpha)
    if args.f == "sin":
        return oracle.brute_force_rl(
            lambda u: math.sin(args.omega0 * u), t, alpha, args.oracle_tol)
    raise _UsageError(f"unknown integrand {args.f!r}")


def _resolve_probe_signal(args, grid):
    if args.f == "const":
        fn = lambda u: args.c + 0.0 * u
    elif args.f == "exp":
        fn = np.exp
    else:
        fn = lambda u: np.sin(args.omega0 * u)
    return SampledSignal.sample(fn, grid), None, args.f


def _parse_omega_range(spec: str, log_spacing: bool) -> np.ndarray:
    try:
        lo_s, hi_s, count_s = spec.split(":")
        lo, hi, count = float(lo_s), float(hi_s), int(count_s)
    except ValueError as exc:
        raise _UsageError(
            f"--omega-range must be 'start:stop:count', got {spec!r}"
        ) from exc
    if count < 1:
        raise _UsageError("--omega-range count must be >= 1")
    if count == 1 or lo == hi:
        return np.full(count, lo)
    if log_spacing:
        if lo <= 0 or hi <= 0:
            raise _UsageError("--log-omega needs positive endpoints")
        return np.geomspace(lo, hi, count)
    return np.linspace(lo, hi, count)


def _parse_modes(spec: str) -> tuple[tuple[float, float, float], ...]:
    modes = []
    for chunk in spec.split(","):
        parts = chunk.split(":")
        if len(parts) != 3:
            raise _UsageError(
                f"each mode must be 'weight:omega:gamma', got {chunk!r}"
            )
        modes.append(tuple(float(p) for p in parts))
    return tuple(modes)


def _cmd_dielectric(args) -> None:
    if args.verify_ratio:
        rows = []
        for n_exp in args.n_exp:
            check = verify_universal_ratio(
                n_exp, omega0=args.omega0, dt=args.dt, t_end=args.t_end,
                scheme=_WEIGHT_SCHEMES[args.scheme])
            rel_dev = abs(check.numeric - check.analytic) / abs(check.analytic)
            rows.append((n_exp, check.analytic, check.numeric, rel_dev))
        _emit(("n", "analytic", "numeric", "rel_dev"), rows)
        return
    if args.time_domain:
        if len(args.n_exp) != 1:
            raise _UsageError("--time-domain takes exactly one --n-exp")
        model = UniversalResponse(args.n_exp[0])
        n = int(round(args.t_end / args.dt)) + 1
        grid = UniformGrid(args.dt, n)
        field = SampledSignal(grid, np.sin(args.omega0 * grid.nodes))
        pol = fractional_polarization(
            field, model.alpha, eps0=args.eps0,
            scheme=_WEIGHT_SCHEMES[args.scheme])
        _emit(("t", "E", "P"), zip(grid.nodes, field.values, pol.values))
        return
    omegas = _parse_omega_range(args.omega_range, args.log_omega)
    chi = _susceptibility_sweep(args, omegas)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(chi.real != 0.0, chi.imag / chi.real, np.nan)
    _emit(("omega", "chi_re", "chi_im", "ratio"),
          zip(omegas, chi.real, chi.imag, ratio))


def _susceptibility_sweep(args, omegas: np.ndarray) -> np.ndarray:
    if args.model == "universal":
        if len(args.n_exp) != 1:
            raise _UsageError("--model universal takes exactly one --n-exp")
        model = UniversalResponse(args.n_exp[0])
        return np.asarray(universal_susceptibility(model, omegas, args.scale))
    if args.model == "debye":
        model = DebyeModel(n_density=args.n_density,
                           a_coupling=args.a_coupling,
                           tau=args.tau, eps0=args.eps0)
        return np.asarray(debye_susceptibility(model, omegas))
    if args.model == "lorentz":
        if args.modes is None:
            raise _UsageError("--model lorentz requires --modes")
        model = LorentzEnsemble(modes=_parse_modes(args.modes),
                                n_density=args.n_density, eps0=args.eps0)
        return np.asarray(lorentz_susceptibility(model, omegas))
    raise _UsageError(f"unknown model {args.model!r}")


# ------------------------------------------------------------------- parser

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracquad",
        description="Fractional integration and dielectric response on "
                    "uniform grids; all output is CSV on stdout.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    coeffs = sub.add_parser("coeffs", help="dump convolution weights")
    coeffs.add_argument("--scheme", choices=sorted(_WEIGHT_SCHEMES),
                        required=True)
    coeffs.add_argument("--alpha", type=float, required=True)
    coeffs.add_argument("--dt", type=float, required=True)
    coeffs.add_argument("--count", type=int, required=True)
    coeffs.add_argument("--derivative", action="store_true",
                        help="generate the derivative-role weights")
    coeffs.set_defaults(func=_cmd_coeffs)

    def add_signal_args(p, with_oracle=True):
        p.add_argument("--f", required=True,
                       help="const | exp | sin | csv:<path>")
        p.add_argument("--alpha", type=float, required=True)
        p.add_argument("--t-end", dest="t_end", type=float)
        p.add_argument("--n", type=int)
        p.add_argument("--c", type=float, default=1.0,
                       help="constant value for --f const")
        p.add_argument("--omega0", type=float, default=1.0,
                       help="angular frequency for --f sin")
        p.add_argument("--method", choices=["direct", "fft"],
                       default="direct")
        if with_oracle:
            p.add_argument("--oracle", action="store_true",
                           help="add brute-force reference columns")
            p.add_argument("--oracle-tol", dest="oracle_tol", type=float,
                           default=1e-10)

    integrate = sub.add_parser("integrate",
                               help="fractional integral of a signal")
    add_signal_args(integrate)
    integrate.add_argument("--scheme", choices=_RULE_CHOICES, default="gl")
    integrate.add_argument("--memory", type=int, default=None,
                           help="short-memory truncation length")
    integrate.add_argument("--starting-weights", dest="starting_weights",
                           type=int, default=None,
                           help="polynomial-exactness correction degree")
    integrate.set_defaults(func=_cmd_integrate)

    diff = sub.add_parser("differentiate", help="fractional derivative")
    add_signal_args(diff, with_oracle=False)
    diff.add_argument("--route", choices=["gl", "rl"], default="gl",
                      help="direct GL sum or composition through an integral")
    diff.add_argument("--scheme", choices=sorted(_WEIGHT_SCHEMES),
                      default="gl", help="quadrature backing the rl route")
    diff.add_argument("--direction", choices=["backward", "forward"],
                      default="backward")
    diff.set_defaults(func=_cmd_differentiate)

    conv = sub.add_parser("convergence",
                          help="error sweep over grid refinements")
    conv.add_argument("--f", choices=["const", "exp", "sin"], required=True)
    conv.add_argument("--alpha", type=float, required=True)
    conv.add_argument("--t-probe", dest="t_probe", type=float, required=True)
    conv.add_argument("--n-list", dest="n_list", required=True,
                      type=lambda s: [int(x) for x in s.split(",")])
    conv.add_argument("--scheme", choices=_RULE_CHOICES, default="gl")
    conv.add_argument("--method", choices=["direct", "fft"],
                      default="direct")
    conv.add_argument("--c", type=float, default=1.0)
    conv.add_argument("--omega0", type=float, default=1.0)
    conv.add_argument("--oracle-tol", dest="oracle_tol", type=float,
                      default=1e-10)
    conv.set_defaults(func=_cmd_convergence)

    diel = sub.add_parser("dielectric",
                          help="susceptibility sweeps and polarization runs")
    diel.add_argument("--model", choices=["universal", "debye", "lorentz"],
                      default="universal")
    diel.add_argument("--omega-range", dest="omega_range", default="1:10:10",
                      help="start:stop:count")
    diel.add_argument("--log-omega", dest="log_omega", action="store_true")
    diel.add_argument("--n-exp", dest="n_exp", default="0.5",
                      type=lambda s: [float(x) for x in s.split(",")])
    diel.add_argument("--scale", type=float, default=1.0)
    diel.add_argument("--n-density", dest="n_density", type=float,
                      default=1.0)
    diel.add_argument("--a-coupling", dest="a_coupling", type=float,
                      default=1.0)
    diel.add_argument("--tau", type=float, default=1.0)
    diel.add_argument("--eps0", type=float, default=1.0)
    diel.add_argument("--modes", default=None,
                      help="lorentz modes 'weight:omega:gamma[,...]'")
    diel.add_argument("--time-domain", dest="time_domain",
                      action="store_true")
    diel.add_argument("--verify-ratio", dest="verify_ratio",
                      action="store_true")
    diel.add_argument("--omega0", type=float, default=2.0 * math.pi)
    diel.add_argument("--dt", type=float, default=5e-4)
    diel.add_argument("--t-end", dest="t_end", type=float, default=20.0)
    diel.add_argument("--scheme", choices=sorted(_WEIGHT_SCHEMES),
                      default="gl")
    diel.set_defaults(func=_cmd_dielectric)
    return parser


def main(argv: "Sequence[str] | None" = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        _thread_cap()
        args.func(args)
    except _UsageError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except _CliDataError as exc:
        print(f"{parser.prog}: {exc}", file=sys.stderr)
        return 1
    except FracquadError as exc:
        print(f"{parser.prog}: {exc}", file=sys.stderr)
        return 1
    except OverflowError as exc:
        print(f"{parser.prog}: overflow: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
