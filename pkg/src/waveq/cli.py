"""Command-line front end: presets, solvers, chart data, and the check suite.

Every run writes two files into the output directory: ``<subcommand>.csv``
with the numeric payload and ``<subcommand>.manifest.json`` echoing the
full effective configuration next to the headline results.  Outputs are
deterministic: no timestamps, no absolute paths, floats at 17 significant
digits, so identical configurations produce byte-identical files.

Flags may also be supplied through ``--config FILE`` (a JSON object whose
keys are the flag names); explicit flags win over config-file values.

Exit codes: 0 on success, 1 when ``check`` fails or a computation cannot
be completed (no solution in the window, divergence, overflow), 2 on a
usage error.  Usage errors name the offending flag and print a one-line
usage string.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import Callable

from .acceptance import format_report, run_all
from .funceq import (
    GammaMap,
    casimir_constancy_check,
    gamma_eval,
    gamma_ladder_report,
    prop1_solve,
    solve_casimir_chi,
    solve_refinement,
    suq2_bridge_check,
)
from .gridfn import GridFunction
from .laurent import LaurentParseError, LaurentPoly, parse_laurent
from .qdeform import AlgebraParams, check_closure, verify_general_closure
from .scaling import (
    b2_system,
    box_grid,
    box_midpoint_profile,
    cascade,
    deformed_scaling_report,
    haar_system,
    hat_grid,
    limit_build,
    limit_build_report,
    wavelet_from_scaling,
)
from .spectra import a2half_step, fig1_csv, fig1_report, iterate_spectrum, ladder_check

__all__ = ["RunConfig", "dispatch", "main"]


class UsageError(Exception):
    """A bad flag or config value; carries the offending flag name."""

    def __init__(self, flag: str, message: str):
        super().__init__(message)
        self.flag = flag


# -- value coercion ------------------------------------------------------------------
# Flag values arrive as strings; config-file values may already be typed.
# Both go through the same coercers so the two sources behave identically.


def _as_int(v) -> int:
    if isinstance(v, bool):
        raise ValueError("expected an integer")
    if isinstance(v, float):
        if not v.is_integer():
            raise ValueError(f"expected an integer, got {v!r}")
        return int(v)
    return int(v)


def _as_float(v) -> float:
    if isinstance(v, bool):
        raise ValueError("expected a number")
    return float(v)


def _as_str(v) -> str:
    if not isinstance(v, str):
        raise ValueError(f"expected a string, got {v!r}")
    return v


def _split(v) -> list:
    if isinstance(v, str):
        return [p.strip() for p in v.split(",") if p.strip()]
    if isinstance(v, (list, tuple)):
        return list(v)
    raise ValueError(f"expected a comma-separated list, got {v!r}")


def _as_int_list(v) -> list[int]:
    out = [_as_int(p) for p in _split(v)]
    if not out:
        raise ValueError("list must not be empty")
    return out


def _as_float_list(v) -> list[float]:
    out = [_as_float(p) for p in _split(v)]
    if not out:
        raise ValueError("list must not be empty")
    return out


def _as_window(v) -> tuple[int, int]:
    parts = _split(v)
    if len(parts) != 2:
        raise ValueError(f"expected lo,hi, got {v!r}")
    lo, hi = _as_int(parts[0]), _as_int(parts[1])
    if lo >= hi:
        raise ValueError(f"window needs lo < hi, got {lo},{hi}")
    return (lo, hi)


def _as_symbol(v) -> LaurentPoly:
    return parse_laurent(_as_str(v))


def _as_sign(v) -> int:
    s = _as_int(v)
    if s not in (1, -1):
        raise ValueError(f"expected 1 or -1, got {s}")
    return s


def _choice(*options: str) -> Callable[[object], str]:
    def coerce(v):
        s = _as_str(v)
        if s not in options:
            raise ValueError(f"expected one of {', '.join(options)}, got {s!r}")
        return s

    return coerce


# -- flag tables ---------------------------------------------------------------------


@dataclass(frozen=True)
class _Opt:
    flag: str
    coerce: Callable
    default: object
    help: str
    required: bool = False

    @property
    def dest(self) -> str:
        return self.flag.lstrip("-").replace("-", "_")


_COMMON = (
    _Opt("--output", _as_str, ".", "directory for the CSV and manifest files"),
    _Opt("--config", _as_str, None, "JSON file with flag values; flags win"),
)

_CONVENTION = _Opt(
    "--dilation-convention",
    _choice("one", "paper", "unitary"),
    "one",
    "scalar prefactor convention for the dilation operator",
)

_DYADIC_COMMUTATOR = "1/4*T^2 + 1/4*T^-1 - 1/4*T^1/2 - 1/4*T^-1/2"

_SUBCOMMANDS: dict[str, tuple[str, tuple[_Opt, ...]]] = {
    "cascade": (
        "iterate the two-scale map on a start profile",
        (
            _Opt("--system", _choice("haar", "b2"), "haar", "mask preset"),
            _Opt(
                "--start",
                _choice("auto", "box", "box-midpoint", "hat"),
                "auto",
                "start profile; auto picks the system's fixed point",
            ),
            _Opt("--iters", _as_int, 1, "number of iterations"),
            _Opt("--resolution", _as_int, 8, "grid spacing exponent J (step 2^-J)"),
            _Opt("--window", _as_window, (-1, 2), "grid window lo,hi"),
            _CONVENTION,
        ),
    ),
    "wavelet": (
        "build the mother wavelet from a scaling profile",
        (
            _Opt("--system", _choice("haar", "b2"), "haar", "mask preset"),
            _Opt(
                "--start",
                _choice("auto", "box", "box-midpoint", "hat"),
                "auto",
                "scaling profile; auto picks the system's fixed point",
            ),
            _Opt("--resolution", _as_int, 6, "grid spacing exponent J"),
            _Opt(
                "--form",
                _choice("canonical", "literal"),
                "canonical",
                "alternating-mask form (canonical covers half-step masks)",
            ),
            _CONVENTION,
        ),
    ),
    "limit": (
        "convergence of the one-word limit construction",
        (
            _Opt("--preset", _choice("haar", "b2"), "haar", "target profile"),
            _Opt(
                "--delta",
                _choice("auto", "arctan", "tanh", "tri"),
                "auto",
                "seed flavor; auto picks arctan (haar) or tri (b2)",
            ),
            _Opt("--n", _as_int_list, [8, 12, 16, 20], "word orders, comma-separated"),
            _Opt("--resolution", _as_int, 10, "grid spacing exponent J"),
            _Opt("--window", _as_window, (-1, 2), "grid window lo,hi"),
            _Opt(
                "--emit",
                _choice("errors", "profile"),
                "errors",
                "CSV payload: the error table or the highest-order profile",
            ),
        ),
    ),
    "spectrum": (
        "iterate an eigenvalue map and emit the trace",
        (
            _Opt("--a0", _as_float, 0.9, "starting value"),
            _Opt("--n", _as_int, 16, "number of steps"),
            _Opt(
                "--map",
                _choice("doubling", "half"),
                "doubling",
                "doubling: a -> 2a^2 - 1; half: hyperbolic-sine doubling",
            ),
        ),
    ),
    "ladder": (
        "raising/lowering actions on exponential modes",
        (
            _Opt("--a-tilde", _as_float, math.log(2.0), "base rate (nonzero)"),
            _Opt("--n", _as_int_list, [0, 1, 2, 3], "rate doublings, comma-separated"),
            _Opt("--modes", _as_int_list, [2, 3, 4, 8], "oscillating mode orders"),
        ),
    ),
    "closure": (
        "commutator residuals of the generator triple",
        (
            _Opt("--s", _as_float, 1.0, "deformation parameter"),
            _Opt("--alpha", _as_float, 1.0, "offset parameter"),
        ),
    ),
    "general-closure": (
        "closure residuals for caller-supplied symbols",
        (
            _Opt("--j0", _as_symbol, None, "averaging symbol, e.g. '1/2*T^1 + 1/2*T^-1'", required=True),
            _Opt("--j", _as_symbol, None, "ladder symbol, e.g. '1/2 + 1/2*T^-1'", required=True),
            _Opt("--s", _as_float, 1.0, "scale parameter"),
        ),
    ),
    "solve-b": (
        "solve the refinement-commutant equation for the detail symbol",
        (
            _Opt("--c", _as_symbol, None, "mask symbol, e.g. '1 + T^-1'", required=True),
            _Opt("--window", _as_int, 4, "support bound in quarter-integer exponents"),
            _Opt("--nullspace-tol", _as_float, 1e-10, "relative singular-value cutoff"),
        ),
    ),
    "casimir": (
        "telescoping potential and the conserved combination",
        (
            _Opt("--r", _as_symbol, parse_laurent(_DYADIC_COMMUTATOR),
                 "driving symbol for the telescoping equation"),
            _Opt("--a-tilde", _as_float, math.log(2.0), "base rate for the constancy scan"),
            _Opt("--n", _as_int_list, [0, 1, 2, 3], "rate doublings for the scan"),
            _Opt("--tol", _as_float, 1e-11, "flatness tolerance"),
        ),
    ),
    "prop1": (
        "windowed commutant system: nullspace and candidate pattern",
        (
            _Opt("--window", _as_int, 8, "exponent window half-width K"),
            _Opt("--nullspace-tol", _as_float, 1e-10, "relative singular-value cutoff"),
        ),
    ),
    "gamma": (
        "logarithmic relabeling of the coarsening step",
        (
            _Opt("--b", _as_float, 1.0, "scale constant (positive)"),
            _Opt("--sign", _as_sign, 1, "orientation, 1 or -1"),
            _Opt("--points", _as_int, 100, "log-spaced grid size"),
            _Opt("--lo", _as_float, 1.001, "grid start (must exceed 1)"),
            _Opt("--hi", _as_float, 1.0e3, "grid end"),
        ),
    ),
    "bridge": (
        "relabel the eigenvalue ladder and tabulate against q-integers",
        (
            _Opt("--s", _as_float, 1.0, "deformation parameter (nonzero)"),
            _Opt("--a-tilde", _as_float, math.log(2.0), "base rate (nonzero)"),
            _Opt("--b", _as_float, None, "relabeling scale; defaults to a-tilde"),
            _Opt("--sign", _as_sign, 1, "relabeling orientation"),
            _Opt("--n", _as_int_list, [0, 1, 2, 3], "consecutive ladder steps"),
            _Opt("--j0", _as_float_list, [0.0, -1.0, -2.0], "table abscissas"),
        ),
    ),
    "fig1": (
        "eigenvalue curves over the unit interval",
        (
            _Opt("--n", _as_int_list, [2, 4, 6], "iteration orders, comma-separated"),
            _Opt("--grid", _as_int, 512, "points across [0, 1]"),
        ),
    ),
    "fig2": (
        "deformed profile family against the box",
        (
            _Opt("--s-values", _as_float_list, [0.0, 0.25, 0.5, 0.75, 1.0],
                 "deformation parameters, comma-separated"),
            _Opt("--n", _as_int, 16, "word order"),
            _Opt("--resolution", _as_int, 8, "grid spacing exponent J"),
        ),
    ),
    "check": (
        "run every acceptance check and report pass/fail per name",
        (),
    ),
}


@dataclass(frozen=True)
class RunConfig:
    """A subcommand plus its full effective parameter set.

    ``params`` holds every option after merging flags, config-file values,
    and defaults, so echoing it reproduces the run exactly.
    """

    subcommand: str
    params: dict


# -- JSON-safe conversion --------------------------------------------------------------


def _poly_terms(p: LaurentPoly) -> list[list[float]]:
    """Sorted [exponent, re, im] triples for a Laurent symbol."""
    return [
        [float(e.value), float(c.real), float(c.imag)]
        for e, c in sorted(p.terms(), key=lambda t: t[0].value)
    ]


def _jsonable(obj):
    if isinstance(obj, LaurentPoly):
        return {"terms": _poly_terms(obj)}
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float) and (math.isnan(obj) or math.isinf(obj)):
        return repr(obj)
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    if hasattr(obj, "item"):
        return _jsonable(obj.item())
    return repr(obj)


def _fmt(x: float) -> str:
    return f"{x + 0.0:.17g}"


def _csv(header: str, rows: list[list]) -> str:
    lines = [header]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
    return "\n".join(lines) + "\n"


# -- runners ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RunResult:
    csv: str
    results: dict
    summary: str
    exit_code: int = 0


def _system(name: str):
    return haar_system() if name == "haar" else b2_system()


def _start_grid(system: str, start: str, resolution: int, window) -> GridFunction:
    if start == "auto":
        start = "box" if system == "haar" else "hat"
    if start == "box":
        return box_grid(resolution, window)
    if start == "hat":
        return hat_grid(resolution, window)
    return GridFunction.from_callable(box_midpoint_profile, resolution, window)


def _run_cascade(p: dict) -> RunResult:
    sys_obj = _system(p["system"])
    start = _start_grid(p["system"], p["start"], p["resolution"], p["window"])
    res = cascade(sys_obj, start, p["iters"], convention=p["dilation_convention"])
    results = {
        "residual": res.residual,
        "iterations": res.iterations,
        "step_changes": list(res.history),
    }
    return RunResult(res.phi.to_csv(), results, f"residual {_fmt(res.residual)}")


def _run_wavelet(p: dict) -> RunResult:
    sys_obj = _system(p["system"])
    phi = _start_grid(p["system"], p["start"], p["resolution"], (-1, 2))
    psi = wavelet_from_scaling(
        sys_obj, phi, form=p["form"], convention=p["dilation_convention"]
    )
    mean = psi.integral()
    results = {
        "integral": mean,
        "window": list(psi.window),
        "resolution": psi.resolution,
    }
    return RunResult(psi.to_csv(), results, f"integral magnitude {abs(mean):.3g}")


def _run_limit(p: dict) -> RunResult:
    delta = p["delta"]
    if delta == "auto":
        delta = "arctan" if p["preset"] == "haar" else "tri"
    orders = p["n"]
    rep = limit_build_report(
        p["preset"], delta, tuple(orders), p["resolution"], p["window"]
    )
    if p["emit"] == "errors":
        rows = [[n, rep["errors"][n]["l1"], rep["errors"][n]["max"]] for n in orders]
        csv = _csv("n,l1_error,max_error", rows)
    else:
        csv = limit_build(
            p["preset"], delta, max(orders), p["resolution"], p["window"]
        ).to_csv()
    final = rep["errors"][max(orders)]["l1"]
    results = {
        "delta": delta,
        "errors": {str(n): rep["errors"][n] for n in orders},
        "monotone_l1": rep["monotone_l1"],
    }
    return RunResult(
        csv,
        results,
        f"l1 error {final:.3g} at order {max(orders)}, monotone {rep['monotone_l1']}",
    )


def _run_spectrum(p: dict) -> RunResult:
    if p["map"] == "doubling":
        trace = iterate_spectrum(p["a0"], n=p["n"])
    else:
        trace = iterate_spectrum(p["a0"], step=a2half_step, n=p["n"])
    last_n, last_a = trace.values[-1]
    results = {
        "closed_form_tag": trace.closed_form_tag,
        "overflow_at": trace.overflow_at,
        "steps_recorded": len(trace.values) - 1,
        "final": {"n": last_n, "a_n": last_a},
    }
    return RunResult(
        trace.to_csv(), results, f"{len(trace.values) - 1} steps, a_final {last_a:.6g}"
    )


def _run_ladder(p: dict) -> RunResult:
    rep = ladder_check(p["a_tilde"], p["n"], tuple(p["modes"]))
    rows = [
        [
            r["n"],
            r["rate"],
            r["a_n"],
            r["a_n_error"],
            complex(r["minus_coeff"]).real,
            r["minus_coeff_error"],
            r["minus_rate_error"],
            complex(r["plus_coeff"]).real,
            r["plus_coeff_error"],
            r["plus_rate_error"],
        ]
        for r in rep["ladder_rows"]
    ]
    csv = _csv(
        "n,rate,a_n,a_n_error,minus_coeff,minus_coeff_error,minus_rate_error,"
        "plus_coeff,plus_coeff_error,plus_rate_error",
        rows,
    )
    results = {
        "max_ladder_error": rep["max_ladder_error"],
        "max_mode_error": rep["max_mode_error"],
        "mode_rows": rep["mode_rows"],
        "constant_fixed_minus": rep["constant_fixed_minus"],
        "constant_fixed_plus": rep["constant_fixed_plus"],
    }
    return RunResult(
        csv,
        results,
        f"max ladder error {rep['max_ladder_error']:.2e}, "
        f"max mode error {rep['max_mode_error']:.2e}",
    )


def _run_closure(p: dict) -> RunResult:
    rep = check_closure(AlgebraParams(p["s"], p["alpha"]))
    rows = [["r1", rep["r1"]], ["r2", rep["r2"]], ["r3", rep["r3"]],
            ["max_residual", rep["max_residual"]]]
    results = {k: v for k, v in rep.items() if k not in ("s", "alpha")}
    return RunResult(
        _csv("quantity,value", rows),
        results,
        f"max residual {rep['max_residual']:.3g}",
    )


def _run_general_closure(p: dict) -> RunResult:
    rep = verify_general_closure(p["j0"], p["j"], p["s"])
    rows = [
        ["r1", rep["r1"]],
        ["r2", rep["r2"]],
        ["r3", rep["r3"]],
        ["max_residual", rep["max_residual"]],
        ["j_at_one", rep["j_at_one"]],
    ]
    results = {k: v for k, v in rep.items() if k != "s"}
    return RunResult(
        _csv("quantity,value", rows),
        results,
        f"max residual {rep['max_residual']:.3g}",
    )


def _run_solve_b(p: dict) -> RunResult:
    sol = solve_refinement(p["c"], p["window"], p["nullspace_tol"])
    rows = [[e, re, im] for e, re, im in _poly_terms(sol.b)]
    results = {
        "b": sol.b,
        "rho": sol.rho,
        "residual": sol.residual,
        "zero_order": sol.zero_order,
        "support_bound": sol.support_bound,
    }
    return RunResult(
        _csv("exponent,re,im", rows),
        results,
        f"rho {_fmt(complex(sol.rho).real)}, residual {sol.residual:.2e}",
    )


def _run_casimir(p: dict) -> RunResult:
    solve = solve_casimir_chi(p["r"])
    flat = casimir_constancy_check(p["n"], p["a_tilde"], p["tol"])
    rows = [[e, re, im] for e, re, im in _poly_terms(solve.chi)]
    results = {"chi": solve.chi, "free_constant": solve.free_constant,
               "constancy": flat}
    if "skipped" in flat:
        summary = f"potential solved; constancy scan skipped ({flat['skipped']})"
    else:
        summary = (
            f"combination value {complex(flat['reference']).real:.6g}, "
            f"spread {flat['max_spread']:.2e}"
        )
    return RunResult(_csv("exponent,re,im", rows), results, summary)


def _run_prop1(p: dict) -> RunResult:
    rep = prop1_solve(p["window"], p["nullspace_tol"])
    k = rep["window"]
    basis = rep["basis"]
    header = "exponent," + ",".join(f"basis_{i}" for i in range(len(basis)))
    rows = []
    for e in range(-k, k + 1):
        vals = [float(b.get(e, 0.0)) for b in basis]
        if any(v != 0.0 for v in vals):
            rows.append([e, *vals])
    results = {key: v for key, v in rep.items()}
    return RunResult(
        _csv(header, rows),
        results,
        f"nullspace dim {rep['nullspace_dim']}, "
        f"trivial residual {_fmt(rep['trivial_residual'])}, "
        f"pattern residual {_fmt(rep['pattern_constraint_residual'])}",
    )


def _run_gamma(p: dict) -> RunResult:
    m = GammaMap(b_const=p["b"], sign=p["sign"])
    rep = gamma_ladder_report(m, p["points"], p["lo"], p["hi"])
    rows = []
    lg_lo, lg_hi = math.log10(p["lo"]), math.log10(p["hi"])
    for i in range(p["points"]):
        xi = 10.0 ** (lg_lo + (lg_hi - lg_lo) * i / (p["points"] - 1))
        g = gamma_eval(m, xi)
        stepped = gamma_eval(m, 2.0 * xi * xi - 1.0)
        rows.append([xi, g, stepped, abs(stepped - (g - m.sign))])
    results = dict(rep)
    return RunResult(
        _csv("xi,gamma,gamma_after_step,step_error", rows),
        results,
        f"max step error {rep['max_step_error']:.2e} on {p['points']} points",
    )


def _run_bridge(p: dict) -> RunResult:
    b_const = p["a_tilde"] if p["b"] is None else p["b"]
    m = GammaMap(b_const=b_const, sign=p["sign"])
    rep = suq2_bridge_check(m, p["s"], p["a_tilde"], p["n"], tuple(p["j0"]))
    rows = [
        [r["j0"], r["xi"], r["f_value"][0], r["f_value"][1], r["q_bracket_2j0"]]
        for r in rep["bridge_rows"]
    ]
    results = dict(rep)
    results["b"] = b_const
    return RunResult(
        _csv("j0,xi,f_re,f_im,q_bracket_2j0", rows),
        results,
        f"gamma steps within {rep['max_gamma_step_error']:.2e}, "
        f"phi ratios within {rep['max_phi_ratio_error']:.2e}",
    )


def _run_fig1(p: dict) -> RunResult:
    rep = fig1_report(p["n"], p["grid"])
    results = {
        "zero_crossings": {str(n): c for n, c in rep["zero_crossings"].items()},
    }
    counts = rep["zero_crossings"]
    summary = "zero crossings " + ", ".join(f"n={n}: {counts[n]}" for n in p["n"])
    return RunResult(fig1_csv(rep["rows"]), results, summary)


def _run_fig2(p: dict) -> RunResult:
    rep = deformed_scaling_report(tuple(p["s_values"]), p["n"], p["resolution"])
    rows = [[r["s"], r["l1_to_box"], r["integral_error"]] for r in rep["rows"]]
    results = {
        "rows": rep["rows"],
        "note": "survey data; only the s = 1 endpoint carries an accuracy claim",
    }
    end = [r for r in rep["rows"] if r["s"] == 1.0]
    summary = (
        f"endpoint l1 to box {end[0]['l1_to_box']:.3g}"
        if end
        else f"{len(rep['rows'])} profiles surveyed"
    )
    return RunResult(_csv("s,l1_to_box,integral_error", rows), results, summary)


def _run_check(p: dict) -> RunResult:
    checks = run_all()
    rows = [[r.name, "pass" if r.passed else "fail"] for r in checks]
    results = {
        "checks": [
            {
                "name": r.name,
                "passed": r.passed,
                "message": r.message,
                "details": r.details,
            }
            for r in checks
        ],
        "passed": sum(r.passed for r in checks),
        "total": len(checks),
    }
    ok = all(r.passed for r in checks)
    return RunResult(
        _csv("name,status", rows),
        results,
        format_report(checks).rstrip("\n"),
        exit_code=0 if ok else 1,
    )


_RUNNERS: dict[str, Callable[[dict], RunResult]] = {
    "cascade": _run_cascade,
    "wavelet": _run_wavelet,
    "limit": _run_limit,
    "spectrum": _run_spectrum,
    "ladder": _run_ladder,
    "closure": _run_closure,
    "general-closure": _run_general_closure,
    "solve-b": _run_solve_b,
    "casimir": _run_casimir,
    "prop1": _run_prop1,
    "gamma": _run_gamma,
    "bridge": _run_bridge,
    "fig1": _run_fig1,
    "fig2": _run_fig2,
    "check": _run_check,
}


# -- parsing and dispatch ---------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    """Argument parser whose errors are one usage line plus the message."""

    def error(self, message):
        usage = " ".join(self.format_usage().split())
        sys.stderr.write(f"error: {message}\n{usage}\n")
        raise SystemExit(2)


def _build_parser() -> tuple[_Parser, dict[str, _Parser]]:
    parser = _Parser(prog="waveq", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="subcommand", metavar="subcommand")
    by_name = {}
    for name, (blurb, opts) in _SUBCOMMANDS.items():
        sub = subs.add_parser(name, help=blurb, description=blurb)
        for opt in (*opts, *_COMMON):
            sub.add_argument(opt.flag, dest=opt.dest, default=None, help=opt.help)
        by_name[name] = sub
    return parser, by_name


def _load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError("--config", f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError("--config", f"config file is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("--config", "config file must hold a JSON object")
    return data


def _effective_params(name: str, ns: argparse.Namespace) -> dict:
    """Merge flag values, config-file values, and defaults, in that order."""
    opts = (*_SUBCOMMANDS[name][1], *_COMMON)
    by_dest = {o.dest: o for o in opts}
    config = {}
    if ns.config is not None:
        raw = _load_config(ns.config)
        for key, value in raw.items():
            dest = str(key).lstrip("-").replace("-", "_")
            if dest not in by_dest or dest == "config":
                raise UsageError(
                    "--config", f"unknown config key {key!r} for subcommand {name}"
                )
            config[dest] = value
    params = {}
    for opt in opts:
        cli_value = getattr(ns, opt.dest)
        source = cli_value if cli_value is not None else config.get(opt.dest)
        if source is None:
            if opt.required:
                raise UsageError(opt.flag, f"{opt.flag} is required")
            params[opt.dest] = opt.default
            continue
        try:
            params[opt.dest] = opt.coerce(source)
        except (ValueError, LaurentParseError) as exc:
            raise UsageError(
                opt.flag, f"invalid value for {opt.flag}: {exc}"
            ) from exc
    return params


def _write_outputs(cfg: RunConfig, result: RunResult) -> tuple[str, str]:
    out_dir = cfg.params.get("output") or "."
    os.makedirs(out_dir, exist_ok=True)
    csv_name = f"{cfg.subcommand}.csv"
    manifest_name = f"{cfg.subcommand}.manifest.json"
    manifest = {
        "subcommand": cfg.subcommand,
        "config": _jsonable(
            {k: v for k, v in cfg.params.items() if k not in ("output", "config")}
        ),
        "files": {"csv": csv_name},
        "results": _jsonable(result.results),
    }
    with open(os.path.join(out_dir, csv_name), "w", newline="\n") as fh:
        fh.write(result.csv)
    with open(os.path.join(out_dir, manifest_name), "w", newline="\n") as fh:
        fh.write(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return csv_name, manifest_name


def dispatch(argv: list[str]) -> int:
    """Parse argv, run the subcommand, write outputs; return the exit code."""
    parser, by_name = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if ns.subcommand is None:
        usage = " ".join(parser.format_usage().split())
        sys.stderr.write(f"error: a subcommand is required\n{usage}\n")
        return 2
    try:
        params = _effective_params(ns.subcommand, ns)
    except UsageError as exc:
        usage = " ".join(by_name[ns.subcommand].format_usage().split())
        sys.stderr.write(f"error: {exc} (offending flag: {exc.flag})\n{usage}\n")
        return 2
    cfg = RunConfig(ns.subcommand, params)
    try:
        result = _RUNNERS[cfg.subcommand](cfg.params)
    except Exception as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    csv_name, manifest_name = _write_outputs(cfg, result)
    print(result.summary)
    print(f"wrote {csv_name} and {manifest_name} in {cfg.params.get('output') or '.'}")
    return result.exit_code


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
