"""Scaling functions and wavelets from two-scale coefficient masks.

A coefficient mask {C_k} defines the symbol g(T) = sum_k C_k T^{-k} and the
two-scale operator D g(T); its fixed functions are scaling functions.  This
module checks mask admissibility, runs the cascade fixed-point iteration on
a grid, builds wavelets from a scaling function, and constructs scaling
functions directly as high-order difference words applied to a smooth seed
(the limit-sequence route, which never iterates).

All grid work uses the sigma = 1 dilation convention: (D f)(x) = f(2x) with
no amplitude prefactor, under which sum C_k = 2 preserves mass exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .gridfn import (
    GridFunction,
    GridResolutionError,
    apply_op_grid,
    sample_op_applied,
)
from .laurent import Dyadic, EvaluationOverflowError, LaurentPoly
from .opalgebra import OpExpr
from .qdeform import w_minus

DIVERGENCE_L2_LIMIT = 1e6


class CascadeDivergenceError(RuntimeError):
    pass


def _to_dyadic(step) -> Dyadic:
    if isinstance(step, Dyadic):
        return step
    if isinstance(step, int):
        return Dyadic(step)
    d = Dyadic.from_float(float(step))
    if d is None:
        raise ValueError(f"mask step {step!r} is not a dyadic rational")
    return d


@dataclass(frozen=True)
class ScalingSystem:
    """A two-scale coefficient mask with its wavelet shift.

    coeffs maps translation steps (dyadic rationals) to real coefficients
    C_k; lam is the odd integer translation used by the literal wavelet
    formula.
    """

    name: str
    coeffs: dict
    lam: int = 1

    def __post_init__(self):
        if self.lam % 2 != 1:
            raise ValueError(f"wavelet shift must be odd, got {self.lam}")
        object.__setattr__(
            self,
            "coeffs",
            {_to_dyadic(k): float(c) for k, c in self.coeffs.items()},
        )
        if not self.coeffs:
            raise ValueError("coefficient mask is empty")

    @property
    def g(self) -> LaurentPoly:
        """Mask symbol sum_k C_k T^{-k}."""
        return LaurentPoly.from_dict({-k: c for k, c in self.coeffs.items()})

    @property
    def finest_step(self) -> Dyadic:
        nonzero = [k for k in self.coeffs if k.num != 0]
        if not nonzero:
            return Dyadic(1)
        return min((abs(float(k)), k) for k in nonzero)[1]

    def two_scale_op(self) -> OpExpr:
        """D g(T), the operator whose fixed functions this mask defines."""
        return OpExpr.dilation(1) * OpExpr.from_laurent(self.g)


def haar_system() -> ScalingSystem:
    return ScalingSystem("haar", {0: 1.0, 1: 1.0})


def b2_system() -> ScalingSystem:
    """Piecewise-linear (hat) mask at half-integer steps: {1/2, 1, 1/2}."""
    return ScalingSystem("b2", {0: 0.5, Dyadic(1, 1): 1.0, 1: 0.5})


# -- exact profiles -------------------------------------------------------------


def box_profile(x):
    """Indicator of [0, 1), right-continuous."""
    x = np.asarray(x, dtype=float)
    return np.where((x >= 0.0) & (x < 1.0), 1.0, 0.0)


def box_midpoint_profile(x):
    """Box with the midpoint value 1/2 at both jumps; the pointwise limit
    of the odd-seed difference sequences."""
    x = np.asarray(x, dtype=float)
    inner = np.where((x > 0.0) & (x < 1.0), 1.0, 0.0)
    return inner + np.where((x == 0.0) | (x == 1.0), 0.5, 0.0)


def hat_profile(x):
    """Peak-2 hat on [0, 1]: 2 - |4x - 2| clipped at zero; exact on any
    dyadic lattice."""
    x = np.asarray(x, dtype=float)
    return np.maximum(0.0, 2.0 - np.abs(4.0 * x - 2.0))


def box_grid(resolution: int, window: tuple[int, int] = (-1, 2)) -> GridFunction:
    return GridFunction.from_callable(box_profile, resolution, window)


def hat_grid(resolution: int, window: tuple[int, int] = (-1, 2)) -> GridFunction:
    return GridFunction.from_callable(hat_profile, resolution, window)


# -- admissibility ---------------------------------------------------------------


def check_admissibility(sys: ScalingSystem, tol: float = 1e-12) -> dict:
    """Coefficient-sum and shifted-overlap conditions for the mask.

    The overlap target is sum_k C_k C_{k+2l} = 2*delta_{l,0}: the variant
    normalized to delta_{l,0} alone fails for the box mask {1, 1} whose
    squared sum is 2, so the doubled form is what the sum rule
    sum C_k = 2 is consistent with.  The report records this choice.
    """
    coeffs = sys.coeffs
    total = math.fsum(coeffs.values())
    steps = sorted(coeffs, key=float)
    span = float(steps[-1]) - float(steps[0])
    max_l = max(1, int(math.ceil(span / 2.0)))
    overlaps = {}
    orth_ok = {}
    for l in range(-max_l, max_l + 1):
        shift = Dyadic(2 * l)
        val = math.fsum(
            c * coeffs[k + shift] for k, c in coeffs.items() if k + shift in coeffs
        )
        target = 2.0 if l == 0 else 0.0
        overlaps[str(l)] = val
        orth_ok[str(l)] = abs(val - target) <= tol
    return {
        "system": sys.name,
        "coefficient_sum": total,
        "sum_ok": abs(total - 2.0) <= tol,
        "overlaps": overlaps,
        "orth_ok": orth_ok,
        "orthonormal": all(orth_ok.values()),
        "normalization_note": (
            "overlap target is 2*delta_{l,0}; the delta_{l,0}-normalized "
            "variant is inconsistent with the box mask {1, 1} and with "
            "sum C_k = 2, so the doubled form is used and the deviation "
            "recorded here"
        ),
    }


# -- cascade iteration ------------------------------------------------------------


@dataclass(frozen=True)
class CascadeResult:
    phi: GridFunction
    iterations: int
    residual: float
    history: tuple


def _l2_norm(f: GridFunction) -> float:
    step = 2.0 ** -f.resolution
    return math.sqrt(step * float(np.sum(np.abs(f.values) ** 2)))


def _check_alignment(sys: ScalingSystem, resolution: int) -> None:
    for k in sys.coeffs:
        if not k.scaled_pow2(resolution).is_integer():
            raise GridResolutionError(
                f"non-aligned step: mask step {k} is off the 2^-{resolution} lattice"
            )


def cascade(
    sys: ScalingSystem,
    start: GridFunction,
    iters: int,
    convention: str = "one",
) -> CascadeResult:
    """Iterate phi <- D g(T) phi and record convergence.

    No renormalization is applied: with sum C_k = 2 under sigma = 1 the
    grid integral is conserved, so amplitude errors in the start function
    persist instead of being washed out (2*box stays 2*box).  The stored
    residual is the max-norm of one further application minus phi, so
    recomputing it from the returned phi reproduces it.
    """
    if iters < 0:
        raise ValueError("iteration count must be nonnegative")
    _check_alignment(sys, start.resolution)
    op = sys.two_scale_op()
    phi = start
    history = []
    for i in range(iters):
        nxt = apply_op_grid(op, phi, convention=convention)
        history.append(_l2_norm(nxt - phi))
        phi = nxt
        norm = _l2_norm(phi)
        if norm > DIVERGENCE_L2_LIMIT:
            raise CascadeDivergenceError(
                f"cascade divergence: L2 norm {norm:.3e} after {i + 1} iterations"
            )
    final_residual = float(
        np.max(np.abs((apply_op_grid(op, phi, convention=convention) - phi).values))
    )
    return CascadeResult(
        phi=phi, iterations=iters, residual=final_residual, history=tuple(history)
    )


# -- wavelets ---------------------------------------------------------------------


def _alternate_reflect(g: LaurentPoly) -> LaurentPoly:
    """g(-T^{-1}): T^e -> (-1)^e T^{-e}, defined only for integer exponents."""
    out = {}
    for exp, coeff in g.terms():
        if not (exp.is_exact and exp.dyadic.is_integer()):
            raise ValueError(
                "literal wavelet form needs integer mask steps; "
                "use the canonical form for half-step masks"
            )
        e = exp.dyadic.num
        out[-e] = out.get(-e, 0.0) + coeff * (-1.0 if e % 2 else 1.0)
    return LaurentPoly.from_dict(out)


def _alternating_mask(sys: ScalingSystem) -> LaurentPoly:
    """sum_k (-1)^{k/h} C_k T^{-k} with h the finest mask step."""
    h = float(sys.finest_step)
    out = {}
    for k, c in sys.coeffs.items():
        ratio = float(k) / h
        m = round(ratio)
        if abs(ratio - m) > 1e-9:
            raise ValueError(f"mask step {k} is not a multiple of the finest step")
        out[-k] = c * (-1.0 if m % 2 else 1.0)
    return LaurentPoly.from_dict(out)


def _output_window(expr: OpExpr, f: GridFunction) -> tuple[int, int]:
    """Window on which expr f can be nonzero, given f's support window."""
    lo, hi = f.window
    bounds = []
    for t in expr.terms():
        scale = 2.0 ** t.beta.value
        a = t.alpha.value
        bounds.append(((lo - a) / scale, (hi - a) / scale))
    w_lo = int(math.floor(min(b[0] for b in bounds)))
    w_hi = int(math.ceil(max(b[1] for b in bounds)))
    return (w_lo, max(w_hi, w_lo + 1))


def wavelet_from_scaling(
    sys: ScalingSystem,
    phi: GridFunction,
    form: str = "literal",
    convention: str = "one",
) -> GridFunction:
    """Mother wavelet from a scaling function.

    form="literal" applies -T^{-lam} D g(-T^{-1}), which needs integer mask
    steps; form="canonical" applies D times the alternating mask
    sum (-1)^{k/h} C_k T^{-k}, which also covers half-step masks and, for
    the box mask, is the usual difference wavelet D(1 - T^{-1}) phi.
    The two differ by an integer translation for the box mask.
    """
    if form == "literal":
        sub = _alternate_reflect(sys.g)
        op = (
            OpExpr.scalar(-1.0)
            * OpExpr.translation(-sys.lam)
            * OpExpr.dilation(1)
            * OpExpr.from_laurent(sub)
        )
    elif form == "canonical":
        op = OpExpr.dilation(1) * OpExpr.from_laurent(_alternating_mask(sys))
    else:
        raise ValueError(f"form must be 'literal' or 'canonical', got {form!r}")
    return apply_op_grid(
        op,
        phi,
        convention=convention,
        out_resolution=phi.resolution + 1,
        out_window=_output_window(op, phi),
    )


# -- limit sequences ---------------------------------------------------------------


def _seed_arctan(y):
    return np.arctan(2.0 * y) / np.pi


def _seed_tanh(y):
    return 0.5 * np.tanh(2.0 * y)


def _seed_tri(y):
    y = np.asarray(y, dtype=float)
    return (2.0 * y / np.pi) * np.arctan(2.0 * y) - np.log1p(4.0 * y * y) / (
        2.0 * np.pi
    )


_SEEDS = {"arctan": _seed_arctan, "tanh": _seed_tanh, "tri": _seed_tri}
_PRESET_SEEDS = {"haar": ("arctan", "tanh"), "b2": ("tri",)}


def limit_build(
    preset: str,
    delta: str,
    n: int,
    resolution: int,
    window: tuple[int, int] = (-1, 2),
) -> GridFunction:
    """Scaling function as one difference word on a dilated smooth seed.

    haar: (1 - T^{-1}) D^n applied to an odd sigmoid seed (arctan or tanh
    flavor), converging to the box with midpoint values at its jumps.
    b2: (1 - 2T^{-1/2} + T^{-1}) D^n applied to the even kink seed, with
    the amplitude divided by 2^{n-1}, converging to the peak-2 hat.
    Evaluated in closed form on the target lattice; no grid iteration.
    """
    if preset not in _PRESET_SEEDS:
        raise ValueError(f"preset must be one of {sorted(_PRESET_SEEDS)}, got {preset!r}")
    if delta not in _SEEDS:
        raise ValueError(f"delta must be one of {sorted(_SEEDS)}, got {delta!r}")
    if delta not in _PRESET_SEEDS[preset]:
        raise ValueError(f"delta preset {delta!r} is not available for {preset!r}")
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > 60:
        raise EvaluationOverflowError(
            f"amplitude compensation overflows past n = 60, got {n}"
        )
    seed = _SEEDS[delta]
    scale = 2.0**n
    out = GridFunction.zeros(resolution, window)
    xs = out.x_points()
    if preset == "haar":
        vals = seed(scale * xs) - seed(scale * (xs - 1.0))
    else:
        comp = 2.0 ** (n - 1)
        vals = (
            seed(scale * xs) - 2.0 * seed(scale * (xs - 0.5)) + seed(scale * (xs - 1.0))
        ) / comp
    return GridFunction(resolution, window, np.asarray(vals, dtype=complex))


def limit_oracle(preset: str) -> Callable:
    if preset == "haar":
        return box_midpoint_profile
    if preset == "b2":
        return hat_profile
    raise ValueError(f"no oracle for preset {preset!r}")


def limit_build_report(
    preset: str,
    delta: str,
    n_values: tuple[int, ...],
    resolution: int,
    window: tuple[int, int] = (-1, 2),
) -> dict:
    """L1 and max distances to the exact target for each word order n,
    plus whether the L1 error strictly decreases along n_values."""
    target = GridFunction.from_callable(limit_oracle(preset), resolution, window)
    errors = {}
    for n in n_values:
        f = limit_build(preset, delta, n, resolution, window)
        diff = f - target
        errors[n] = {
            "l1": f.l1_distance(target),
            "max": float(np.max(np.abs(diff.values))),
        }
    l1s = [errors[n]["l1"] for n in n_values]
    return {
        "preset": preset,
        "delta": delta,
        "resolution": resolution,
        "errors": errors,
        "monotone_l1": all(a > b for a, b in zip(l1s, l1s[1:])),
    }


def algebraic_form_check(n: int) -> dict:
    """Verify (1 - T^{-1}) D^n = (1 - T^{-2^-n}) (2 W-)^n exactly.

    The right side is the halving-word form: (2 W-)^n expands to D^n times
    the full 2^n-term translation sum, so the identity is the operator
    statement behind the limit-sequence construction.  Checked as a
    normal-form subtraction; the report carries the word's term count.
    """
    if not 0 <= n <= 8:
        raise ValueError(f"n must be within [0, 8], got {n}")
    lhs = (OpExpr.identity() - OpExpr.translation(-1)) * OpExpr.dilation(n)
    word = (2.0 * w_minus(1.0)) ** n
    rhs = (OpExpr.identity() - OpExpr.translation(Dyadic(-1, n))) * word
    residual = (lhs - rhs).max_abs_coeff()
    return {
        "n": n,
        "residual": residual,
        "word_terms": len(word),
        "expected_terms": 2**n,
        "ok": residual == 0.0 and len(word) == 2**n,
    }


# -- the deformed family -------------------------------------------------------------


def deformed_scaling(
    s: float,
    n: int,
    resolution: int,
    window: tuple[int, int] = (-1, 2),
    convention: str = "one",
) -> GridFunction:
    """Exploratory deformation: the limit-sequence word with 2 W-(s) in
    place of the two-scale operator, normalized to unit integral.

    op = (1 - T^{-2^-n}) (2 W-(s))^n, applied to the arctan seed by direct
    sampling (the word's dilation powers are not grid-aligned for generic
    s).  The word is linear, so normalizing once at the end equals
    normalizing after every step; s = 1 reproduces the box construction,
    while the s = 0 endpoint degenerates to pure phases and is reported
    without any claim.
    """
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"s must lie in [0, 1], got {s}")
    if n < 1:
        raise ValueError("n must be at least 1")
    word = (2.0 * w_minus(s)) ** n
    op = (OpExpr.identity() - OpExpr.translation(Dyadic(-1, n))) * word
    out = GridFunction.zeros(resolution, window)
    xs = out.x_points()
    vals = sample_op_applied(op, _seed_arctan, xs, convention=convention)
    raw = GridFunction(resolution, window, vals)
    norm = _l2_norm(raw)
    if norm > DIVERGENCE_L2_LIMIT:
        raise CascadeDivergenceError(f"cascade divergence: L2 norm {norm:.3e}")
    mass = raw.integral()
    if abs(mass) < 1e-12:
        raise ValueError("degenerate normalization: integral is numerically zero")
    return GridFunction(resolution, window, raw.values / mass)


def deformed_scaling_report(
    s_values: tuple[float, ...],
    n: int,
    resolution: int,
    window: tuple[int, int] = (-1, 2),
) -> dict:
    """L1 distance of each deformed profile to the exact box.  Only the
    s = 1 endpoint carries an accuracy claim; the rest is survey data."""
    target = GridFunction.from_callable(box_midpoint_profile, resolution, window)
    rows = []
    for s in s_values:
        f = deformed_scaling(s, n, resolution, window)
        rows.append(
            {
                "s": s,
                "l1_to_box": f.l1_distance(target),
                "integral_error": abs(f.integral() - 1.0),
            }
        )
    return {"n": n, "resolution": resolution, "rows": rows}


# -- wavelet self-similarity report ----------------------------------------------------


def wavelet_selfequation_report(resolution: int = 7) -> dict:
    """Residuals of the claimed self-similarity of the hat-mask wavelet.

    The stated relation reads psi = D (1 + 2T^{-1/2} + T^2)^2 psi; the T^2
    term breaks the symmetry the surrounding construction has, so the
    T^{-1} variant is measured alongside it.  Both residuals are reported;
    neither is asserted anywhere.
    """
    sys = b2_system()
    phi = hat_grid(resolution)
    psi = wavelet_from_scaling(sys, phi, form="canonical")
    half = Dyadic(1, 1)
    printed = LaurentPoly.from_dict({0: 1.0, -half: 2.0, 2: 1.0})
    symmetric = LaurentPoly.from_dict({0: 1.0, -half: 2.0, -1: 1.0})
    report = {"resolution": resolution, "note": "residuals reported, not asserted"}
    for label, mask in (("printed", printed), ("symmetric", symmetric)):
        op = OpExpr.dilation(1) * OpExpr.from_laurent(mask * mask)
        rhs = apply_op_grid(
            op, psi, out_resolution=psi.resolution, out_window=psi.window
        )
        diff = rhs - psi
        report[f"{label}_residual_max"] = float(np.max(np.abs(diff.values)))
        report[f"{label}_residual_l1"] = diff.l1_distance(
            GridFunction.zeros(psi.resolution, psi.window)
        )
    return report
