"""Concrete function representations the operator algebra can act on.

Two representations cover everything downstream:

* `GridFunction`: samples on the dyadic lattice x = lo + k/2^J over an
  integer window [lo, hi).  Operator application is exact index arithmetic;
  a source point that falls off the lattice raises instead of interpolating.
* `ExpSum`: finite sums of a*e^(rate*x), closed under the full algebra
  including non-integer dilation powers, which grids cannot represent.

The dilation prefactor sigma(beta) is applied here, at application time,
under the convention name the caller picks ("one" by default).
"""

from __future__ import annotations

import cmath
import math
from typing import Callable, Iterable

import numpy as np

from .laurent import EvaluationOverflowError, Exponent, PHASE_OVERFLOW_LIMIT
from .opalgebra import OpExpr, dilation_prefactor

RATE_MERGE_TOL = 1e-12
COEFF_PRUNE_TOL = 1e-15


class GridResolutionError(ValueError):
    """An operator asked for samples that are not on the source lattice."""


class GridMismatchError(ValueError):
    """Two grid functions live on different lattices or windows."""


def _index_units(e: Exponent, resolution: int, what: str) -> int:
    """Convert a translation amount to lattice index units, exactly."""
    if e.is_exact:
        scaled = e.dyadic.scaled_pow2(resolution)
        if not scaled.is_integer():
            raise GridResolutionError(
                f"{what} {e.dyadic} is finer than the 2^-{resolution} lattice"
            )
        return scaled.num
    idx = e.value * (1 << resolution)
    k = round(idx)
    if abs(idx - k) > 1e-9:
        raise GridResolutionError(
            f"{what} {e.value!r} is not on the 2^-{resolution} lattice"
        )
    return int(k)


class GridFunction:
    """Complex samples on x = lo + k/2^J, k = 0 .. (hi-lo)*2^J - 1.

    The window [lo, hi) has integer endpoints and the function is treated
    as zero outside it.
    """

    __slots__ = ("resolution", "lo", "hi", "values")

    def __init__(self, resolution: int, window: tuple[int, int], values):
        lo, hi = window
        if not (isinstance(lo, int) and isinstance(hi, int) and lo < hi):
            raise ValueError("window must be integers lo < hi")
        if resolution < 0:
            raise ValueError("resolution must be >= 0")
        vals = np.asarray(values, dtype=complex)
        n = (hi - lo) << resolution
        if vals.shape != (n,):
            raise ValueError(f"expected {n} samples for window {window} at 2^-{resolution}")
        self.resolution = resolution
        self.lo = lo
        self.hi = hi
        self.values = vals

    @property
    def window(self) -> tuple[int, int]:
        return (self.lo, self.hi)

    @property
    def step(self) -> float:
        return 2.0**-self.resolution

    def x_points(self) -> np.ndarray:
        n = len(self.values)
        return self.lo + np.arange(n) * self.step

    @staticmethod
    def zeros(resolution: int, window: tuple[int, int]) -> "GridFunction":
        lo, hi = window
        return GridFunction(resolution, window, np.zeros((hi - lo) << resolution, complex))

    @staticmethod
    def from_callable(
        f: Callable, resolution: int, window: tuple[int, int]
    ) -> "GridFunction":
        gf = GridFunction.zeros(resolution, window)
        xs = gf.x_points()
        try:
            vals = np.asarray(f(xs), dtype=complex)
            if vals.shape != xs.shape:
                raise TypeError
        except (TypeError, ValueError):
            vals = np.array([complex(f(float(x))) for x in xs])
        return GridFunction(resolution, window, vals)

    def copy(self) -> "GridFunction":
        return GridFunction(self.resolution, self.window, self.values.copy())

    # -- calculus on the lattice ------------------------------------------

    def integral(self) -> complex:
        return complex(self.values.sum() * self.step)

    def inner(self, other: "GridFunction") -> complex:
        """<self, other> = step * sum conj(self) * other, same lattice only."""
        self._check_same_lattice(other)
        return complex(np.vdot(self.values, other.values) * self.step)

    def l1_distance(self, other: "GridFunction") -> float:
        self._check_same_lattice(other)
        return float(np.abs(self.values - other.values).sum() * self.step)

    def max_abs(self) -> float:
        return float(np.abs(self.values).max(initial=0.0))

    def value_at(self, x: float) -> complex:
        idx = (x - self.lo) * (1 << self.resolution)
        k = round(idx)
        if abs(idx - k) > 1e-9:
            raise GridResolutionError(f"{x!r} is not a lattice point")
        if 0 <= k < len(self.values):
            return complex(self.values[int(k)])
        return 0j

    def _check_same_lattice(self, other: "GridFunction"):
        if (
            self.resolution != other.resolution
            or self.lo != other.lo
            or self.hi != other.hi
        ):
            raise GridMismatchError(
                f"lattices differ: 2^-{self.resolution} on {self.window} vs "
                f"2^-{other.resolution} on {other.window}"
            )

    def isclose(self, other: "GridFunction", tol: float = 1e-12) -> bool:
        self._check_same_lattice(other)
        return float(np.abs(self.values - other.values).max(initial=0.0)) <= tol

    def __add__(self, other: "GridFunction") -> "GridFunction":
        self._check_same_lattice(other)
        return GridFunction(self.resolution, self.window, self.values + other.values)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        self._check_same_lattice(other)
        return GridFunction(self.resolution, self.window, self.values - other.values)

    def __mul__(self, scalar) -> "GridFunction":
        return GridFunction(self.resolution, self.window, self.values * complex(scalar))

    __rmul__ = __mul__

    def identical(self, other: "GridFunction") -> bool:
        """Bit-for-bit equality of samples on the same lattice."""
        self._check_same_lattice(other)
        return bool(np.array_equal(self.values, other.values))

    # -- text form -----------------------------------------------------------

    def to_csv(self) -> str:
        """Rows x,re,im at 17 significant digits, LF line endings."""
        lines = ["x,re,im"]
        for x, v in zip(self.x_points(), self.values):
            lines.append(f"{x:.17g},{v.real:.17g},{v.imag:.17g}")
        return "\n".join(lines) + "\n"

    def write_csv(self, path):
        with open(path, "w", newline="\n") as fh:
            fh.write(self.to_csv())

    def __repr__(self):
        return (
            f"GridFunction(2^-{self.resolution} on [{self.lo},{self.hi}), "
            f"{len(self.values)} samples)"
        )


def apply_op_grid(
    expr: OpExpr,
    f: GridFunction,
    convention: str = "one",
    out_resolution: int | None = None,
    out_window: tuple[int, int] | None = None,
) -> GridFunction:
    """Apply a normal-form operator to lattice samples.

    Every term needs an exact integer dilation power and source points
    y = 2^beta x + alpha that stay on the source lattice for every output
    x; otherwise GridResolutionError.  Points outside the source window
    read as zero.
    """
    res_out = f.resolution if out_resolution is None else out_resolution
    window = f.window if out_window is None else out_window
    out = GridFunction.zeros(res_out, window)
    n_out = len(out.values)
    n_src = len(f.values)
    i_arr = np.arange(n_out)
    xs = out.x_points()
    for t in expr.terms():
        if not (t.beta.is_exact and t.beta.dyadic.is_integer()):
            raise GridResolutionError(
                f"dilation power {t.beta.value!r} is not an exact integer; "
                "grids only support integer dilations"
            )
        b = t.beta.dyadic.num
        stride_log = b + f.resolution - res_out
        if stride_log < 0:
            raise GridResolutionError(
                f"D^{b} output at 2^-{res_out} needs source samples below 2^-{f.resolution}"
            )
        shift = _index_units(t.alpha, f.resolution, "translation")
        # stride_log >= 0 guarantees b + f.resolution >= res_out >= 0, so the
        # window offset is exact integer arithmetic for every integer b
        offset = (out.lo << (b + f.resolution)) - (f.lo << f.resolution)
        src_idx = (i_arr << stride_log) + offset + shift
        valid = (src_idx >= 0) & (src_idx < n_src)
        picked = np.where(valid, f.values[np.clip(src_idx, 0, n_src - 1)], 0j)
        weight = t.coeff * dilation_prefactor(convention, t.beta.value)
        if t.mu.value != 0.0:
            picked = picked * np.exp(1j * t.mu.value * xs)
        out.values += weight * picked
    return out


def sample_op_applied(
    expr: OpExpr,
    f: Callable,
    xs: np.ndarray,
    convention: str = "one",
) -> np.ndarray:
    """Evaluate (expr f)(xs) for an analytically known f.

    No lattice constraints: works for any real dilation power, which is
    what the deformed scaling construction needs.  f must accept a numpy
    array of points and return values of the same shape.
    """
    xs = np.asarray(xs, dtype=float)
    out = np.zeros(xs.shape, dtype=complex)
    for t in expr.terms():
        pts = (2.0 ** t.beta.value) * xs + t.alpha.value
        vals = np.asarray(f(pts), dtype=complex)
        weight = t.coeff * dilation_prefactor(convention, t.beta.value)
        if t.mu.value != 0.0:
            vals = vals * np.exp(1j * t.mu.value * xs)
        out += weight * vals
    return out


class ExpSum:
    """Finite sum of coeff * e^(rate * x) with complex coeff and rate.

    Closed under the full operator algebra: phases shift the rate by i*mu,
    dilations scale it by 2^beta, translations multiply the coefficient by
    e^(rate*alpha).  Rates closer than RATE_MERGE_TOL merge.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable[tuple[complex, complex]] = ()):
        object.__setattr__(self, "_terms", _normalize_expsum(terms))

    def __setattr__(self, name, value):
        raise AttributeError("ExpSum is immutable")

    @staticmethod
    def exponential(rate: complex, coeff: complex = 1.0) -> "ExpSum":
        return ExpSum([(complex(coeff), complex(rate))])

    @staticmethod
    def constant(c: complex = 1.0) -> "ExpSum":
        return ExpSum([(complex(c), 0j)])

    def terms(self) -> tuple[tuple[complex, complex], ...]:
        return self._terms

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient_of(self, rate: complex, tol: float = 1e-9) -> complex:
        hits = [c for c, r in self._terms if abs(r - rate) <= tol]
        return sum(hits, 0j)

    def __add__(self, other):
        if not isinstance(other, ExpSum):
            return NotImplemented
        return ExpSum(self._terms + other._terms)

    def __neg__(self):
        return ExpSum([(-c, r) for c, r in self._terms])

    def __sub__(self, other):
        if not isinstance(other, ExpSum):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar):
        if not isinstance(scalar, (int, float, complex)):
            return NotImplemented
        return ExpSum([(c * scalar, r) for c, r in self._terms])

    __rmul__ = __mul__

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c, _ in self._terms), default=0.0)

    def isclose(self, other: "ExpSum", tol: float = 1e-12) -> bool:
        return (self - other).max_abs_coeff() <= tol

    def eval(self, x):
        if isinstance(x, np.ndarray):
            out = np.zeros(x.shape, dtype=complex)
            for c, r in self._terms:
                out += c * np.exp(r * x)
            return out
        total = 0j
        for c, r in self._terms:
            z = r * x
            if abs(z.real) > PHASE_OVERFLOW_LIMIT:
                raise EvaluationOverflowError(
                    f"evaluation overflow: Re(rate*x) = {z.real!r}"
                )
            total += c * cmath.exp(z)
        return total

    def sample(self, xs: np.ndarray) -> np.ndarray:
        return self.eval(np.asarray(xs, dtype=float))

    def to_grid(self, resolution: int, window: tuple[int, int]) -> GridFunction:
        gf = GridFunction.zeros(resolution, window)
        return GridFunction(resolution, window, self.sample(gf.x_points()))

    def __repr__(self):
        inner = " + ".join(f"({c})e^({r})x" for c, r in self._terms)
        return f"ExpSum[{inner or '0'}]"


def _normalize_expsum(terms) -> tuple:
    pairs = [(complex(c), complex(r)) for c, r in terms]
    pairs.sort(key=lambda p: (p[1].real, p[1].imag))
    # greedy clustering: sums stay small, so the quadratic scan is fine and,
    # unlike adjacency after a lexicographic sort, actually catches every
    # near-duplicate complex rate
    merged: list[list[complex]] = []
    for c, r in pairs:
        for slot in merged:
            if abs(slot[1] - r) <= RATE_MERGE_TOL:
                slot[0] += c
                break
        else:
            merged.append([c, r])
    return tuple((c, r) for c, r in merged if abs(c) >= COEFF_PRUNE_TOL)


def apply_op_expsum(expr: OpExpr, es: ExpSum, convention: str = "one") -> ExpSum:
    """Exact closed-form action of a normal-form operator on an ExpSum."""
    out = []
    for t in expr.terms():
        sigma = dilation_prefactor(convention, t.beta.value)
        for a, rate in es.terms():
            coeff = t.coeff * a * sigma
            alpha = t.alpha.value
            if alpha != 0.0:
                z = rate * alpha
                if abs(z.real) > PHASE_OVERFLOW_LIMIT:
                    raise EvaluationOverflowError(
                        f"evaluation overflow: Re(rate*alpha) = {z.real!r}"
                    )
                coeff *= cmath.exp(z)
            new_rate = rate * (2.0 ** t.beta.value) + 1j * t.mu.value
            out.append((coeff, new_rate))
    return ExpSum(out)
