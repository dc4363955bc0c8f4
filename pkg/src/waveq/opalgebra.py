"""Normal-form algebra of phase/dilation/translation operators.

Every operator here is a finite sum of terms

    c * P^mu * D^beta * T^alpha

acting on functions of one real variable as

    (P^mu f)(x) = e^{i mu x} f(x)
    (D^beta f)(x) = sigma(beta) f(2^beta x)      (sigma set at application time)
    (T^alpha f)(x) = f(x + alpha)

Composition stays inside this normal form:

    (c1 P^m1 D^b1 T^a1)(c2 P^m2 D^b2 T^a2)
        = c1 c2 e^{i m2 a1} P^(m1 + 2^b1 m2) D^(b1+b2) T^(2^b2 a1 + a2)

The phase factor is skipped (kept exactly 1) when m2 or a1 is zero, and
exponent rescaling by 2^b is done by exact shifts when b is an exact
integer, so products of translation/dilation words with dyadic data are
bit-exact.  The sigma prefactor never enters composition: all three
supported conventions are exponential in beta, so they factor out of any
product and are applied only when an operator meets an actual function.
"""

from __future__ import annotations

import cmath
from typing import Iterable, NamedTuple

from .laurent import (
    EXPONENT_MERGE_TOL,
    Dyadic,
    Exponent,
    LaurentPoly,
    _format_coeff,
    _format_exponent,
    _merge_exponent,
)

COEFF_PRUNE_TOL = 1e-15

DILATION_CONVENTIONS = ("one", "paper", "unitary")


def dilation_prefactor(convention: str, beta: float) -> float:
    """sigma(beta) for the named convention; exponential in beta by design."""
    if convention == "one":
        return 1.0
    if convention == "paper":
        return 2.0**beta
    if convention == "unitary":
        return 2.0 ** (beta / 2.0)
    raise ValueError(
        f"unknown dilation convention {convention!r}; pick one of {DILATION_CONVENTIONS}"
    )


class OpTerm(NamedTuple):
    coeff: complex
    mu: Exponent
    beta: Exponent
    alpha: Exponent


_ZERO = Exponent.exact(0)


def _scale_by_pow2(e: Exponent, beta: Exponent) -> Exponent:
    """e * 2**beta, exact whenever that is possible."""
    if e.is_exact and e.dyadic.num == 0:
        return e
    if beta.is_exact and beta.dyadic.is_integer():
        return e.scaled_pow2(beta.dyadic.num)
    return e.times_float(2.0 ** beta.value)


def _compose_terms(t1: OpTerm, t2: OpTerm) -> OpTerm:
    coeff = t1.coeff * t2.coeff
    if t2.mu.value != 0.0 and t1.alpha.value != 0.0:
        coeff *= cmath.exp(1j * t2.mu.value * t1.alpha.value)
    mu = t1.mu.add(_scale_by_pow2(t2.mu, t1.beta))
    beta = t1.beta.add(t2.beta)
    alpha = _scale_by_pow2(t1.alpha, t2.beta).add(t2.alpha)
    return OpTerm(coeff, mu, beta, alpha)


def _sort_key(t: OpTerm):
    return (-t.beta.value, -t.mu.value, -t.alpha.value)


def _same_word(t1: OpTerm, t2: OpTerm) -> bool:
    return t1.mu == t2.mu and t1.beta == t2.beta and t1.alpha == t2.alpha


def _snap_coordinate(terms: list[OpTerm], field: int) -> list[OpTerm]:
    """Replace near-duplicate exponent values in one coordinate by a shared
    representative.

    Sorting alone cannot make mergeable terms adjacent: two terms whose mu
    differ by 1e-16 but whose alpha differ by 1 interleave with everything
    between their mu values.  Snapping each coordinate to one object per
    tolerance cluster makes equal-after-merge keys bitwise equal, so the
    adjacent-merge pass sees them.  Two *exact* exponents with distinct
    canonical values never fuse, matching the merge rule for single
    exponents.
    """
    by_value: dict[float, Exponent] = {}
    for t in terms:
        e = t[field]
        prev = by_value.get(e.value)
        if prev is None or (not prev.is_exact and e.is_exact):
            by_value[e.value] = e
    if len(by_value) < 2:
        return terms
    vals = sorted(by_value)
    mapping: dict[float, Exponent] = {}

    def flush(cluster: list[float]) -> None:
        exacts = [v for v in cluster if by_value[v].is_exact]
        rep = by_value[exacts[0] if exacts else cluster[0]]
        for v in cluster:
            mapping[v] = rep

    cluster = [vals[0]]
    for v in vals[1:]:
        near = v - cluster[-1] <= EXPONENT_MERGE_TOL
        exact_clash = by_value[v].is_exact and any(
            by_value[u].is_exact for u in cluster
        )
        if near and not exact_clash:
            cluster.append(v)
        else:
            flush(cluster)
            cluster = [v]
    flush(cluster)
    if all(mapping[v] is by_value[v] for v in vals):
        return terms
    name = OpTerm._fields[field]
    return [t._replace(**{name: mapping[t[field].value]}) for t in terms]


def _normalize(terms: Iterable[OpTerm]) -> tuple[OpTerm, ...]:
    snapped = list(terms)
    for field in (1, 2, 3):  # mu, beta, alpha
        snapped = _snap_coordinate(snapped, field)
    ordered = sorted(snapped, key=_sort_key)
    merged: list[OpTerm] = []
    for t in ordered:
        if merged and _same_word(merged[-1], t):
            prev = merged[-1]
            merged[-1] = OpTerm(
                prev.coeff + t.coeff,
                _merge_exponent(prev.mu, t.mu),
                _merge_exponent(prev.beta, t.beta),
                _merge_exponent(prev.alpha, t.alpha),
            )
        else:
            merged.append(t)
    return tuple(t for t in merged if abs(t.coeff) >= COEFF_PRUNE_TOL)


class OpExpr:
    """Normalized sum of OpTerms; immutable, supports ring arithmetic."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable[OpTerm] = ()):
        object.__setattr__(self, "_terms", _normalize(terms))

    def __setattr__(self, name, value):
        raise AttributeError("OpExpr is immutable")

    # -- constructors ----------------------------------------------------

    @staticmethod
    def zero() -> "OpExpr":
        return OpExpr()

    @staticmethod
    def identity() -> "OpExpr":
        return OpExpr([OpTerm(1.0 + 0j, _ZERO, _ZERO, _ZERO)])

    @staticmethod
    def scalar(c: complex) -> "OpExpr":
        return OpExpr([OpTerm(complex(c), _ZERO, _ZERO, _ZERO)])

    @staticmethod
    def term(coeff: complex, mu=0, beta=0, alpha=0) -> "OpExpr":
        return OpExpr(
            [OpTerm(complex(coeff), Exponent.of(mu), Exponent.of(beta), Exponent.of(alpha))]
        )

    @staticmethod
    def translation(alpha, coeff: complex = 1.0) -> "OpExpr":
        return OpExpr.term(coeff, alpha=alpha)

    @staticmethod
    def dilation(beta, coeff: complex = 1.0) -> "OpExpr":
        return OpExpr.term(coeff, beta=beta)

    @staticmethod
    def phase(mu, coeff: complex = 1.0) -> "OpExpr":
        return OpExpr.term(coeff, mu=mu)

    @staticmethod
    def from_laurent(p: LaurentPoly) -> "OpExpr":
        """A pure translation polynomial g(T)."""
        return OpExpr([OpTerm(c, _ZERO, _ZERO, e) for e, c in p.terms()])

    # -- inspection ------------------------------------------------------

    def terms(self) -> tuple[OpTerm, ...]:
        return self._terms

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def max_abs_coeff(self) -> float:
        return max((abs(t.coeff) for t in self._terms), default=0.0)

    def is_translation_only(self) -> bool:
        return all(t.mu.value == 0.0 and t.beta.value == 0.0 for t in self._terms)

    def to_laurent(self) -> LaurentPoly:
        if not self.is_translation_only():
            raise ValueError("operator has dilation or phase parts")
        return LaurentPoly([(t.alpha, t.coeff) for t in self._terms])

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = OpExpr.scalar(other)
        if not isinstance(other, OpExpr):
            return NotImplemented
        return OpExpr(self._terms + other._terms)

    __radd__ = __add__

    def __neg__(self):
        return OpExpr([OpTerm(-t.coeff, t.mu, t.beta, t.alpha) for t in self._terms])

    def __sub__(self, other):
        if isinstance(other, (int, float, complex)):
            other = OpExpr.scalar(other)
        if not isinstance(other, OpExpr):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return OpExpr(
                [OpTerm(t.coeff * other, t.mu, t.beta, t.alpha) for t in self._terms]
            )
        if not isinstance(other, OpExpr):
            return NotImplemented
        return OpExpr(
            [_compose_terms(t1, t2) for t1 in self._terms for t2 in other._terms]
        )

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self * other
        return NotImplemented

    def __pow__(self, n: int) -> "OpExpr":
        if not isinstance(n, int) or n < 0:
            raise ValueError("operator powers must be nonnegative integers")
        # square-and-multiply: word powers grow to 2^n terms, so the last
        # squaring dominates and repeated multiplication would double it
        out = OpExpr.identity()
        base = self
        k = n
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, OpExpr):
            return NotImplemented
        if len(self._terms) != len(other._terms):
            return False
        return all(
            t1.coeff == t2.coeff and _same_word(t1, t2)
            for t1, t2 in zip(self._terms, other._terms)
        )

    __hash__ = None

    def isclose(self, other: "OpExpr", tol: float = 1e-12) -> bool:
        return (self - other).max_abs_coeff() <= tol

    # -- text ---------------------------------------------------------------

    def __str__(self):
        if not self._terms:
            return "0"
        pieces = []
        for i, t in enumerate(self._terms):
            body, negative = _opterm_text(t)
            if i == 0:
                pieces.append(("-" if negative else "") + body)
            else:
                pieces.append((" - " if negative else " + ") + body)
        return "".join(pieces)

    def __repr__(self):
        return f"OpExpr({self})"


def _opterm_text(t: OpTerm) -> tuple[str, bool]:
    c = t.coeff
    negative = False
    if c.imag == 0.0 and c.real < 0:
        negative = True
        c = -c
    factors = []
    if t.mu.value != 0.0 or not t.mu.is_exact:
        factors.append(f"P^{_format_exponent(t.mu)}")
    if t.beta.value != 0.0 or not t.beta.is_exact:
        factors.append(f"D^{_format_exponent(t.beta)}")
    if t.alpha.value != 0.0 or not t.alpha.is_exact:
        factors.append(f"T^{_format_exponent(t.alpha)}")
    if not factors:
        return _format_coeff(c), negative
    if c == 1:
        return "*".join(factors), negative
    return "*".join([_format_coeff(c)] + factors), negative


def commutator(a: OpExpr, b: OpExpr) -> OpExpr:
    return a * b - b * a


def translation_sum(count: int, step) -> OpExpr:
    """1 + T^step + T^(2 step) + ... + T^((count-1) step), exact for dyadic step."""
    step = Exponent.of(step)
    terms = []
    for k in range(count):
        if step.is_exact:
            alpha = Exponent.exact(step.dyadic * Dyadic(k))
        else:
            alpha = step.times_float(float(k))
        terms.append(OpTerm(1.0 + 0j, _ZERO, _ZERO, alpha))
    return OpExpr(terms)
