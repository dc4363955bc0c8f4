"""Laurent polynomials in a translation symbol T with exact dyadic exponents.

The exponent lattice of everything downstream (operator normal forms, scaling
masks, functional-equation solvers) lives in the dyadic rationals p/2^m, and
several checks are required to come out *exactly* zero in floating point.
That only works if exponents are carried as exact integers rather than
floats, so this module keeps a hard split between exact `Dyadic` exponents
and approximate float ones and never demotes the former silently.
"""

from __future__ import annotations

import cmath
import math
import warnings

COEFF_PRUNE_TOL = 1e-15
EXPONENT_MERGE_TOL = 1e-12
PHASE_OVERFLOW_LIMIT = 700.0


class LaurentError(Exception):
    pass


class LaurentParseError(LaurentError):
    """Syntax error in the text form; `position` is a 0-based char offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (position {position})")
        self.position = position


class EvaluationOverflowError(LaurentError):
    pass


class ApproximateExponentWarning(UserWarning):
    """A non-dyadic rational exponent was accepted as an approximate float."""


class Dyadic:
    """Exact dyadic rational num / 2**log2_den.

    Canonical form: log2_den == 0, or num is odd.  Instances are immutable
    by convention and hashable, so equality is equality of canonical fields.
    """

    __slots__ = ("num", "log2_den")

    def __init__(self, num: int, log2_den: int = 0):
        if log2_den < 0:
            # normalize negative "denominators" into the numerator
            num <<= -log2_den
            log2_den = 0
        while log2_den > 0 and num % 2 == 0:
            num //= 2
            log2_den -= 1
        if num == 0:
            log2_den = 0
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "log2_den", log2_den)

    def __setattr__(self, name, value):
        raise AttributeError("Dyadic is immutable")

    @staticmethod
    def from_float(x: float, max_log2_den: int = 30) -> "Dyadic | None":
        """Exact conversion when x is a dyadic with a small denominator.

        Returns None when x is not exactly representable within the given
        denominator bound; callers then fall back to approximate exponents.
        """
        if x != x or math.isinf(x):
            return None
        num, den = float(x).as_integer_ratio()
        log2_den = den.bit_length() - 1
        if log2_den > max_log2_den:
            return None
        return Dyadic(num, log2_den)

    def __float__(self) -> float:
        return self.num / (1 << self.log2_den)

    def is_integer(self) -> bool:
        return self.log2_den == 0

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Dyadic(other)
        if not isinstance(other, Dyadic):
            return NotImplemented
        return self.num == other.num and self.log2_den == other.log2_den

    def __hash__(self):
        return hash((self.num, self.log2_den))

    def _pair(self, other) -> "tuple[int, int] | None":
        if isinstance(other, int):
            other = Dyadic(other)
        if not isinstance(other, Dyadic):
            return None
        # common denominator 2**max(m1, m2)
        m = max(self.log2_den, other.log2_den)
        return (self.num << (m - self.log2_den), other.num << (m - other.log2_den))

    def __lt__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        return p[0] < p[1]

    def __le__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        return p[0] <= p[1]

    def __add__(self, other):
        if isinstance(other, int):
            other = Dyadic(other)
        if not isinstance(other, Dyadic):
            return NotImplemented
        m = max(self.log2_den, other.log2_den)
        return Dyadic(
            (self.num << (m - self.log2_den)) + (other.num << (m - other.log2_den)), m
        )

    __radd__ = __add__

    def __neg__(self):
        return Dyadic(-self.num, self.log2_den)

    def __sub__(self, other):
        if isinstance(other, int):
            other = Dyadic(other)
        if not isinstance(other, Dyadic):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            other = Dyadic(other)
        if not isinstance(other, Dyadic):
            return NotImplemented
        return Dyadic(self.num * other.num, self.log2_den + other.log2_den)

    __rmul__ = __mul__

    def scaled_pow2(self, k: int) -> "Dyadic":
        """self * 2**k, exactly."""
        if k >= 0:
            return Dyadic(self.num << k, self.log2_den)
        return Dyadic(self.num, self.log2_den - k)

    def __repr__(self):
        if self.log2_den == 0:
            return f"Dyadic({self.num})"
        return f"Dyadic({self.num}, {self.log2_den})"

    def __str__(self):
        if self.log2_den == 0:
            return str(self.num)
        if self.log2_den == 1:
            return f"{self.num}/2"
        return f"{self.num}/2^{self.log2_den}"


class Exponent:
    """Either an exact Dyadic or an approximate float exponent.

    Exact values are never silently demoted: arithmetic keeps exactness
    whenever every operand is exact and the operation stays dyadic.
    Approximate values compare equal within EXPONENT_MERGE_TOL.  Equality is
    tolerance-based, so Exponent is deliberately unhashable; containers sort
    and merge by value instead.
    """

    __slots__ = ("dyadic", "approx")

    def __init__(self, dyadic: Dyadic | None, approx: float | None):
        if (dyadic is None) == (approx is None):
            raise ValueError("Exponent is exactly one of exact/approximate")
        object.__setattr__(self, "dyadic", dyadic)
        object.__setattr__(self, "approx", approx)

    def __setattr__(self, name, value):
        raise AttributeError("Exponent is immutable")

    @staticmethod
    def exact(value: "Dyadic | int") -> "Exponent":
        if isinstance(value, int):
            value = Dyadic(value)
        return Exponent(value, None)

    @staticmethod
    def approximate(value: float) -> "Exponent":
        return Exponent(None, float(value))

    @staticmethod
    def of(value) -> "Exponent":
        """Coerce ints/Dyadics to exact, floats to exact-if-dyadic-small."""
        if isinstance(value, Exponent):
            return value
        if isinstance(value, (int, Dyadic)):
            return Exponent.exact(value)
        d = Dyadic.from_float(float(value))
        if d is not None:
            return Exponent.exact(d)
        return Exponent.approximate(float(value))

    @property
    def is_exact(self) -> bool:
        return self.dyadic is not None

    @property
    def value(self) -> float:
        return float(self.dyadic) if self.dyadic is not None else self.approx

    def __eq__(self, other) -> bool:
        if not isinstance(other, Exponent):
            return NotImplemented
        if self.is_exact and other.is_exact:
            return self.dyadic == other.dyadic
        return abs(self.value - other.value) <= EXPONENT_MERGE_TOL

    __hash__ = None  # tolerance equality forbids hashing

    def __neg__(self):
        if self.is_exact:
            return Exponent.exact(-self.dyadic)
        return Exponent.approximate(-self.approx)

    def add(self, other: "Exponent") -> "Exponent":
        if self.is_exact and other.is_exact:
            return Exponent.exact(self.dyadic + other.dyadic)
        return Exponent.approximate(self.value + other.value)

    def scaled_pow2(self, k: int) -> "Exponent":
        if self.is_exact:
            return Exponent.exact(self.dyadic.scaled_pow2(k))
        return Exponent.approximate(self.approx * (2.0**k))

    def times_dyadic(self, m: Dyadic) -> "Exponent":
        if self.is_exact:
            return Exponent.exact(self.dyadic * m)
        return Exponent.approximate(self.approx * float(m))

    def times_float(self, factor: float) -> "Exponent":
        """Scaling by a generic real: the result is approximate."""
        return Exponent.approximate(self.value * factor)

    def __repr__(self):
        if self.is_exact:
            return f"Exponent[{self.dyadic}]"
        return f"Exponent[~{self.approx!r}]"


def _exp_sort_key(e: Exponent) -> float:
    return e.value


def _merge_exponent(a: Exponent, b: Exponent) -> Exponent | None:
    """The representative of a merged pair, or None when they stay apart."""
    if a.is_exact and b.is_exact:
        return a if a.dyadic == b.dyadic else None
    if abs(a.value - b.value) <= EXPONENT_MERGE_TOL:
        # keep the exact representative when one side has it
        if a.is_exact:
            return a
        if b.is_exact:
            return b
        return a
    return None


def _format_real(v: float) -> str:
    s = format(v, ".17g")
    return s


def _format_coeff(c: complex) -> str:
    if c.imag == 0.0:
        return _format_real(c.real)
    re, im = c.real, c.imag
    sign = "+" if im >= 0 else "-"
    return f"({_format_real(re)}{sign}{_format_real(abs(im))}j)"


def _format_exponent(e: Exponent) -> str:
    if e.is_exact:
        return str(e.dyadic)
    return _format_real(e.approx)


class LaurentPoly:
    """Finite sum of c_alpha * T^alpha with complex c and Exponent alpha.

    Stored normalized: exponents strictly descending, coefficients with
    |c| < COEFF_PRUNE_TOL removed, exponents equal under the merge rule
    combined.  All operations return new normalized instances.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=()):
        object.__setattr__(self, "_terms", _normalize_terms(terms))

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors ----------------------------------------------------

    @staticmethod
    def zero() -> "LaurentPoly":
        return LaurentPoly()

    @staticmethod
    def one() -> "LaurentPoly":
        return LaurentPoly([(Exponent.exact(0), 1.0 + 0j)])

    @staticmethod
    def scalar(c: complex) -> "LaurentPoly":
        return LaurentPoly([(Exponent.exact(0), complex(c))])

    @staticmethod
    def term(coeff: complex, exponent) -> "LaurentPoly":
        return LaurentPoly([(Exponent.of(exponent), complex(coeff))])

    @staticmethod
    def from_dict(d: dict) -> "LaurentPoly":
        """Build from {exponent-like: coeff}; handy in tests."""
        return LaurentPoly([(Exponent.of(k), complex(v)) for k, v in d.items()])

    # -- inspection ------------------------------------------------------

    def terms(self) -> tuple:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def coeff_at(self, exponent) -> complex:
        target = Exponent.of(exponent)
        for e, c in self._terms:
            if e == target:
                return c
        return 0j

    def max_abs_coeff(self) -> float:
        return max((abs(c) for _, c in self._terms), default=0.0)

    def __len__(self):
        return len(self._terms)

    # -- ring operations -------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = LaurentPoly.scalar(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return LaurentPoly(list(self._terms) + list(other._terms))

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly([(e, -c) for e, c in self._terms])

    def __sub__(self, other):
        if isinstance(other, (int, float, complex)):
            other = LaurentPoly.scalar(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return LaurentPoly([(e, c * other) for e, c in self._terms])
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        prods = []
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                prods.append((e1.add(e2), c1 * c2))
        return LaurentPoly(prods)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if len(self._terms) != len(other._terms):
            return False
        return all(
            e1 == e2 and c1 == c2
            for (e1, c1), (e2, c2) in zip(self._terms, other._terms)
        )

    __hash__ = None

    def isclose(self, other: "LaurentPoly", tol: float = 1e-12) -> bool:
        return (self - other).max_abs_coeff() <= tol

    # -- the operations the rest of the package needs ---------------------

    def substitute_power(self, m) -> "LaurentPoly":
        """T -> T^m: multiply every exponent by m (integer or Dyadic), m != 0."""
        if isinstance(m, int):
            m = Dyadic(m)
        if isinstance(m, Dyadic):
            if m.num == 0:
                raise ValueError("substitution power must be nonzero")
            return LaurentPoly([(e.times_dyadic(m), c) for e, c in self._terms])
        mf = float(m)
        if mf == 0.0:
            raise ValueError("substitution power must be nonzero")
        return LaurentPoly([(e.times_float(mf), c) for e, c in self._terms])

    def substitute_scaled(self, m, phase: float) -> "LaurentPoly":
        """T -> e^{i*phase} T^m: exponents scale by m, coefficients pick up
        e^{i*phase*alpha}.  phase == 0 keeps coefficients bit-identical."""
        out = []
        for e, c in self._terms:
            if phase != 0.0:
                c = c * cmath.exp(1j * phase * e.value)
            if isinstance(m, int):
                out.append((e.times_dyadic(Dyadic(m)), c))
            elif isinstance(m, Dyadic):
                out.append((e.times_dyadic(m), c))
            else:
                out.append((e.times_float(float(m)), c))
        return LaurentPoly(out)

    def eval_phase(self, lam: complex) -> complex:
        """Evaluate with T^alpha -> e^{lam * alpha}.

        Raises EvaluationOverflowError when any |Re(lam*alpha)| exceeds
        PHASE_OVERFLOW_LIMIT instead of returning inf.
        """
        lam = complex(lam)
        total = 0j
        for e, c in self._terms:
            z = lam * e.value
            if abs(z.real) > PHASE_OVERFLOW_LIMIT:
                raise EvaluationOverflowError(
                    f"evaluation overflow: Re(lambda*alpha) = {z.real!r}"
                )
            total += c * cmath.exp(z)
        return total

    # -- text form ---------------------------------------------------------

    def __str__(self):
        if not self._terms:
            return "0"
        pieces = []
        for i, (e, c) in enumerate(self._terms):
            body, negative = _term_text(e, c)
            if i == 0:
                pieces.append(("-" if negative else "") + body)
            else:
                pieces.append((" - " if negative else " + ") + body)
        return "".join(pieces)

    def __repr__(self):
        return f"LaurentPoly({self})"


def _term_text(e: Exponent, c: complex) -> tuple[str, bool]:
    """Return (body, negative) with the sign pulled out for real coefficients."""
    negative = False
    if c.imag == 0.0 and c.real < 0:
        negative = True
        c = -c
    is_zero_exp = e.is_exact and e.dyadic == Dyadic(0)
    if is_zero_exp:
        return _format_coeff(c), negative
    exp_s = _format_exponent(e)
    if c == 1:
        return f"T^{exp_s}", negative
    return f"{_format_coeff(c)}*T^{exp_s}", negative


def _normalize_terms(terms) -> tuple:
    pairs = [(Exponent.of(e), complex(c)) for e, c in terms]
    pairs.sort(key=lambda p: -_exp_sort_key(p[0]))
    merged: list[list] = []
    for e, c in pairs:
        if merged:
            rep = _merge_exponent(merged[-1][0], e)
            if rep is not None:
                merged[-1][0] = rep
                merged[-1][1] += c
                continue
        merged.append([e, c])
    return tuple(
        (e, c) for e, c in merged if abs(c) >= COEFF_PRUNE_TOL
    )


def lp_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a * b


def lp_substitute_power(p: LaurentPoly, m) -> LaurentPoly:
    return p.substitute_power(m)


def lp_eval_phase(p: LaurentPoly, lam: complex) -> complex:
    return p.eval_phase(lam)


def lp_pow(p: LaurentPoly, n: int) -> LaurentPoly:
    if n < 0:
        raise ValueError("negative powers are not defined here")
    out = LaurentPoly.one()
    for _ in range(n):
        out = out * p
    return out


# ---------------------------------------------------------------------------
# parsing


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            raise LaurentParseError(f"expected '{ch}'", self.pos)
        self.pos += 1

    def at_end(self) -> bool:
        return self.pos >= len(self.text)

    def read_digits(self) -> str:
        start = self.pos
        while self.peek().isdigit():
            self.pos += 1
        if self.pos == start:
            raise LaurentParseError("expected digits", start)
        return self.text[start : self.pos]

    def read_number(self) -> tuple[str, bool]:
        """Unsigned numeric literal; returns (text, is_integer_literal)."""
        start = self.pos
        self.read_digits()
        is_int = True
        if self.peek() == ".":
            is_int = False
            self.pos += 1
            while self.peek().isdigit():
                self.pos += 1
        if self.peek() in ("e", "E"):
            save = self.pos
            self.pos += 1
            if self.peek() in ("+", "-"):
                self.pos += 1
            if self.peek().isdigit():
                is_int = False
                while self.peek().isdigit():
                    self.pos += 1
            else:
                self.pos = save  # not an exponent part after all
        return self.text[start : self.pos], is_int


def _parse_exponent(sc: _Scanner) -> Exponent:
    sc.skip_ws()
    start = sc.pos
    sign = 1
    if sc.peek() in ("+", "-"):
        if sc.peek() == "-":
            sign = -1
        sc.pos += 1
        sc.skip_ws()
    if not sc.peek().isdigit():
        raise LaurentParseError("expected exponent", sc.pos)
    num_text, num_is_int = sc.read_number()
    if sc.peek() != "/":
        if num_is_int:
            return Exponent.exact(sign * int(num_text))
        return Exponent.approximate(sign * float(num_text))
    # rational exponent p/q or p/2^m
    if not num_is_int:
        raise LaurentParseError("rational exponent needs an integer numerator", start)
    sc.pos += 1
    if not sc.peek().isdigit():
        raise LaurentParseError("expected denominator", sc.pos)
    den_start = sc.pos
    den_text = sc.read_digits()
    if den_text == "2" and sc.peek() == "^":
        sc.pos += 1
        m_text = sc.read_digits()
        return Exponent.exact(Dyadic(sign * int(num_text), int(m_text)))
    den = int(den_text)
    if den == 0:
        raise LaurentParseError("zero denominator", den_start)
    if den & (den - 1) == 0:
        return Exponent.exact(Dyadic(sign * int(num_text), den.bit_length() - 1))
    warnings.warn(
        f"non-dyadic exponent {sign * int(num_text)}/{den} stored as approximate",
        ApproximateExponentWarning,
        stacklevel=3,
    )
    return Exponent.approximate(sign * int(num_text) / den)


def _parse_tfactor(sc: _Scanner) -> Exponent:
    sc.expect("T")
    sc.skip_ws()
    if sc.peek() != "^":
        raise LaurentParseError("expected '^' after T", sc.pos)
    sc.pos += 1
    return _parse_exponent(sc)


def parse_laurent(text: str) -> LaurentPoly:
    """Parse the canonical text form.

    Grammar: a sum of signed terms, each `coeff`, `T^exp`, or `coeff*T^exp`;
    coeff is a decimal or rational p/q; exp is an integer, a decimal
    (stored approximate), or a dyadic rational p/2^m or p/q with q a power
    of two.  A non-dyadic rational exponent is accepted as an approximate
    float and flagged with ApproximateExponentWarning.
    """
    sc = _Scanner(text)
    terms: list[tuple[Exponent, complex]] = []
    sc.skip_ws()
    if sc.at_end():
        raise LaurentParseError("empty input", 0)
    first = True
    while True:
        sc.skip_ws()
        sign = 1.0
        if sc.peek() in ("+", "-"):
            if sc.peek() == "-":
                sign = -1.0
            sc.pos += 1
            sc.skip_ws()
        elif not first:
            if sc.at_end():
                break
            raise LaurentParseError("expected '+' or '-'", sc.pos)
        first = False
        if sc.peek() == "T":
            exp = _parse_tfactor(sc)
            terms.append((exp, complex(sign)))
        elif sc.peek().isdigit():
            num_text, _ = sc.read_number()
            coeff = float(num_text)
            if sc.peek() == "/":
                sc.pos += 1
                if not sc.peek().isdigit():
                    raise LaurentParseError("expected denominator", sc.pos)
                den_start = sc.pos
                den_text, den_is_int = sc.read_number()
                if not den_is_int:
                    raise LaurentParseError("expected integer denominator", den_start)
                den = int(den_text)
                if den == 0:
                    raise LaurentParseError("zero denominator", den_start)
                coeff /= den
            sc.skip_ws()
            if sc.peek() == "*":
                sc.pos += 1
                sc.skip_ws()
                if sc.peek() != "T":
                    raise LaurentParseError("expected T after '*'", sc.pos)
                exp = _parse_tfactor(sc)
                terms.append((exp, sign * coeff + 0j))
            else:
                terms.append((Exponent.exact(0), sign * coeff + 0j))
        elif sc.at_end():
            raise LaurentParseError("dangling sign", sc.pos)
        else:
            raise LaurentParseError(f"unexpected character {sc.peek()!r}", sc.pos)
        sc.skip_ws()
        if sc.at_end():
            break
        if sc.peek() not in ("+", "-"):
            raise LaurentParseError("expected '+' or '-'", sc.pos)
    return LaurentPoly(terms)
