"""Exact and rigorous arithmetic over a base beta in (1, 2).

Two backends:

* algebraic -- beta is described by an integer polynomial with a single root
  isolated in a rational interval.  Values are polynomials in beta with
  rational coefficients, reduced modulo that polynomial.  Every sign question
  is decided exactly (interval refinement, with a gcd gate for the case of a
  reducible defining polynomial).

* decimal -- beta is an exact decimal literal.  Values are intervals with
  rational endpoints; operations are exact until the endpoint denominators
  exceed the working precision, after which they are rounded outward.  Sign
  questions on straddling intervals answer UNDECIDED rather than guessing.

Digit decisions in base-beta algorithms are discontinuous in the argument,
so nothing here ever goes through floating point.
"""

from __future__ import annotations

import os
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import (
    MixedBaseError,
    NoRootInIntervalError,
    ParseError,
    RootOutsideUnitRangeError,
    UndecidedError,
)

Rational = Union[int, Fraction]

DEFAULT_PRECISION_BITS = 256
_env_cap = os.environ.get("BETAEXP_MAX_PRECISION_BITS")
MAX_PRECISION_BITS = int(_env_cap) if _env_cap else 4096
MIN_PRECISION_BITS = 64


class _Undecided:
    """Singleton sign answer for intervals straddling zero."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNDECIDED"

    def __bool__(self):
        return False


UNDECIDED = _Undecided()


# ---------------------------------------------------------------------------
# dense polynomials: list of Fraction, index = power of x
# ---------------------------------------------------------------------------

def poly_trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_degree(p):
    return len(p) - 1


def poly_neg(p):
    return [-c for c in p]


def poly_add(p, q):
    n = max(len(p), len(q))
    out = [Fraction(0)] * n
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    return poly_trim(out)


def poly_sub(p, q):
    return poly_add(p, poly_neg(q))


def poly_mul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return poly_trim(out)


def poly_scale(p, c):
    c = Fraction(c)
    return poly_trim([a * c for a in p])


def poly_divmod(p, q):
    q = poly_trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    quo = [Fraction(0)] * max(len(p) - len(q) + 1, 1)
    dq = len(q) - 1
    lead = q[-1]
    while len(r) - 1 >= dq and poly_trim(r):
        r = poly_trim(r)
        if len(r) - 1 < dq:
            break
        coeff = r[-1] / lead
        shift = len(r) - 1 - dq
        quo[shift] = coeff
        for i, b in enumerate(q):
            r[shift + i] -= coeff * b
        r[-1] = Fraction(0)
    return poly_trim(quo), poly_trim(r)


def poly_gcd(p, q):
    a, b = poly_trim(p), poly_trim(q)
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, r
    if a:
        a = poly_scale(a, Fraction(1, 1) / a[-1])  # monic
    return a


def poly_derivative(p):
    return poly_trim([c * i for i, c in enumerate(p)][1:])


def poly_squarefree(p):
    p = poly_trim(p)
    if len(p) <= 1:
        return p
    g = poly_gcd(p, poly_derivative(p))
    if len(g) <= 1:
        return p
    q, _ = poly_divmod(p, g)
    return q


def poly_eval(p, x):
    x = Fraction(x)
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_eval_interval(p, lo, hi):
    """Exact interval Horner evaluation; returns rational (vlo, vhi)."""
    vlo, vhi = Fraction(0), Fraction(0)
    for c in reversed(p):
        cands = (vlo * lo, vlo * hi, vhi * lo, vhi * hi)
        vlo, vhi = min(cands) + c, max(cands) + c
    return vlo, vhi


def sturm_chain(p):
    p = poly_squarefree(p)
    chain = [p, poly_derivative(p)]
    while chain[-1]:
        _, r = poly_divmod(chain[-2], chain[-1])
        chain.append(poly_neg(r))
    return chain[:-1]


def _sign_variations(chain, x):
    signs = []
    for q in chain:
        v = poly_eval(q, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    flips = 0
    for a, b in zip(signs, signs[1:]):
        if a != b:
            flips += 1
    return flips


def sturm_root_count(p, lo, hi):
    """Number of distinct real roots of p in (lo, hi]."""
    chain = sturm_chain(p)
    return _sign_variations(chain, lo) - _sign_variations(chain, hi)


# ---------------------------------------------------------------------------
# polynomial input grammar: integer coefficients, variable x
# ---------------------------------------------------------------------------

def parse_polynomial(text: str):
    """Parse e.g. ``x^2-x-1``, ``10*x - 19``, ``-2x^3+x`` into int coeffs."""
    s = text.replace(" ", "").replace("**", "^")
    if not s:
        raise ParseError("empty polynomial")
    # split into signed terms
    terms = []
    cur = ""
    for i, ch in enumerate(s):
        if ch in "+-" and i > 0 and s[i - 1] not in "+-^*":
            terms.append(cur)
            cur = ch
        else:
            cur += ch
    terms.append(cur)
    coeffs: dict[int, int] = {}
    for term in terms:
        if not term or term in "+-":
            raise ParseError(f"malformed term in {text!r}")
        sign = 1
        body = term
        while body and body[0] in "+-":
            if body[0] == "-":
                sign = -sign
            body = body[1:]
        if "*" in body:
            left, _, right = body.partition("*")
            if "*" in right or not left.isdigit() or not right.startswith("x"):
                raise ParseError(f"malformed term {term!r}")
            body = left + right
        if "x" in body:
            coeff_s, _, rest = body.partition("x")
            coeff = int(coeff_s) if coeff_s else 1
            if rest.startswith("^"):
                try:
                    power = int(rest[1:])
                except ValueError as exc:
                    raise ParseError(f"bad exponent in {term!r}") from exc
            elif rest == "":
                power = 1
            else:
                raise ParseError(f"malformed term {term!r}")
        else:
            try:
                coeff = int(body)
            except ValueError as exc:
                raise ParseError(f"malformed term {term!r}") from exc
            power = 0
        if power < 0:
            raise ParseError("negative exponents not allowed")
        coeffs[power] = coeffs.get(power, 0) + sign * coeff
    if not coeffs:
        raise ParseError(f"no terms in {text!r}")
    out = [0] * (max(coeffs) + 1)
    for k, v in coeffs.items():
        out[k] = v
    out = poly_trim([Fraction(c) for c in out])
    if poly_degree(out) < 1:
        raise ParseError("polynomial must have degree at least 1")
    return out


def parse_decimal(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad decimal literal {text!r}") from exc


# ---------------------------------------------------------------------------
# Beta
# ---------------------------------------------------------------------------

class Beta:
    """The base parameter.  Immutable value; carries cached constants.

    The isolating interval of an algebraic base only ever shrinks; refining
    it is a benign cache update, not a semantic change.
    """

    kind = "abstract"

    def __init__(self):
        self._cache = {}

    # subclass hooks -------------------------------------------------------
    def _make(self, lo, hi):
        raise NotImplementedError

    def from_fraction(self, q: Rational) -> "FieldValue":
        raise NotImplementedError

    def beta_value(self) -> "FieldValue":
        raise NotImplementedError

    # shared cached constants ------------------------------------------------
    def zero(self):
        return self.from_fraction(0)

    def one(self):
        return self.from_fraction(1)

    @property
    def inv_beta(self):
        """1/beta."""
        if "inv_beta" not in self._cache:
            self._cache["inv_beta"] = self.one() / self.beta_value()
        return self._cache["inv_beta"]

    @property
    def sup_value(self):
        """1/(beta-1), the right end of the representable interval."""
        if "sup" not in self._cache:
            bm1 = self.beta_value() - 1
            self._cache["sup"] = self.one() / bm1
        return self._cache["sup"]

    @property
    def branch_low(self):
        """1/beta: digit 1 is available from here on."""
        return self.inv_beta

    @property
    def branch_high(self):
        """1/(beta(beta-1)): digit 0 is available up to here."""
        if "branch_high" not in self._cache:
            self._cache["branch_high"] = self.sup_value / self.beta_value()
        return self._cache["branch_high"]

    def float_value(self) -> float:
        lo, hi = self.beta_value().bounds()
        while hi - lo > Fraction(1, 1 << 48):
            self._refine_once()
            lo, hi = self.beta_value().bounds()
        return float((lo + hi) / 2)

    def _refine_once(self):
        pass  # interval backend values are already points

    def describe(self) -> str:
        raise NotImplementedError


class AlgebraicBeta(Beta):
    kind = "algebraic"

    def __init__(self, minpoly: Sequence[Fraction], lo: Fraction, hi: Fraction):
        super().__init__()
        poly = poly_trim([Fraction(c) for c in minpoly])
        # remove roots at zero so that beta is invertible in the quotient ring
        while poly and poly[0] == 0:
            poly = poly[1:]
        if poly_degree(poly) < 1:
            raise ParseError("defining polynomial must have degree at least 1")
        lo, hi = Fraction(lo), Fraction(hi)
        if not (lo < hi):
            raise NoRootInIntervalError("isolating interval is empty")
        if lo < 1 or hi > 2:
            raise RootOutsideUnitRangeError(
                f"interval [{lo}, {hi}] must lie within [1, 2]")
        sf = poly_squarefree(poly)
        if poly_eval(sf, lo) == 0 or poly_eval(sf, hi) == 0:
            raise NoRootInIntervalError(
                "interval endpoints must not be roots of the polynomial")
        count = sturm_root_count(sf, lo, hi)
        if count == 0:
            raise NoRootInIntervalError(
                f"no root of {poly} in ({lo}, {hi})")
        if count > 1:
            raise NoRootInIntervalError(
                f"{count} roots of {poly} in ({lo}, {hi}); interval must isolate one")
        for boundary in (Fraction(1), Fraction(2)):
            if lo <= boundary <= hi and poly_eval(sf, boundary) == 0:
                raise RootOutsideUnitRangeError(
                    f"the isolated root is {boundary}, not inside (1, 2)")
        self.minpoly = tuple(poly)
        self._sf = tuple(sf)
        self.degree = poly_degree(poly)
        self._lo, self._hi = lo, hi
        # shrink until strictly inside (1, 2); terminates since the root is
        while self._lo < 1 or self._hi > 2 or self._lo == 1 or self._hi == 2:
            if self._lo > 1 and self._hi < 2:
                break
            self._refine_once()
        # x^degree .. x^(2*degree-2) reduced mod minpoly
        self._pow_table = self._build_pow_table()

    def _build_pow_table(self):
        d = self.degree
        lead = self.minpoly[-1]
        # x^d = -(c_0 + ... + c_{d-1} x^{d-1}) / c_d
        base = [-c / lead for c in self.minpoly[:-1]]
        table = [base]
        for _ in range(d - 2):
            prev = table[-1]
            shifted = [Fraction(0)] + list(prev)
            if len(shifted) > d:
                extra = shifted[d]
                shifted = shifted[:d]
                shifted = [a + extra * b for a, b in zip(shifted, base)]
            while len(shifted) < d:
                shifted.append(Fraction(0))
            table.append(shifted)
        return table

    def reduce(self, coeffs):
        """Reduce a coefficient list modulo the defining polynomial."""
        d = self.degree
        out = list(coeffs[:d]) + [Fraction(0)] * max(0, d - len(coeffs))
        for k in range(d, len(coeffs)):
            c = coeffs[k]
            if c == 0:
                continue
            row = self._pow_table[k - d]
            for i in range(d):
                out[i] += c * row[i]
        return tuple(out[:d])

    def _refine_once(self):
        lo, hi = self._lo, self._hi
        mid = (lo + hi) / 2
        v = poly_eval(self._sf, mid)
        if v == 0:
            # rational root hit exactly: nudge the midpoint
            mid = lo + (hi - lo) * Fraction(1, 3)
            v = poly_eval(self._sf, mid)
            if v == 0:
                mid = lo + (hi - lo) * Fraction(2, 5)
                v = poly_eval(self._sf, mid)
        vlo = poly_eval(self._sf, lo)
        if (vlo > 0) != (v > 0):
            self._hi = mid
        else:
            self._lo = mid
    def interval(self):
        return self._lo, self._hi

    def refine(self, times=1):
        for _ in range(times):
            self._refine_once()
        return self._lo, self._hi

    # value construction -----------------------------------------------------
    def _value(self, coeffs):
        return AlgebraicValue(self, self.reduce(list(coeffs)))

    def from_fraction(self, q):
        return self._value([Fraction(q)])

    def beta_value(self):
        if self.degree == 1:
            # beta is rational: -c0/c1
            return self._value([-self.minpoly[0] / self.minpoly[1]])
        coeffs = [Fraction(0), Fraction(1)]
        return self._value(coeffs)

    def sign_of(self, coeffs) -> int:
        """Exact sign of a reduced coefficient vector evaluated at beta."""
        if all(c == 0 for c in coeffs):
            return 0
        poly = poly_trim(list(coeffs))
        g = poly_gcd(poly, list(self.minpoly))
        if poly_degree(g) >= 1:
            gs = poly_squarefree(g)
            glo = poly_eval(gs, self._lo)
            ghi = poly_eval(gs, self._hi)
            if glo == 0 or ghi == 0 or (glo > 0) != (ghi > 0):
                return 0  # beta is a root of the common factor
        while True:
            vlo, vhi = poly_eval_interval(poly, self._lo, self._hi)
            if vlo > 0:
                return 1
            if vhi < 0:
                return -1
            self._refine_once()

    def describe(self):
        parts = []
        for i, c in enumerate(self.minpoly):
            if c == 0:
                continue
            parts.append(f"{c}*x^{i}" if i else f"{c}")
        return " + ".join(parts) + f" = 0 on ({self._lo}, {self._hi})"


class DecimalBeta(Beta):
    kind = "decimal"

    def __init__(self, value: Fraction, precision_bits=DEFAULT_PRECISION_BITS,
                 max_precision_bits=None):
        super().__init__()
        value = Fraction(value)
        if not (1 < value < 2):
            raise RootOutsideUnitRangeError(f"beta = {value} not in (1, 2)")
        if precision_bits < MIN_PRECISION_BITS:
            raise ParseError(
                f"working precision must be at least {MIN_PRECISION_BITS} bits")
        self.value = value
        self.precision_bits = precision_bits
        self.max_precision_bits = max_precision_bits or max(
            MAX_PRECISION_BITS, precision_bits)

    def from_fraction(self, q, prec=None):
        q = Fraction(q)
        return IntervalValue(self, q, q, prec or self.precision_bits)

    def beta_value(self):
        return self.from_fraction(self.value)

    def describe(self):
        return f"{self.value} (interval backend, {self.precision_bits} bits)"


def make_beta(spec=None, *, polynomial=None, interval=(1, 2), decimal=None,
              precision_bits=DEFAULT_PRECISION_BITS) -> Beta:
    """Build a base from a polynomial (algebraic backend) or a decimal.

    ``spec`` accepts the CLI syntax directly: ``poly:x^2-x-1``,
    ``poly:x^2-3@1,2``, ``dec:1.9``, ``dec:1.9@128``, or a bare string that
    looks like one or the other.
    """
    if spec is not None:
        s = spec.strip()
        if s.startswith("poly:"):
            body = s[5:]
            if "@" in body:
                body, _, iv = body.partition("@")
                lo_s, _, hi_s = iv.partition(",")
                interval = (Fraction(lo_s), Fraction(hi_s))
            polynomial = body
        elif s.startswith("dec:"):
            body = s[4:]
            if "@" in body:
                body, _, bits = body.partition("@")
                precision_bits = int(bits)
            decimal = body
        elif "x" in s:
            polynomial = s
        else:
            decimal = s
    if polynomial is not None and decimal is not None:
        raise ParseError("give either a polynomial or a decimal, not both")
    if polynomial is not None:
        coeffs = (parse_polynomial(polynomial)
                  if isinstance(polynomial, str) else polynomial)
        lo, hi = interval
        return AlgebraicBeta(coeffs, Fraction(lo), Fraction(hi))
    if decimal is not None:
        value = parse_decimal(decimal) if isinstance(decimal, str) else Fraction(decimal)
        return DecimalBeta(value, precision_bits)
    raise ParseError("no base specification given")


# ---------------------------------------------------------------------------
# FieldValue
# ---------------------------------------------------------------------------

class FieldValue:
    """A real number attached to a Beta.  Immutable."""

    __slots__ = ("beta",)

    def _coerce(self, other):
        if isinstance(other, FieldValue):
            if other.beta is not self.beta:
                raise MixedBaseError("operands belong to different bases")
            return other
        if isinstance(other, (int, Fraction)):
            return self.beta.from_fraction(other)
        return NotImplemented

    # arithmetic skeleton (subclasses implement _add/_sub/_mul) -------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._add(other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._sub(other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other._sub(self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._mul(other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._mul(other.inverse())

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other._mul(self.inverse())

    def __neg__(self):
        return self._neg()

    # conveniences -----------------------------------------------------------
    def times_beta(self):
        return self._mul(self.beta.beta_value())

    def over_beta(self):
        return self._mul(self.beta.inv_beta)

    def sign(self):
        """-1, 0, +1, or UNDECIDED (interval backend only)."""
        raise NotImplementedError

    def is_zero(self):
        return self.sign() == 0

    def definite_sign(self) -> int:
        s = self.sign()
        if s is UNDECIDED:
            raise UndecidedError("sign undecided at working precision")
        return s

    def bounds(self):
        """Rational (lo, hi) enclosing the value."""
        raise NotImplementedError

    def key(self):
        """Hashable exact identity, for memoization."""
        raise NotImplementedError

    def to_decimal(self, digits=12) -> str:
        raise NotImplementedError


def _round_frac_down(q: Fraction, bits: int) -> Fraction:
    scaled = q * (1 << bits)
    return Fraction(scaled.numerator // scaled.denominator, 1 << bits)


def _round_frac_up(q: Fraction, bits: int) -> Fraction:
    scaled = q * (1 << bits)
    num = -((-scaled.numerator) // scaled.denominator)
    return Fraction(num, 1 << bits)


class AlgebraicValue(FieldValue):
    __slots__ = ("coeffs",)

    def __init__(self, beta: AlgebraicBeta, coeffs):
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, *a):
        raise AttributeError("AlgebraicValue is immutable")

    def _wrap(self, coeffs):
        return AlgebraicValue(self.beta, coeffs)

    def _add(self, other):
        return self._wrap(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def _sub(self, other):
        return self._wrap(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def _neg(self):
        return self._wrap(tuple(-a for a in self.coeffs))

    def _mul(self, other):
        prod = poly_mul(list(self.coeffs), list(other.coeffs))
        if not prod:
            prod = [Fraction(0)]
        return self._wrap(self.beta.reduce(prod))

    def inverse(self):
        """Multiplicative inverse at beta via extended Euclid.

        Works directly when the value polynomial is coprime to the defining
        polynomial.  With a reducible defining polynomial, common factors not
        vanishing at beta are stripped from the modulus first.
        """
        poly = poly_trim(list(self.coeffs))
        if not poly:
            raise ZeroDivisionError("inverse of zero")
        modulus = list(self.beta.minpoly)
        while True:
            g, s = _poly_ext_gcd_first(poly, modulus)
            if poly_degree(g) == 0:
                inv = poly_scale(s, Fraction(1) / g[0])
                return self._wrap(self.beta.reduce(inv))
            gs = poly_squarefree(g)
            lo, hi = self.beta.interval()
            glo, ghi = poly_eval(gs, lo), poly_eval(gs, hi)
            if glo == 0 or ghi == 0 or (glo > 0) != (ghi > 0):
                raise ZeroDivisionError("inverse of zero (vanishes at beta)")
            # beta is not a root of g: strip it from the modulus and retry
            new_mod = modulus
            while True:
                q, r = poly_divmod(new_mod, g)
                if r:
                    break
                new_mod = q
            if poly_degree(new_mod) == poly_degree(modulus):
                raise ZeroDivisionError("cannot invert: degenerate modulus")
            modulus = new_mod

    def sign(self):
        return self.beta.sign_of(self.coeffs)

    def bounds(self):
        poly = poly_trim(list(self.coeffs))
        if not poly:
            return Fraction(0), Fraction(0)
        lo, hi = self.beta.interval()
        return poly_eval_interval(poly, lo, hi)

    def refine_bounds(self, width: Fraction):
        """Shrink the enclosing interval below ``width``; returns (lo, hi)."""
        while True:
            vlo, vhi = self.bounds()
            if vhi - vlo < width:
                return vlo, vhi
            self.beta._refine_once()

    def key(self):
        return self.coeffs

    def __repr__(self):
        return f"AlgebraicValue({list(self.coeffs)})"

    def to_decimal(self, digits=12) -> str:
        return _decimal_of_exact(self, digits)


def _poly_ext_gcd_first(a, b):
    """Return (g, s) with s*a = g mod b (g monic gcd of a and b)."""
    r0, r1 = poly_trim(list(a)), poly_trim(list(b))
    s0, s1 = [Fraction(1)], []
    while r1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(s0, poly_mul(q, s1))
    if r0:
        lead = r0[-1]
        r0 = poly_scale(r0, Fraction(1) / lead)
        s0 = poly_scale(s0, Fraction(1) / lead)
    return r0, s0


def _decimal_of_exact(value: AlgebraicValue, digits: int) -> str:
    """Correctly rounded decimal string with ``digits`` fractional digits.

    Rounds to nearest; exact ties (only possible for rational values) round
    away from zero.
    """
    if digits < 1:
        raise ValueError("digits must be at least 1")
    scale = Fraction(10) ** digits
    half = Fraction(1, 2)
    for _ in range(10000):
        lo, hi = value.bounds()
        slo = lo * scale + half
        shi = hi * scale + half
        if lo == hi and slo.denominator == 1:
            # exact tie: round away from zero
            n = int(slo) if lo >= 0 else int(slo) - 1
            return _format_scaled(n, digits)
        flo = slo.numerator // slo.denominator
        fhi = shi.numerator // shi.denominator
        if flo == fhi:
            return _format_scaled(flo, digits)
        if fhi - flo == 1:
            # the value may sit exactly on the rounding boundary fhi/scale - 1/2
            boundary = Fraction(2 * fhi - 1, 2 * 10 ** digits)
            if (value - value.beta.from_fraction(boundary)).is_zero():
                n = fhi if boundary >= 0 else flo  # ties away from zero
                return _format_scaled(n, digits)
        value.beta._refine_once()
    raise UndecidedError("decimal rendering did not converge")


def _format_scaled(n: int, digits: int) -> str:
    sign = "-" if n < 0 else ""
    n = abs(n)
    whole, frac = divmod(n, 10 ** digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def fraction_to_decimal(q: Fraction, digits: int = 40) -> str:
    """Plain decimal rendering of a rational, truncated toward zero."""
    scaled = abs(q) * 10 ** digits
    n = scaled.numerator // scaled.denominator
    return ("-" if q < 0 else "") + _format_scaled(n, digits)


class IntervalValue(FieldValue):
    __slots__ = ("lo", "hi", "prec")

    def __init__(self, beta: DecimalBeta, lo: Fraction, hi: Fraction, prec=None):
        object.__setattr__(self, "beta", beta)
        prec = prec or beta.precision_bits
        lo, hi = Fraction(lo), Fraction(hi)
        if lo.denominator.bit_length() > prec + 8:
            lo = _round_frac_down(lo, prec)
        if hi.denominator.bit_length() > prec + 8:
            hi = _round_frac_up(hi, prec)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, *a):
        raise AttributeError("IntervalValue is immutable")

    def _wrap(self, lo, hi, prec=None):
        return IntervalValue(self.beta, lo, hi, prec or self.prec)

    def _join_prec(self, other):
        return max(self.prec, other.prec)

    def _add(self, other):
        return self._wrap(self.lo + other.lo, self.hi + other.hi,
                          self._join_prec(other))

    def _sub(self, other):
        return self._wrap(self.lo - other.hi, self.hi - other.lo,
                          self._join_prec(other))

    def _neg(self):
        return self._wrap(-self.hi, -self.lo)

    def _mul(self, other):
        cands = (self.lo * other.lo, self.lo * other.hi,
                 self.hi * other.lo, self.hi * other.hi)
        return self._wrap(min(cands), max(cands), self._join_prec(other))

    def inverse(self):
        if self.lo <= 0 <= self.hi:
            if self.lo == self.hi == 0:
                raise ZeroDivisionError("inverse of zero")
            raise UndecidedError("inverse of an interval straddling zero")
        return self._wrap(1 / self.hi, 1 / self.lo)

    def sign(self):
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == 0 and self.hi == 0:
            return 0
        return UNDECIDED

    def bounds(self):
        return self.lo, self.hi

    def width(self) -> Fraction:
        return self.hi - self.lo

    def at_precision(self, prec):
        return IntervalValue(self.beta, self.lo, self.hi, prec)

    def key(self):
        return (self.lo, self.hi)

    def __repr__(self):
        return f"IntervalValue([{self.lo}, {self.hi}])"

    def to_decimal(self, digits=12) -> str:
        mid = (self.lo + self.hi) / 2
        scaled = mid * 10 ** digits + Fraction(1, 2)
        n = scaled.numerator // scaled.denominator
        return _format_scaled(n, digits)

    def width_decimal(self) -> str:
        w = self.width()
        if w == 0:
            return "0"
        return f"{float(w):.3e}"


# ---------------------------------------------------------------------------
# spec-level operation wrappers
# ---------------------------------------------------------------------------

def fv_arith(a: FieldValue, b, op: str) -> FieldValue:
    """Dispatch table matching the documented operation names."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "mul_by_beta":
        return a.times_beta()
    if op == "div_by_beta":
        return a.over_beta()
    raise ParseError(f"unknown operation {op!r}")


def fv_sign(a: FieldValue):
    return a.sign()


def fv_to_decimal(a: FieldValue, digits: int) -> str:
    return a.to_decimal(digits)


def escalating_precisions(beta: Beta):
    """Yield working precisions from the base's setting up to its cap.

    The algebraic backend decides everything exactly, so it yields once.
    """
    if isinstance(beta, DecimalBeta):
        prec = beta.precision_bits
        while True:
            yield prec
            if prec >= beta.max_precision_bits:
                return
            prec = min(prec * 2, beta.max_precision_bits)
    else:
        yield None


def value_at_precision(x: FieldValue, prec):
    if prec is None or not isinstance(x, IntervalValue):
        return x
    return x.at_precision(prec)
