"""Exact univariate polynomial and rational-function arithmetic over Q.

Coefficients are arbitrary-precision `fractions.Fraction` values, so every
operation in this module is exact; no floating point is used anywhere.
Polynomials are dense coefficient tuples in ascending degree of the formal
variable t (degrees stay small in this problem domain, so density keeps
division and convolution simple).

Rational functions are canonicalized eagerly: numerator and denominator are
reduced by their monic gcd and then scaled so the denominator has constant
term 1.  Every denominator arising from a Poincare series is a product of
factors 1 - p^-v * t^N with constant term 1, so this normalization is always
available there; a genuine pole at t = 0 falls back to a monic denominator
and is flagged as non-canonical.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import InputSyntaxError

# Exact rational scalar type used across the package.
Rational = Fraction

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/(\d+))?$")


def parse_rational(text: str) -> Fraction:
    """Parse the exact-rational literal form "a" or "a/b" (b > 0)."""
    m = _RATIONAL_RE.match(text.strip())
    if not m:
        raise InputSyntaxError(f"not an exact rational literal: {text!r}")
    if m.group(1) == "0":
        raise InputSyntaxError(f"zero denominator in rational literal: {text!r}")
    return Fraction(text.strip())


def format_rational(value: Fraction) -> str:
    """Render a rational in the "a" / "a/b" text form used in all I/O."""
    return str(value)


def has_p_power_denominator(value: Fraction, p: int) -> bool:
    """True iff value lies in Z[1/p], i.e. its denominator is a power of p."""
    d = value.denominator
    while d % p == 0:
        d //= p
    return d == 1


def _coerce(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


class Poly:
    """Univariate polynomial over Q, dense ascending coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_coerce(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "Poly":
        return cls(())

    @classmethod
    def one(cls) -> "Poly":
        return cls((1,))

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, c=1) -> "Poly":
        if degree < 0:
            raise ValueError("monomial degree must be nonnegative")
        return cls((0,) * degree + (c,))

    # -- structure ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree, with the convention deg 0 = -1."""
        return len(self.coeffs) - 1

    def coefficient(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    @property
    def leading(self) -> Fraction:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __bool__(self) -> bool:
        return not self.is_zero

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly((other,))
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other) -> "Poly":
        other = self._as_poly(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> "Poly":
        return self + (-self._as_poly(other))

    def __rsub__(self, other) -> "Poly":
        return self._as_poly(other) + (-self)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            c = _coerce(other)
            return Poly(tuple(c * a for a in self.coeffs))
        other = self._as_poly(other)
        if self.is_zero or other.is_zero:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative polynomial power")
        result = Poly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other) -> tuple["Poly", "Poly"]:
        other = self._as_poly(other)
        if other.is_zero:
            raise ZeroDivisionError("division by zero polynomial")
        if self.degree < other.degree:
            return Poly(), self
        rem = list(self.coeffs)
        db = other.degree
        inv_lead = 1 / other.leading
        quot = [Fraction(0)] * (len(rem) - db)
        for k in range(len(rem) - db - 1, -1, -1):
            c = rem[k + db] * inv_lead
            if c:
                quot[k] = c
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return Poly(quot), Poly(rem[:db])

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    def divides(self, other: "Poly") -> bool:
        """True iff self is nonzero and divides other exactly."""
        if self.is_zero:
            return False
        return (other % self).is_zero

    def monic(self) -> "Poly":
        if self.is_zero:
            return self
        return self * (1 / self.leading)

    def shift(self, k: int) -> "Poly":
        """Multiply by t^k (k >= 0) or divide exactly by t^-k (k < 0)."""
        if k >= 0:
            if self.is_zero:
                return self
            return Poly((Fraction(0),) * k + self.coeffs)
        if any(c for c in self.coeffs[:-k]):
            raise ValueError("shift would truncate nonzero low-order coefficients")
        return Poly(self.coeffs[-k:])

    def __call__(self, x) -> Fraction:
        x = _coerce(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # -- misc ---------------------------------------------------------------

    @staticmethod
    def _as_poly(other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly((other,))
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r})"


def format_poly(poly: Poly, var: str = "t") -> str:
    """Human-readable form like "1 + 1/8*t^2 - 1/64*t^6"."""
    if poly.is_zero:
        return "0"
    parts = []
    for k, c in enumerate(poly.coeffs):
        if not c:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            head = "" if mag == 1 else f"{mag}*"
            body = f"{head}{var}" if k == 1 else f"{head}{var}^{k}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor; an error when both inputs are zero."""
    if a.is_zero and b.is_zero:
        raise ValueError("gcd(0, 0) is undefined")
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Extended Euclid: returns (g, s, u) with s*a + u*b = g, g monic."""
    r0, r1 = a, b
    s0, s1 = Poly.one(), Poly.zero()
    u0, u1 = Poly.zero(), Poly.one()
    while not r1.is_zero:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        u0, u1 = u1, u0 - q * u1
    if r0.is_zero:
        raise ValueError("xgcd(0, 0) is undefined")
    scale = 1 / r0.leading
    return r0 * scale, s0 * scale, u0 * scale


class RationalFunction:
    """Quotient of two polynomials over Q, canonicalized at construction.

    Canonical form: numerator and denominator coprime, denominator constant
    term 1.  When the reduced denominator vanishes at t = 0 (a pole at the
    origin, which never occurs for Poincare series) the denominator is made
    monic instead and `canonical` is False.
    """

    __slots__ = ("numerator", "denominator", "canonical")

    def __init__(self, numerator, denominator=Poly((1,))):
        num = Poly._as_poly(numerator)
        den = Poly._as_poly(denominator)
        if den.is_zero:
            raise ZeroDivisionError("zero denominator polynomial")
        if num.is_zero:
            num, den = Poly.zero(), Poly.one()
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
            c0 = den.coefficient(0)
            scale = 1 / c0 if c0 else 1 / den.leading
            num, den = num * scale, den * scale
        self.numerator = num
        self.denominator = den
        self.canonical = den.coefficient(0) == 1

    @property
    def degree(self) -> int:
        """deg numerator - deg denominator (the Theorem's deg of P)."""
        return self.numerator.degree - self.denominator.degree

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Poly)):
            other = RationalFunction(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return (self.numerator, self.denominator) == (other.numerator, other.denominator)

    def __hash__(self):
        return hash((self.numerator, self.denominator))

    def _as_ratfunc(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        return RationalFunction(other)

    def __add__(self, other) -> "RationalFunction":
        other = self._as_ratfunc(other)
        return RationalFunction(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.numerator, self.denominator)

    def __sub__(self, other) -> "RationalFunction":
        return self + (-self._as_ratfunc(other))

    def __rsub__(self, other) -> "RationalFunction":
        return self._as_ratfunc(other) + (-self)

    def __mul__(self, other) -> "RationalFunction":
        other = self._as_ratfunc(other)
        return RationalFunction(
            self.numerator * other.numerator, self.denominator * other.denominator
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalFunction":
        other = self._as_ratfunc(other)
        if other.numerator.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(
            self.numerator * other.denominator, self.denominator * other.numerator
        )

    def __call__(self, x) -> Fraction:
        dv = self.denominator(x)
        if dv == 0:
            raise ZeroDivisionError(f"evaluation at a pole: t = {x}")
        return self.numerator(x) / dv

    def __str__(self) -> str:
        return f"({format_poly(self.numerator)}) / ({format_poly(self.denominator)})"

    def __repr__(self) -> str:
        return f"RationalFunction({format_poly(self.numerator)!r}, {format_poly(self.denominator)!r})"
