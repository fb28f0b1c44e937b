"""Poincare series of a congruence and its links to count tables.

The Poincare series of f at the prime p is P(t) = sum_i M_i (p^-n t)^i, a
rational function whose denominator is a product of factors 1 - p^-v * t^N.
This module converts between the three equivalent descriptions:

* a table of counts M_0..M_D,
* the rational function P(t) with a factored denominator,
* the companion zeta-side function Z(t) = P(t) - (P(t) - 1)/t, with
  inverse P(t) = (1 - t Z(t)) / (1 - t).

`fit_numerator` recovers the numerator of P(t) from counts plus a candidate
factor list by exact convolution, with the over-determined trailing
coefficients acting as a consistency check on the proposed denominator.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

from .counting import CountTable
from .errors import InputSyntaxError, PreconditionError
from .ratfunc import (
    Poly,
    RationalFunction,
    format_rational,
    has_p_power_denominator,
    parse_rational,
)

DEFAULT_FIT_SLACK = 5


class SpuriousFactorWarning(UserWarning):
    """A supplied denominator factor divides the numerator and was removed."""


class CoefficientRingWarning(UserWarning):
    """A numerator coefficient lies outside Z[1/p]; likely a typo in the input."""


def factor_poly(p: int, nu: int, N: int) -> Poly:
    """The denominator factor 1 - p^-nu * t^N as an exact polynomial."""
    return Poly((1,) + (0,) * (N - 1) + (-Fraction(1, p**nu),))


@dataclass(frozen=True)
class FactorSpec:
    """Denominator factor data: pairs (nu, N) meaning 1 - p^-nu * t^N."""

    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "factors", tuple((int(a), int(b)) for a, b in self.factors)
        )
        if not self.factors:
            raise InputSyntaxError("factor list must be nonempty")
        for nu, N in self.factors:
            if nu < 1 or N < 1:
                raise InputSyntaxError(f"factor exponents must be >= 1, got ({nu}, {N})")

    def __len__(self) -> int:
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    @property
    def degree(self) -> int:
        """Degree of the expanded denominator, sum of the N_j."""
        return sum(N for _, N in self.factors)

    def expanded(self, p: int) -> Poly:
        prod = Poly.one()
        for nu, N in self.factors:
            prod = prod * factor_poly(p, nu, N)
        return prod

    @classmethod
    def parse(cls, text: str) -> "FactorSpec":
        """Parse the command-line form "nu,N;nu,N;..."."""
        pairs = []
        for chunk in text.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            bits = chunk.split(",")
            if len(bits) != 2:
                raise InputSyntaxError(f"bad factor {chunk!r}, expected 'nu,N'")
            try:
                pairs.append((int(bits[0]), int(bits[1])))
            except ValueError as exc:
                raise InputSyntaxError(f"bad factor {chunk!r}: {exc}") from exc
        return cls(tuple(pairs))

    def to_json(self) -> list[dict]:
        return [{"nu": nu, "N": N} for nu, N in self.factors]

    @classmethod
    def from_json(cls, obj) -> "FactorSpec":
        try:
            return cls(tuple((int(d["nu"]), int(d["N"])) for d in obj))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputSyntaxError(f"bad factor JSON: {exc}") from exc


class PoincareSeries:
    """P(t) at a fixed prime, optionally with its factored denominator."""

    __slots__ = ("p", "n", "ratfunc", "factors")

    def __init__(self, p: int, n: int, ratfunc: RationalFunction,
                 factors: FactorSpec | None = None, strict_coefficients: bool = True):
        if n < 1:
            raise InputSyntaxError("variable count must be positive")
        if not ratfunc.canonical:
            raise PreconditionError(
                "a Poincare series cannot have a pole at t = 0"
            )
        if ratfunc(0) != 1:
            raise PreconditionError(f"P(0) must be 1 (= M_0), got {ratfunc(0)}")
        if factors is not None:
            product = factors.expanded(p)
            if product != ratfunc.denominator:
                raise PreconditionError(
                    "factor list does not multiply out to the denominator; "
                    "use PoincareSeries.from_numerator for automatic reduction"
                )
            for nu, N in factors:
                if factor_poly(p, nu, N).divides(ratfunc.numerator):
                    raise PreconditionError(
                        f"numerator is divisible by the factor (nu={nu}, N={N}); "
                        "reduce the series first"
                    )
        bad = [c for c in ratfunc.numerator.coeffs if not has_p_power_denominator(c, p)]
        if bad:
            msg = (f"numerator coefficient {bad[0]} is not in Z[1/{p}] "
                   "(denominator not a power of p)")
            if strict_coefficients:
                raise PreconditionError(msg)
            warnings.warn(msg, CoefficientRingWarning, stacklevel=2)
        self.p = p
        self.n = n
        self.ratfunc = ratfunc
        self.factors = factors

    @classmethod
    def from_numerator(cls, p: int, n: int, numerator: Poly, factors: FactorSpec,
                       strict_coefficients: bool = True) -> "PoincareSeries":
        """Build B(t) / prod(1 - p^-nu t^N), dividing out any factor that
        divides B(t) (with a warning) so the reduced-numerator invariant
        holds on the result."""
        num = numerator
        kept = list(factors.factors)
        changed = True
        while changed:
            changed = False
            for idx, (nu, N) in enumerate(kept):
                fp = factor_poly(p, nu, N)
                q, r = divmod(num, fp)
                if r.is_zero:
                    warnings.warn(
                        f"numerator divisible by factor (nu={nu}, N={N}); "
                        "factor removed as spurious",
                        SpuriousFactorWarning,
                        stacklevel=2,
                    )
                    num = q
                    del kept[idx]
                    changed = True
                    break
        if kept:
            spec = FactorSpec(tuple(kept))
            rf = RationalFunction(num, spec.expanded(p))
            if rf.denominator != spec.expanded(p) or rf.numerator != num:
                raise PreconditionError(
                    "numerator shares an irreducible factor with the denominator "
                    "without being divisible by a full factor 1 - p^-nu t^N; "
                    "such series are outside the supported form"
                )
            return cls(p, n, rf, spec, strict_coefficients=strict_coefficients)
        return cls(p, n, RationalFunction(num), None,
                   strict_coefficients=strict_coefficients)

    @property
    def numerator(self) -> Poly:
        return self.ratfunc.numerator

    @property
    def denominator(self) -> Poly:
        return self.ratfunc.denominator

    def __eq__(self, other) -> bool:
        if not isinstance(other, PoincareSeries):
            return NotImplemented
        return (self.p, self.n, self.ratfunc) == (other.p, other.n, other.ratfunc)

    def __hash__(self):
        return hash((self.p, self.n, self.ratfunc))

    def series(self, upto: int) -> list[Fraction]:
        return series_coefficients(self.ratfunc, upto)

    def counts(self, upto: int) -> CountTable:
        return counts_from_series(self, upto)

    def to_json(self) -> dict:
        obj = {
            "p": str(self.p),
            "n": self.n,
            "numerator": [format_rational(c) for c in self.numerator.coeffs],
        }
        if self.factors is not None:
            obj["denominator_factors"] = self.factors.to_json()
        else:
            obj["denominator"] = [format_rational(c) for c in self.denominator.coeffs]
        return obj

    @classmethod
    def from_json(cls, obj, strict_coefficients: bool = False) -> "PoincareSeries":
        try:
            p = int(str(obj["p"]))
            n = int(obj["n"])
            num = Poly([parse_rational(str(c)) for c in obj["numerator"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputSyntaxError(f"bad Poincare series JSON: {exc}") from exc
        if "denominator_factors" in obj:
            spec = FactorSpec.from_json(obj["denominator_factors"])
            return cls.from_numerator(p, n, num, spec,
                                      strict_coefficients=strict_coefficients)
        try:
            den = Poly([parse_rational(str(c)) for c in obj["denominator"]])
        except KeyError as exc:
            raise InputSyntaxError(
                "series JSON needs 'denominator_factors' or 'denominator'"
            ) from exc
        return cls(p, n, RationalFunction(num, den), None,
                   strict_coefficients=strict_coefficients)

    def __repr__(self) -> str:
        return f"PoincareSeries(p={self.p}, n={self.n}, {self.ratfunc})"


# ---------------------------------------------------------------------------
# Series expansion and counts
# ---------------------------------------------------------------------------

def series_coefficients(r: RationalFunction, upto: int):
    """Exact Taylor coefficients c_0..c_upto of r at t = 0.

    Uses the linear recurrence induced by the denominator: with
    denominator sum d_k t^k (d_0 != 0), c_i = (num_i - sum_k d_k c_(i-k)) / d_0.
    """
    den = r.denominator
    d0 = den.coefficient(0)
    if d0 == 0:
        raise PreconditionError("denominator constant term is zero (pole at t = 0)")
    num = r.numerator
    coeffs: list[Fraction] = []
    for i in range(upto + 1):
        acc = num.coefficient(i)
        for k in range(1, min(i, den.degree) + 1):
            acc -= den.coefficient(k) * coeffs[i - k]
        coeffs.append(acc / d0)
    return coeffs


def counts_from_series(ps: PoincareSeries, upto: int) -> CountTable:
    """Recover M_i = c_i * p^(n i) from the series; integrality is enforced."""
    scale = ps.p**ps.n
    counts = []
    power = 1
    for i, c in enumerate(series_coefficients(ps.ratfunc, upto)):
        m = c * power
        if m.denominator != 1 or m < 0:
            raise PreconditionError(
                f"coefficient {i} gives M_{i} = {m}, not a nonnegative integer; "
                "the input is not the Poincare series of a congruence"
            )
        counts.append(int(m))
        power *= scale
    return CountTable(ps.p, ps.n, tuple(counts))


# ---------------------------------------------------------------------------
# P <-> Z conversions
# ---------------------------------------------------------------------------

def z_from_p(ps: PoincareSeries) -> RationalFunction:
    """Z(t) = P(t) - (P(t) - 1) / t; checks the normalization Z(1) = 1."""
    num, den = ps.numerator, ps.denominator
    # (P - 1) has numerator num - den with zero constant term, so /t is exact
    q = (num - den).shift(-1)
    z = RationalFunction(num - q, den)
    _check_z_at_one(z)
    return z


def p_from_z(z: RationalFunction, p: int, n: int) -> PoincareSeries:
    """P(t) = (1 - t Z(t)) / (1 - t); requires Z(1) = 1 so 1 - t cancels."""
    _check_z_at_one(z)
    num = z.denominator - z.numerator.shift(1)
    den = Poly((1, -1)) * z.denominator
    return PoincareSeries(p, n, RationalFunction(num, den), None,
                          strict_coefficients=False)


def _check_z_at_one(z: RationalFunction) -> None:
    if z.denominator(1) == 0:
        raise PreconditionError("Z(t) has a pole at t = 1; Z(1) = 1 is required")
    value = z(1)
    if value != 1:
        raise PreconditionError(f"Z(1) = {value}, but Z(1) = 1 is required")


# ---------------------------------------------------------------------------
# Numerator fitting
# ---------------------------------------------------------------------------

def fit_numerator(table: CountTable, spec: FactorSpec,
                  degree_bound: int | None = None,
                  slack: int = DEFAULT_FIT_SLACK) -> PoincareSeries:
    """Fit B(t) with P(t) = B(t) / prod(1 - p^-nu t^N) from exact counts.

    B is the truncated product of sum_i M_i (p^-n t)^i with the expanded
    denominator.  All coefficients of B beyond `degree_bound` that the table
    can reach must vanish; a nonzero one means the proposed factor list is
    not the true denominator (or the table is too short).
    """
    if slack < 1:
        raise PreconditionError("slack must be at least 1")
    p, n = table.p, table.n
    if degree_bound is None:
        degree_bound = spec.degree
    top = table.max_index
    if top < degree_bound + slack:
        raise PreconditionError(
            f"need counts up to M_{degree_bound + slack} to fit and verify "
            f"(degree bound {degree_bound} + slack {slack}); table stops at M_{top}"
        )
    den = spec.expanded(p)
    scale = Fraction(1, p**n)
    series = [table[i] * scale**i for i in range(top + 1)]
    conv = []
    for j in range(top + 1):
        acc = Fraction(0)
        for k in range(max(0, j - den.degree), j + 1):
            acc += series[k] * den.coefficient(j - k)
        conv.append(acc)
    bad = [j for j in range(degree_bound + 1, top + 1) if conv[j] != 0]
    if bad:
        raise PreconditionError(
            "consistency check failed: fitted numerator has nonzero coefficient "
            f"at t^{bad[0]} beyond the degree bound {degree_bound}; the counts do "
            "not have the proposed denominator (or the table is too short)"
        )
    numerator = Poly(conv[: degree_bound + 1])
    return PoincareSeries.from_numerator(p, n, numerator, spec,
                                         strict_coefficients=True)


# ---------------------------------------------------------------------------
# Cross-validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValidationRow:
    index: int
    predicted: int | None
    counted: int
    ok: bool
    note: str = ""


@dataclass(frozen=True)
class ValidationReport:
    rows: tuple[ValidationRow, ...]

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.rows)

    def render(self) -> str:
        lines = ["  i  predicted            counted              verdict"]
        for r in self.rows:
            pred = "-" if r.predicted is None else str(r.predicted)
            verdict = "ok" if r.ok else "MISMATCH"
            note = f"  ({r.note})" if r.note else ""
            lines.append(f"{r.index:>3}  {pred:<20} {r.counted:<20} {verdict}{note}")
        lines.append(f"result: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "rows": [
                {
                    "i": r.index,
                    "predicted": None if r.predicted is None else str(r.predicted),
                    "counted": str(r.counted),
                    "ok": r.ok,
                    "note": r.note,
                }
                for r in self.rows
            ],
        }


def validate_poincare(ps: PoincareSeries, table: CountTable) -> ValidationReport:
    """Compare the counts encoded by P(t) against a counted table, per index."""
    if ps.p != table.p:
        raise PreconditionError(
            f"prime mismatch: series has p = {ps.p}, table has p = {table.p}"
        )
    if ps.n != table.n:
        raise PreconditionError(
            f"dimension mismatch: series has n = {ps.n}, table has n = {table.n}"
        )
    scale = ps.p**ps.n
    coeffs = series_coefficients(ps.ratfunc, table.max_index)
    rows = []
    power = 1
    for i in range(table.max_index + 1):
        m = coeffs[i] * power
        power *= scale
        if m.denominator != 1:
            rows.append(ValidationRow(i, None, table[i], False,
                                      f"predicted value {m} is not an integer"))
        else:
            rows.append(ValidationRow(i, int(m), table[i], int(m) == table[i]))
    return ValidationReport(tuple(rows))
