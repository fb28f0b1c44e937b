"""Bundled example congruences with exactly known Poincare series.

Both examples admit a Poincare series that is rational in t with
coefficients that are rational expressions in p, so each fixture can
produce the exact series at any prime.  The expected partial-fraction
numerators and the published residue-class count formulas are included so
the whole pipeline can be verified end to end.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .counting import LatticePolynomial
from .errors import InputSyntaxError
from .ratfunc import Poly
from .series import FactorSpec, PoincareSeries


@dataclass(frozen=True)
class Fixture:
    """A congruence with exactly known series and count formulas."""

    name: str
    description: str
    f: LatticePolynomial
    factors: FactorSpec
    default_primes: tuple[int, ...]
    numerator_template: Callable[[int], Poly]
    class_numerators_template: Callable[[int], tuple[Poly, ...]]
    expected_count: Callable[[int, int], int | None]

    def poincare(self, p: int) -> PoincareSeries:
        """The exact Poincare series of f at the prime p."""
        return PoincareSeries.from_numerator(p, self.f.n, self.numerator_template(p),
                                             self.factors)

    def expected_class_numerators(self, p: int) -> tuple[Poly, ...]:
        """Partial-fraction numerators (dominant class first) at p."""
        return self.class_numerators_template(p)


# ---------------------------------------------------------------------------
# Example 1: the cuspidal cubic y^2 - x^3
# ---------------------------------------------------------------------------

def _cusp_numerator(p: int) -> Poly:
    # (p^6 + (p^4 - p^3) t^2 - t^6) / p^6, constant term normalized to 1
    coeffs = [Fraction(0)] * 7
    coeffs[0] = Fraction(1)
    coeffs[2] = Fraction(p - 1, p**3)
    coeffs[6] = Fraction(-1, p**6)
    return Poly(coeffs)


def _cusp_class_numerators(p: int) -> tuple[Poly, ...]:
    q = Fraction(1, p)
    first = Poly([
        (p + 1) * q,          # t^0
        (p + 1) * q**2,       # t^1
        2 * q**2,             # t^2
        2 * q**3,             # t^3
        2 * q**4,             # t^4
        2 * q**5,             # t^5
    ])
    second = Poly([-q])
    return (first, second)


def _cusp_expected_count(p: int, i: int) -> int:
    e, d = divmod(i, 6)
    if d == 0:
        if e == 0:
            return 1
        return (p + 1) * p ** (7 * e - 1) - p ** (6 * e - 1)
    if d == 1:
        return (p + 1) * p ** (7 * e) - p ** (6 * e)
    return 2 * p ** (7 * e + d) - p ** (6 * e + d - 1)


# ---------------------------------------------------------------------------
# Example 2: x^3 + y^5
# ---------------------------------------------------------------------------

def _x3y5_numerator(p: int) -> Poly:
    # numerator of P over (p^8 - t^15)(p - t), divided by p^9
    raw = {
        0: p**9,
        2: (p - 1) * p**6,
        3: (p - 1) * p**6,
        5: (p - 1) * p**5,
        8: (p - 1) * p**3,
        9: (p - 1) * p**3,
        12: (p - 1) * p,
        14: p - 1,
        15: -1,
    }
    return Poly(Fraction(raw.get(k, 0), p**9) for k in range(16))


def _x3y5_class_numerators(p: int) -> tuple[Poly, ...]:
    d = p**7 - 1
    first = Poly([
        Fraction(p**8 - 1, d * p),
        Fraction(p**8 - 1, d * p**2),
        Fraction(2 * p**7 - p**6 - 1, d * p**2),
        Fraction(p**7 + p**6 - p**5 - 1, d * p**2),
        Fraction(p**7 + p**6 - p**5 - 1, d * p**3),
        Fraction(p**7 + p**5 - p**4 - 1, d * p**3),
        Fraction(p**7 + p**5 - p**4 - 1, d * p**4),
        Fraction(p**7 + p**5 - p**4 - 1, d * p**5),
        Fraction(p**7 + p**4 - p**3 - 1, d * p**5),
        Fraction(p**7 + p**3 - p**2 - 1, d * p**5),
        Fraction(p**7 + p**3 - p**2 - 1, d * p**6),
        Fraction(p**7 + p**3 - p**2 - 1, d * p**7),
        Fraction(p**7 + p**2 - p - 1, d * p**7),
        Fraction(p**7 + p**2 - p - 1, d * p**8),
        Fraction(p**7 + p - 2, d * p**8),
    ])
    second = Poly([Fraction(-(p - 1), d * p)])
    return (first, second)


def _x3y5_expected_count(p: int, i: int) -> int | None:
    # published formula covers the residue class 3 mod 15 only
    if i % 15 != 3:
        return None
    e = (i - 3) // 15
    geom = sum(p ** (7 * j) for j in range(e + 1))
    return p ** (4 + 22 * e) + (p - 1) * geom * p ** (2 + 15 * e)


FIXTURES: dict[str, Fixture] = {
    "example1": Fixture(
        name="example1",
        description="cuspidal cubic y^2 - x^3; growth exponent 7/6",
        f=LatticePolynomial(2, {(0, 2): 1, (3, 0): -1}),
        factors=FactorSpec(((5, 6), (1, 1))),
        default_primes=(2, 3, 5),
        numerator_template=_cusp_numerator,
        class_numerators_template=_cusp_class_numerators,
        expected_count=_cusp_expected_count,
    ),
    "example2": Fixture(
        name="example2",
        description="x^3 + y^5; growth exponent 22/15",
        f=LatticePolynomial(2, {(3, 0): 1, (0, 5): 1}),
        factors=FactorSpec(((8, 15), (1, 1))),
        default_primes=(2, 3),
        numerator_template=_x3y5_numerator,
        class_numerators_template=_x3y5_class_numerators,
        expected_count=_x3y5_expected_count,
    ),
}


def get_fixture(name: str) -> Fixture:
    try:
        return FIXTURES[name]
    except KeyError:
        raise InputSyntaxError(
            f"unknown fixture {name!r}; available: {', '.join(sorted(FIXTURES))}"
        ) from None
