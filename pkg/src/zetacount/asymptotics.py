"""Closed-form solution counts from the poles of the Poincare series.

Denominator factors 1 - p^-v t^N are grouped into classes by the ratio v/N;
a class carries a = lcm of its v's, b = lcm of its N's and its multiplicity
m (the member count).  Partial-fraction decomposition over the pairwise
coprime class denominators (1 - p^-a t^b)^m, followed by the geometric
expansion of 1/(1 - p^-a t^b)^l, turns P(t) into exact residue-class
formulas: for i = e*b + d,

    M_i  =  sum over classes of  g_(k,d)(e) * p^(n*i - a_k*e),

where g_(k,d) is a polynomial in e of degree at most m_k - 1 built from
binomial coefficients.  Writing l_k = n - a_k/b_k and absorbing a power of
p into ghat = p^floor(d*a/b) * g gives the equivalent normalized form
M_i = sum_k ghat_(k, i mod b_k)(e) * p^ceil(l_k * i), which makes the growth
exponents l_k explicit: the largest l_k governs the asymptotics.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, factorial, floor, lcm

from .errors import InputSyntaxError, PreconditionError
from .ratfunc import (
    Poly,
    format_poly,
    format_rational,
    has_p_power_denominator,
    parse_rational,
    poly_gcd,
    poly_xgcd,
)
from .series import FactorSpec, PoincareSeries, factor_poly


# ---------------------------------------------------------------------------
# Pole classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PoleClass:
    """Factors sharing one ratio v/N: a = lcm(v_j), b = lcm(N_j), m = count."""

    members: tuple[int, ...]
    ratio: Fraction
    a: int
    b: int
    m: int

    def __post_init__(self):
        if Fraction(self.a, self.b) != self.ratio:
            raise PreconditionError(
                f"class invariant broken: a/b = {self.a}/{self.b} != {self.ratio}"
            )

    def denominator_poly(self, p: int) -> Poly:
        return factor_poly(p, self.a, self.b)


@dataclass(frozen=True)
class PoleClassification:
    """Partition of a FactorSpec by the ratio v/N, dominant class first."""

    classes: tuple[PoleClass, ...]
    source: FactorSpec

    def __len__(self) -> int:
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def to_json(self, n: int | None = None) -> list[dict]:
        out = []
        for c in self.classes:
            entry = {
                "ratio": format_rational(c.ratio),
                "a": c.a,
                "b": c.b,
                "m": c.m,
                "members": [list(self.source.factors[j]) for j in c.members],
            }
            if n is not None:
                entry["l"] = format_rational(n - c.ratio)
            out.append(entry)
        return out


def classify_poles(spec: FactorSpec) -> PoleClassification:
    """Group factors by v/N.  Classes are ordered by increasing a/b, i.e.
    decreasing growth exponent l = n - a/b, so the dominant class is first."""
    groups: dict[Fraction, list[int]] = {}
    for j, (nu, N) in enumerate(spec):
        groups.setdefault(Fraction(nu, N), []).append(j)
    classes = []
    for ratio in sorted(groups):
        members = tuple(groups[ratio])
        a = lcm(*(spec.factors[j][0] for j in members))
        b = lcm(*(spec.factors[j][1] for j in members))
        for j in members:
            nu, N = spec.factors[j]
            # 1 - p^-a t^b must be the (a/nu)-th power companion of the member
            if a % nu or b % N or a // nu != b // N:
                raise PreconditionError(
                    f"lcm data (a={a}, b={b}) incompatible with member ({nu}, {N})"
                )
        classes.append(PoleClass(members, ratio, a, b, len(members)))
    return PoleClassification(tuple(classes), spec)


# ---------------------------------------------------------------------------
# Common-denominator numerator and partial fractions
# ---------------------------------------------------------------------------

def common_denominator_form(ps: PoincareSeries, cls: PoleClassification) -> Poly:
    """Numerator C(t) with P(t) = C(t) / prod_k (1 - p^-a_k t^b_k)^m_k.

    C is the fitted numerator times prod_k (1 - p^-a_k t^b_k)^m_k divided by
    the original factors, an exact polynomial by the lcm divisibility.
    """
    if ps.factors is None:
        raise PreconditionError("series has no factored denominator")
    if cls.source != ps.factors:
        raise PreconditionError("classification was built from different factors")
    p = ps.p
    numerator = ps.numerator
    for c in cls.classes:
        numerator = numerator * c.denominator_poly(p) ** c.m
    quotient, remainder = divmod(numerator, ps.factors.expanded(p))
    if not remainder.is_zero:
        raise AssertionError(
            "class denominators are not divisible by the factors; "
            "this is a bug in the classification"
        )
    for coeff in quotient.coeffs:
        if not has_p_power_denominator(coeff, p):
            raise AssertionError(
                f"common-denominator numerator coefficient {coeff} left Z[1/{p}]"
            )
    return quotient


@dataclass(frozen=True)
class PartialFractionDecomposition:
    """P(t) = c0(t) + sum_k c_k(t) / (1 - p^-a_k t^b_k)^m_k, exactly.

    `nested[k][l-1]` is the digit c_(k,l) of the expansion
    c_k = sum_l c_(k,l) * (1 - p^-a_k t^b_k)^(m_k - l) with deg c_(k,l) < b_k.
    """

    p: int
    n: int
    threshold: int
    classification: PoleClassification
    polynomial_part: Poly
    class_numerators: tuple[Poly, ...]
    nested: tuple[tuple[Poly, ...], ...]

    def recombined(self):
        """Rebuild the rational function (for verification)."""
        from .ratfunc import RationalFunction

        total = RationalFunction(self.polynomial_part)
        for c, num in zip(self.classification, self.class_numerators):
            total = total + RationalFunction(num, c.denominator_poly(self.p) ** c.m)
        return total


def partial_fractions(ps: PoincareSeries, cls: PoleClassification) -> PartialFractionDecomposition:
    """Exact partial fractions over the pairwise coprime class denominators."""
    p = ps.p
    c_poly = common_denominator_form(ps, cls)
    q_polys = [c.denominator_poly(p) ** c.m for c in cls.classes]
    for (i, qi), (j, qj) in itertools.combinations(enumerate(q_polys), 2):
        if poly_gcd(cls.classes[i].denominator_poly(p),
                    cls.classes[j].denominator_poly(p)).degree != 0:
            raise AssertionError(
                f"class denominators {i} and {j} are not coprime; "
                "distinct ratios should force coprimality"
            )
    denominator = Poly.one()
    for q in q_polys:
        denominator = denominator * q
    c0, rest = divmod(c_poly, denominator)
    numerators = []
    for c, q in zip(cls.classes, q_polys):
        others = denominator // q
        g, s, _ = poly_xgcd(others, q)
        if g.degree != 0:
            raise AssertionError("cofactor and class denominator share a root")
        inverse = s * (1 / g.coefficient(0))
        numerators.append((rest * inverse) % q)
    # exact recombination is the defining property of the decomposition
    check = c0 * denominator
    for num, q in zip(numerators, q_polys):
        check = check + num * (denominator // q)
    if check != c_poly:
        raise AssertionError("partial fractions failed to recombine exactly")
    threshold = ps.ratfunc.degree
    if c0.is_zero:
        if threshold >= 0:
            raise AssertionError("deg P >= 0 but the polynomial part vanished")
    elif c0.degree != threshold:
        raise AssertionError(
            f"polynomial part degree {c0.degree} != deg P = {threshold}"
        )
    nested = []
    for c, q, num in zip(cls.classes, q_polys, numerators):
        base = c.denominator_poly(p)
        digits = []
        work = num
        for _ in range(c.m):
            work, digit = divmod(work, base)
            digits.append(digit)
        if not work.is_zero:
            raise AssertionError("nested expansion left a residue beyond m digits")
        # digits[j] multiplies base^j; c_(k,l) multiplies base^(m-l)
        per_l = tuple(digits[c.m - l] for l in range(1, c.m + 1))
        if per_l[c.m - 1].is_zero:
            raise PreconditionError(
                f"class with ratio {c.ratio} does not attain full multiplicity "
                f"{c.m}; reduce the numerator/denominator before decomposing"
            )
        rebuilt = Poly.zero()
        for l, digit in enumerate(per_l, start=1):
            rebuilt = rebuilt + digit * base ** (c.m - l)
        if rebuilt != num:
            raise AssertionError("nested digits do not rebuild the class numerator")
        nested.append(per_l)
    return PartialFractionDecomposition(
        p=p,
        n=ps.n,
        threshold=threshold,
        classification=cls,
        polynomial_part=c0,
        class_numerators=tuple(numerators),
        nested=tuple(nested),
    )


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------

def _binomial_poly(order: int) -> Poly:
    """binom(e + order - 1, order - 1) as an exact polynomial in e."""
    prod = Poly.one()
    for j in range(1, order):
        prod = prod * Poly((j, 1))
    return prod * Fraction(1, factorial(order - 1))


@dataclass(frozen=True)
class ResidueFormula:
    """Class contribution to M_(e*b + d): g(e) * p^(n*i - a*e), plus the
    normalized ghat = p^floor(d*a/b) * g used with exponent ceil(l*i)."""

    d: int
    g_coeffs: tuple[Fraction, ...]
    ghat_coeffs: tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        return len(self.g_coeffs) - 1

    def g(self, e: int) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.g_coeffs):
            acc = acc * e + c
        return acc


@dataclass(frozen=True)
class ClosedFormClass:
    a: int
    b: int
    m: int
    l: Fraction
    residues: tuple[ResidueFormula, ...]


@dataclass(frozen=True)
class ClosedForm:
    """Exact evaluator for M_i, valid for every i > threshold."""

    p: int
    n: int
    threshold: int
    classes: tuple[ClosedFormClass, ...]

    def evaluate(self, i: int) -> int:
        if i <= self.threshold:
            raise PreconditionError(
                f"closed form only asserted for i > {self.threshold}, got {i}"
            )
        if i < 0:
            raise PreconditionError("i must be nonnegative")
        total = Fraction(0)
        for cls in self.classes:
            e, d = divmod(i, cls.b)
            total += cls.residues[d].g(e) * Fraction(self.p) ** (self.n * i - cls.a * e)
        if total.denominator != 1 or total < 0:
            raise PreconditionError(
                f"closed form gave M_{i} = {total}, not a nonnegative integer; "
                "the input series does not count congruence solutions"
            )
        return int(total)

    def to_json(self) -> dict:
        return {
            "p": str(self.p),
            "n": self.n,
            "threshold": self.threshold,
            "classes": [
                {
                    "a": c.a,
                    "b": c.b,
                    "m": c.m,
                    "l": format_rational(c.l),
                    "residues": [
                        {
                            "d": r.d,
                            "g_coeffs": [format_rational(x) for x in r.g_coeffs],
                            "ghat_coeffs": [format_rational(x) for x in r.ghat_coeffs],
                        }
                        for r in c.residues
                    ],
                }
                for c in self.classes
            ],
        }

    @classmethod
    def from_json(cls, obj) -> "ClosedForm":
        try:
            classes = []
            for c in obj["classes"]:
                residues = tuple(
                    ResidueFormula(
                        d=int(r["d"]),
                        g_coeffs=tuple(parse_rational(str(x)) for x in r["g_coeffs"]),
                        ghat_coeffs=tuple(parse_rational(str(x)) for x in r["ghat_coeffs"]),
                    )
                    for r in c["residues"]
                )
                classes.append(
                    ClosedFormClass(
                        a=int(c["a"]),
                        b=int(c["b"]),
                        m=int(c["m"]),
                        l=parse_rational(str(c["l"])),
                        residues=residues,
                    )
                )
            return cls(
                p=int(str(obj["p"])),
                n=int(obj["n"]),
                threshold=int(obj["threshold"]),
                classes=tuple(classes),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputSyntaxError(f"bad closed-form JSON: {exc}") from exc


def closed_form(pfd: PartialFractionDecomposition) -> ClosedForm:
    """Expand the decomposition into residue-class polynomials g_(k,d)(e)."""
    p, n = pfd.p, pfd.n
    classes = []
    seen_l = set()
    for cls, per_l in zip(pfd.classification, pfd.nested):
        a, b, m = cls.a, cls.b, cls.m
        l = n - cls.ratio
        if l in seen_l:
            raise AssertionError("growth exponents l_k must be pairwise distinct")
        seen_l.add(l)
        residues = []
        max_deg = -1
        for d in range(b):
            g = Poly.zero()
            for order, digit in enumerate(per_l, start=1):
                coefficient = digit.coefficient(d)
                if coefficient:
                    g = g + coefficient * _binomial_poly(order)
            max_deg = max(max_deg, g.degree)
            ghat = g * Fraction(p) ** floor(Fraction(d * a, b))
            residues.append(
                ResidueFormula(d=d, g_coeffs=g.coeffs, ghat_coeffs=ghat.coeffs)
            )
        if max_deg != m - 1:
            raise AssertionError(
                f"max residue-polynomial degree {max_deg} != m - 1 = {m - 1}"
            )
        classes.append(ClosedFormClass(a=a, b=b, m=m, l=l, residues=tuple(residues)))
    return ClosedForm(p=p, n=n, threshold=pfd.threshold, classes=tuple(classes))


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DominantTerm:
    """Largest growth exponent, its pole order, and the leading coefficients."""

    l_max: Fraction
    order: int
    b: int
    residue_leads: tuple[tuple[int, Fraction], ...]  # (d, lead coeff of ghat)

    def statement(self, p: int) -> str:
        power = f"{p}^ceil({self.l_max}*i)"
        if self.order == 1:
            shape = power
        else:
            shape = f"i^{self.order - 1} * {power}"
        coeffs = ", ".join(
            f"c_{d} = {format_rational(c / Fraction(self.b) ** (self.order - 1))}"
            for d, c in self.residue_leads
        )
        return (
            f"M_i grows like c_(i mod {self.b}) * {shape} with {coeffs}"
        )


def dominant_term(cf: ClosedForm) -> DominantTerm:
    """Growth is governed by the largest l_k, at the order of its class."""
    if not cf.classes:
        raise PreconditionError("closed form has no classes")
    top = max(cf.classes, key=lambda c: c.l)
    leads = tuple(
        (r.d, r.ghat_coeffs[-1] if r.ghat_coeffs else Fraction(0))
        for r in top.residues
    )
    return DominantTerm(l_max=top.l, order=top.m, b=top.b, residue_leads=leads)


def lint_bounds(cf: ClosedForm, assume_smooth_n3: bool = False) -> list[str]:
    """Sanity lints on the growth exponents.

    Every l_k should be >= n/2; when n = 3 and the user asserts f has no
    singular point of multiplicity 2, also l_k >= 2.  Violations usually
    mean a typo in the factor list, so they are warnings, not failures.
    """
    warnings_out = []
    half_n = Fraction(cf.n, 2)
    for c in cf.classes:
        if c.l < half_n:
            warnings_out.append(
                f"class a={c.a}, b={c.b}: growth exponent l = {c.l} is below "
                f"n/2 = {half_n}; check the factor data"
            )
        if cf.n == 3 and assume_smooth_n3 and c.l < 2:
            warnings_out.append(
                f"class a={c.a}, b={c.b}: l = {c.l} < 2 contradicts the "
                "no-multiplicity-2 hypothesis for n = 3"
            )
    return warnings_out


# ---------------------------------------------------------------------------
# Text rendering
# ---------------------------------------------------------------------------

def _poly_in_e(coeffs) -> str:
    return format_poly(Poly(coeffs), var="e")


def _substitute_linear(coeffs, stride: int, offset: int) -> Poly:
    """g(stride*e + offset) as a polynomial in e."""
    result = Poly.zero()
    arg = Poly((offset, stride))
    for k, c in enumerate(coeffs):
        result = result + c * arg**k
    return result


def format_closed_form(cf: ClosedForm) -> str:
    """Render both presentations, then one combined line per residue class
    modulo lcm(b_k), in the style M_[6e+2] = 2 * p^(7e+2) - p^(6e+1)."""
    lines = [
        f"closed form at p = {cf.p}, n = {cf.n} "
        f"(valid for i > {cf.threshold})"
    ]
    for idx, c in enumerate(cf.classes, start=1):
        lines.append(
            f"class {idx}: l = {c.l} (a = {c.a}, b = {c.b}, multiplicity {c.m})"
        )
        for r in c.residues:
            lines.append(
                f"  d = {r.d}: g(e) = {_poly_in_e(r.g_coeffs)}   |   "
                f"ghat(e) = {_poly_in_e(r.ghat_coeffs)}"
            )
        lines.append(
            f"  raw term: g(e) * p^({cf.n}*i - {c.a}*e) at i = {c.b}*e + d;  "
            f"normalized: ghat(e) * p^ceil({c.l} * i)"
        )
    big_b = lcm(*(c.b for c in cf.classes))
    lines.append(f"residue-class formulas modulo {big_b}:")
    for d in range(big_b):
        terms = []
        for c in cf.classes:
            d_k = d % c.b
            stride = big_b // c.b
            offset = (d - d_k) // c.b
            poly_e = _substitute_linear(c.residues[d_k].ghat_coeffs, stride, offset)
            exp_slope = cf.n * big_b - c.a * stride
            exp_offset = ceil(c.l * d)
            exponent = f"{exp_slope}e" if exp_offset == 0 else f"{exp_slope}e+{exp_offset}"
            if poly_e.is_zero:
                continue
            if poly_e.degree == 0:
                const = poly_e.coefficient(0)
                body = f"{format_rational(abs(const))} * {cf.p}^({exponent})"
                terms.append((body, const < 0))
            else:
                terms.append((f"({_poly_in_e(poly_e.coeffs)}) * {cf.p}^({exponent})", False))
        if not terms:
            rendered = "0"
        else:
            rendered = ""
            for k, (body, negative) in enumerate(terms):
                if k == 0:
                    rendered = f"-{body}" if negative else body
                else:
                    rendered += f" - {body}" if negative else f" + {body}"
        lines.append(f"  M_[{big_b}e+{d}] = {rendered}")
    return "\n".join(lines)
