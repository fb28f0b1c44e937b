"""Exact closed-form counting of polynomial congruence solutions.

Given f in Z[x1..xn] and a prime p, the number M_i of solutions of
f(x) = 0 mod p^i is encoded by the rational Poincare series
P(t) = sum_i M_i (p^-n t)^i.  This package counts the M_i directly with a
Hensel lifting tree, fits P(t) from counts and a candidate denominator,
decomposes it into partial fractions, and emits exact residue-class
formulas M_i = sum_k g_k(i) p^ceil(l_k i) that it cross-validates against
the counts.
"""

from .asymptotics import (
    ClosedForm,
    DominantTerm,
    PartialFractionDecomposition,
    PoleClass,
    PoleClassification,
    classify_poles,
    closed_form,
    common_denominator_form,
    dominant_term,
    format_closed_form,
    lint_bounds,
    partial_fractions,
)
from .counting import (
    CountTable,
    LatticePolynomial,
    ProblemInstance,
    SmoothCasePrediction,
    count_lifting,
    count_naive,
    is_probable_prime,
    parse_lattice_polynomial,
    smooth_case_predict,
)
from .errors import (
    BudgetExceededError,
    InputSyntaxError,
    PreconditionError,
    ZetaCountError,
)
from .fixtures import FIXTURES, Fixture, get_fixture
from .ratfunc import (
    Poly,
    Rational,
    RationalFunction,
    format_poly,
    format_rational,
    has_p_power_denominator,
    parse_rational,
    poly_gcd,
    poly_xgcd,
)
from .series import (
    CoefficientRingWarning,
    FactorSpec,
    PoincareSeries,
    SpuriousFactorWarning,
    ValidationReport,
    counts_from_series,
    factor_poly,
    fit_numerator,
    p_from_z,
    series_coefficients,
    validate_poincare,
    z_from_p,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "ClosedForm",
    "CoefficientRingWarning",
    "CountTable",
    "DominantTerm",
    "FIXTURES",
    "FactorSpec",
    "Fixture",
    "InputSyntaxError",
    "LatticePolynomial",
    "PartialFractionDecomposition",
    "PoincareSeries",
    "PoleClass",
    "PoleClassification",
    "Poly",
    "PreconditionError",
    "ProblemInstance",
    "Rational",
    "RationalFunction",
    "SmoothCasePrediction",
    "SpuriousFactorWarning",
    "ValidationReport",
    "ZetaCountError",
    "classify_poles",
    "closed_form",
    "common_denominator_form",
    "count_lifting",
    "count_naive",
    "counts_from_series",
    "dominant_term",
    "factor_poly",
    "fit_numerator",
    "format_closed_form",
    "format_poly",
    "format_rational",
    "get_fixture",
    "has_p_power_denominator",
    "is_probable_prime",
    "lint_bounds",
    "p_from_z",
    "parse_lattice_polynomial",
    "parse_rational",
    "partial_fractions",
    "poly_gcd",
    "poly_xgcd",
    "series_coefficients",
    "smooth_case_predict",
    "validate_poincare",
    "z_from_p",
]
