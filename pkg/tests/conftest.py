"""Shared helpers for the test suite."""

import random
import warnings
from fractions import Fraction

import pytest

from zetacount import (
    FactorSpec,
    LatticePolynomial,
    PoincareSeries,
    Poly,
    PreconditionError,
    get_fixture,
)


@pytest.fixture
def example1():
    return get_fixture("example1")


@pytest.fixture
def example2():
    return get_fixture("example2")


def random_sparse_poly(rng: random.Random, max_vars: int = 3,
                       max_degree: int = 5) -> LatticePolynomial:
    """Random sparse polynomial with n <= max_vars, small degree, coeffs in [-9, 9]."""
    n = rng.randint(1, max_vars)
    while True:
        terms = {}
        for _ in range(rng.randint(1, 4)):
            exps = tuple(rng.randint(0, max_degree) for _ in range(n))
            if sum(exps) > max_degree:
                exps = tuple(e % 2 for e in exps)
            c = rng.randint(-9, 9)
            if c:
                terms[exps] = terms.get(exps, 0) + c
        terms = {e: c for e, c in terms.items() if c}
        if terms:
            return LatticePolynomial(n, terms)


def random_poincare_series(rng: random.Random, p: int,
                           n: int = 2) -> PoincareSeries | None:
    """Random series with a factored denominator (<= 3 pole classes).

    Returns None when the draw lands outside the supported form (numerator
    sharing a partial factor), so callers can redraw.
    """
    ratios = set()
    factors = []
    for _ in range(rng.randint(1, 3)):
        while True:
            nu, N = rng.randint(1, 6), rng.randint(1, 4)
            if Fraction(nu, N) not in ratios:
                ratios.add(Fraction(nu, N))
                break
        factors.append((nu, N))
        if rng.random() < 0.3:
            scale = rng.randint(2, 3)
            factors.append((nu * scale, N * scale))
    spec = FactorSpec(tuple(factors))
    coeffs = [Fraction(1)]
    for _ in range(max(spec.degree - 1, 1)):
        coeffs.append(Fraction(rng.randint(-9, 9), p ** rng.randint(0, 3)))
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return PoincareSeries.from_numerator(p, n, Poly(coeffs), spec)
    except PreconditionError:
        return None


def draw_poincare_series(rng: random.Random, p: int, n: int = 2) -> PoincareSeries:
    for _ in range(200):
        ps = random_poincare_series(rng, p, n)
        if ps is not None:
            return ps
    raise AssertionError("could not draw a valid random series in 200 attempts")
