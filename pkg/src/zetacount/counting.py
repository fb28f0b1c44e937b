"""Exact solution counting for polynomial congruences f(x) = 0 mod p^i.

Two independent counters are provided for cross-validation:

* `count_naive` enumerates all of (Z/p^i Z)^n and is the reference oracle.
* `count_lifting` walks the Hensel lifting tree: a node is a solution mod
  p^i and its children are the lifts x + p^i*u solving the congruence mod
  p^(i+1).  Nodes whose gradient is a unit mod p are short-circuited, since
  such a solution lifts in exactly p^(n-1) ways at every further level.

The lifting walker keys each node by the integer polynomial
h(y) = f(x + p^i y) / p^i reduced mod p^(remaining depth), which determines
the whole subtree.  Distinct solutions sharing that state are counted once
(the tree of a singular congruence is massively self-similar), and a state
whose nonlinear coefficients have all vanished at the working precision is
counted in closed form.  Results are bit-for-bit those of the plain tree.
"""

from __future__ import annotations

import itertools
import random
import re
import sys
from dataclasses import dataclass, field
from math import comb

from .errors import BudgetExceededError, InputSyntaxError, PreconditionError

DEFAULT_EVAL_BUDGET = 10**8
DEFAULT_NODE_BUDGET = 10**7

_SMALL_PRIMES = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67,
    71, 73, 79, 83, 89, 97,
)

# Below this bound the witness set {2,3,...,37} makes Miller-Rabin exact.
_DETERMINISTIC_MR_BOUND = 3_317_044_064_679_887_385_961_981


def is_probable_prime(m: int) -> bool:
    """Miller-Rabin, deterministic below 3.3e24, 25 extra rounds above."""
    if m < 2:
        return False
    for q in _SMALL_PRIMES:
        if m == q:
            return True
        if m % q == 0:
            return False
    d, s = m - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = list(_SMALL_PRIMES[:12])
    if m >= _DETERMINISTIC_MR_BOUND:
        rng = random.Random(m)  # deterministic per input
        bases += [rng.randrange(2, m - 1) for _ in range(25)]
    for a in bases:
        x = pow(a, d, m)
        if x in (1, m - 1):
            continue
        for _ in range(s - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# Multivariate integer polynomials
# ---------------------------------------------------------------------------

def _eval_terms(terms, point, modulus) -> int:
    acc = 0
    for exps, c in terms.items():
        v = c
        for x, e in zip(point, exps):
            if e:
                v *= pow(x, e, modulus)
        acc += v
    return acc % modulus


class LatticePolynomial:
    """Polynomial over Z in n variables, stored as exponent-vector -> coeff."""

    __slots__ = ("n", "_terms", "_key")

    def __init__(self, variable_count: int, terms):
        if not isinstance(variable_count, int) or variable_count < 1:
            raise InputSyntaxError("variable count must be a positive integer")
        cleaned: dict[tuple[int, ...], int] = {}
        for exps, c in dict(terms).items():
            exps = tuple(exps)
            if len(exps) != variable_count or any(
                not isinstance(e, int) or e < 0 for e in exps
            ):
                raise InputSyntaxError(f"bad exponent vector {exps} for n={variable_count}")
            c = int(c)
            if c:
                cleaned[exps] = cleaned.get(exps, 0) + c
        cleaned = {e: c for e, c in cleaned.items() if c}
        if not cleaned:
            raise InputSyntaxError("the zero polynomial is not accepted")
        self.n = variable_count
        self._terms = cleaned
        self._key = tuple(sorted(cleaned.items()))

    @property
    def terms(self) -> dict[tuple[int, ...], int]:
        return dict(self._terms)

    @property
    def degree(self) -> int:
        return max(sum(e) for e in self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LatticePolynomial):
            return NotImplemented
        return self.n == other.n and self._key == other._key

    def __hash__(self):
        return hash((self.n, self._key))

    def eval_mod(self, point, modulus: int) -> int:
        """f(point) mod modulus."""
        return _eval_terms(self._terms, point, modulus)

    def gradient_terms(self) -> tuple[dict, ...]:
        """Term maps of the formal partial derivatives (may be empty)."""
        grads = []
        for j in range(self.n):
            d: dict[tuple[int, ...], int] = {}
            for exps, c in self._terms.items():
                if exps[j]:
                    e2 = exps[:j] + (exps[j] - 1,) + exps[j + 1:]
                    d[e2] = d.get(e2, 0) + c * exps[j]
            grads.append({e: c for e, c in d.items() if c})
        return tuple(grads)

    def gradient_mod(self, point, modulus: int) -> tuple[int, ...]:
        return tuple(_eval_terms(g, point, modulus) for g in self.gradient_terms())

    # -- text / JSON forms ---------------------------------------------------

    @classmethod
    def parse(cls, text: str, variable_count: int | None = None) -> "LatticePolynomial":
        return parse_lattice_polynomial(text, variable_count)

    def variable_names(self) -> tuple[str, ...]:
        if self.n <= 3:
            return ("x", "y", "z")[: self.n]
        return tuple(f"x{j + 1}" for j in range(self.n))

    def to_text(self) -> str:
        names = self.variable_names()
        parts = []
        for exps, c in sorted(self._terms.items(), key=lambda kv: (-sum(kv[0]), kv[0])):
            factors = []
            for name, e in zip(names, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def to_json(self) -> dict:
        return {
            "vars": self.n,
            "terms": [
                {"coeff": str(c), "exps": list(e)} for e, c in self._key
            ],
        }

    @classmethod
    def from_json(cls, obj) -> "LatticePolynomial":
        try:
            n = obj["vars"]
            terms = {tuple(t["exps"]): int(str(t["coeff"])) for t in obj["terms"]}
        except (KeyError, TypeError, ValueError) as exc:
            raise InputSyntaxError(f"bad polynomial JSON: {exc}") from exc
        return cls(n, terms)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"LatticePolynomial({self.to_text()!r}, n={self.n})"


_TOKEN_RE = re.compile(r"\s*(\d+|[A-Za-z]\d*|[\^*+\-]|\S)")
_NAMED_VARS = {"x": 1, "y": 2, "z": 3}


def _tokenize(text: str) -> list[str]:
    tokens, pos = [], 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            break
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


def _var_index(token: str) -> int:
    head, digits = token[0], token[1:]
    if head == "x" and digits:
        idx = int(digits)
        if idx < 1:
            raise InputSyntaxError(f"variable index must be >= 1: {token!r}")
        return idx
    if not digits and head in _NAMED_VARS:
        return _NAMED_VARS[head]
    raise InputSyntaxError(f"unknown variable {token!r} (use x1..xn or x, y, z)")


def parse_lattice_polynomial(text: str, variable_count: int | None = None) -> LatticePolynomial:
    """Parse "y^2 - x^3" style text: sums of c*x1^a1*...*xn^an terms.

    The '*' between factors and '^1' exponents are optional; variables are
    x1..xn, or x, y, z for n <= 3.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise InputSyntaxError("empty polynomial")
    terms: dict[tuple[int, ...], int] = {}
    max_var = 0
    pos = 0

    def parse_term(pos: int) -> tuple[int, dict[int, int], int]:
        coeff, exps = 1, {}
        saw_factor = False
        expect_factor = True
        while pos < len(tokens):
            tok = tokens[pos]
            if tok in "+-" and not expect_factor:
                break
            if tok == "*":
                if expect_factor:
                    raise InputSyntaxError("misplaced '*'")
                expect_factor = True
                pos += 1
                continue
            if tok.isdigit():
                coeff *= int(tok)
                pos += 1
            elif tok[0].isalpha():
                idx = _var_index(tok)
                power = 1
                pos += 1
                if pos < len(tokens) and tokens[pos] == "^":
                    pos += 1
                    if pos >= len(tokens) or not tokens[pos].isdigit():
                        raise InputSyntaxError("'^' must be followed by a nonnegative integer")
                    power = int(tokens[pos])
                    pos += 1
                exps[idx] = exps.get(idx, 0) + power
            else:
                raise InputSyntaxError(f"unexpected token {tok!r}")
            saw_factor = True
            expect_factor = False
        if not saw_factor:
            raise InputSyntaxError("empty term")
        exps = {k: v for k, v in exps.items() if v}  # drop ^0 factors
        return coeff, exps, pos

    first = True
    while pos < len(tokens):
        sign = 1
        if tokens[pos] in "+-":
            if tokens[pos] == "-":
                sign = -1
            pos += 1
        elif not first:
            raise InputSyntaxError(f"expected '+' or '-' before {tokens[pos]!r}")
        coeff, exps, pos = parse_term(pos)
        if exps:
            max_var = max(max_var, max(exps))
        key_vars = exps
        terms.setdefault(frozenset(key_vars.items()), 0)
        terms[frozenset(key_vars.items())] += sign * coeff
        first = False

    n = variable_count if variable_count is not None else max(max_var, 1)
    if max_var > n:
        raise InputSyntaxError(f"variable x{max_var} exceeds declared count n={n}")
    dense = {}
    for key, c in terms.items():
        exps = [0] * n
        for idx, e in key:
            exps[idx - 1] = e
        t = tuple(exps)
        dense[t] = dense.get(t, 0) + c
    return LatticePolynomial(n, dense)


# ---------------------------------------------------------------------------
# Problem instances and count tables
# ---------------------------------------------------------------------------

class ProblemInstance:
    """A congruence-counting problem: integer polynomial f and a prime p."""

    __slots__ = ("f", "p")

    def __init__(self, f: LatticePolynomial, p: int):
        if not isinstance(p, int) or not is_probable_prime(p):
            raise PreconditionError(f"p = {p} is not prime")
        self.f = f
        self.p = p

    @property
    def n(self) -> int:
        return self.f.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProblemInstance):
            return NotImplemented
        return self.f == other.f and self.p == other.p

    def __hash__(self):
        return hash((self.f, self.p))

    def __repr__(self) -> str:
        return f"ProblemInstance({self.f.to_text()!r}, p={self.p})"


@dataclass(frozen=True)
class CountTable:
    """Exact counts M_0..M_D of solutions of f = 0 mod p^i in (Z/p^i Z)^n."""

    p: int
    n: int
    counts: tuple[int, ...]
    instance: ProblemInstance | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if not self.counts or self.counts[0] != 1:
            raise PreconditionError("count table must start with M_0 = 1")
        cap = self.p**self.n
        for i in range(len(self.counts) - 1):
            if self.counts[i + 1] < 0 or self.counts[i + 1] > cap * self.counts[i]:
                raise PreconditionError(
                    f"projection bound violated: M_{i + 1} > p^n * M_{i}"
                )

    @property
    def max_index(self) -> int:
        return len(self.counts) - 1

    def __getitem__(self, i: int) -> int:
        return self.counts[i]

    def __len__(self) -> int:
        return len(self.counts)

    def to_json(self) -> dict:
        return {"p": str(self.p), "n": self.n, "counts": [str(c) for c in self.counts]}

    @classmethod
    def from_json(cls, obj) -> "CountTable":
        try:
            return cls(int(str(obj["p"])), int(obj["n"]),
                       tuple(int(str(c)) for c in obj["counts"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputSyntaxError(f"bad count table JSON: {exc}") from exc


# ---------------------------------------------------------------------------
# Counters
# ---------------------------------------------------------------------------

def count_naive(instance: ProblemInstance, i: int,
                eval_budget: int = DEFAULT_EVAL_BUDGET) -> int:
    """Count solutions mod p^i by exhaustive enumeration (the oracle)."""
    if i < 0:
        raise PreconditionError("level i must be nonnegative")
    if i == 0:
        return 1
    p, n = instance.p, instance.n
    if p ** (i * n) > eval_budget:
        raise BudgetExceededError(
            f"naive enumeration needs p^(i*n) = {p}^{i * n} evaluations, "
            f"budget is {eval_budget}"
        )
    m = p**i
    terms = instance.f.terms
    count = 0
    for point in itertools.product(range(m), repeat=n):
        if _eval_terms(terms, point, m) == 0:
            count += 1
    return count


class _LiftingWalker:
    """Depth-first walk of the lifting tree with subtree-state sharing."""

    def __init__(self, p: int, n: int, depth: int, node_budget: int,
                 short_circuit: bool):
        self.p = p
        self.n = n
        self.depth = depth
        self.node_budget = node_budget
        self.short_circuit = short_circuit
        self.nodes = 0
        self.memo: dict = {}
        self.geometric = tuple(p ** ((n - 1) * j) for j in range(1, depth + 1))

    def run(self, f_terms: dict) -> list[int]:
        mod = self.p**self.depth if self.depth else self.p
        terms = {e: c % mod for e, c in f_terms.items()}
        terms = {e: c for e, c in terms.items() if c}
        counts = self._count(terms, self.depth, at_root=True)
        return [1] + list(counts)

    def _count(self, terms: dict, r: int, at_root: bool) -> tuple[int, ...]:
        """Counts of solutions of h = 0 mod p^j (y mod p^j) for j = 1..r."""
        if r == 0:
            return ()
        key = (r, tuple(sorted(terms.items())))
        if not at_root:
            hit = self.memo.get(key)
            if hit is not None:
                return hit
        self.nodes += 1
        if self.nodes > self.node_budget:
            raise BudgetExceededError(
                f"lifting tree exceeded the node budget of {self.node_budget}"
            )
        p, n = self.p, self.n
        result = None
        if not at_root and self.short_circuit:
            if any(sum(e) == 1 and c % p for e, c in terms.items()):
                # gradient is a unit mod p: Hensel gives p^(n-1) lifts per level
                result = self.geometric[:r]
            elif all(sum(e) < 2 for e in terms):
                result = self._affine_counts(terms, r)
        if result is None:
            if p**n > self.node_budget:
                raise BudgetExceededError(
                    f"expanding one node means testing p^n = {p}^{n} candidate "
                    f"children, beyond the node budget of {self.node_budget}"
                )
            counts = [0] * r
            new_mod = p ** (r - 1)
            for u in itertools.product(range(p), repeat=n):
                if _eval_terms(terms, u, p) == 0:
                    counts[0] += 1
                    if r > 1:
                        child = self._shift_scale(terms, u, new_mod)
                        for j, v in enumerate(self._count(child, r - 1, False)):
                            counts[j + 1] += v
            result = tuple(counts)
        if not at_root:
            self.memo[key] = result
        return result

    def _affine_counts(self, terms: dict, r: int) -> tuple[int, ...]:
        # c + L.y = 0 mod p^j has p^((n-1)j + v) solutions when v = val(L) < j
        # divides into c, p^(nj) when val(L) >= j and p^j | c, and 0 otherwise.
        p, n = self.p, self.n
        c0 = terms.get((0,) * n, 0)
        val = None
        for e, c in terms.items():
            if sum(e) == 1 and c:
                v = 0
                while c % p == 0:
                    c //= p
                    v += 1
                val = v if val is None else min(val, v)
        out = []
        for j in range(1, r + 1):
            if val is None or val >= j:
                out.append(p ** (n * j) if c0 % p**j == 0 else 0)
            elif c0 % p**val == 0:
                out.append(p ** ((n - 1) * j + val))
            else:
                out.append(0)
        return tuple(out)

    def _shift_scale(self, terms: dict, u: tuple, new_mod: int) -> dict:
        """State of the child node: h(u + p*y) / p, reduced mod new_mod."""
        p = self.p
        big = new_mod * p
        acc: dict[tuple[int, ...], int] = {}
        for exps, c in terms.items():
            for beta in itertools.product(*(range(e + 1) for e in exps)):
                coef = c * p ** sum(beta)
                for ej, bj, uj in zip(exps, beta, u):
                    if ej > bj:
                        coef *= comb(ej, bj) * pow(uj, ej - bj, big)
                if coef:
                    acc[beta] = (acc.get(beta, 0) + coef) % big
        out = {}
        for e, c in acc.items():
            # constant divisible by p because u solved mod p; others carry p^|beta|
            c = (c // p) % new_mod
            if c:
                out[e] = c
        return out


def count_lifting(instance: ProblemInstance, max_i: int,
                  node_budget: int = DEFAULT_NODE_BUDGET,
                  short_circuit: bool = True) -> CountTable:
    """Count M_0..M_max_i via the Hensel lifting tree.

    Results are exactly those of `count_naive` at each level; the walk is
    deterministic.  `short_circuit=False` forces full expansion of every
    node (used to validate the nonsingular short-circuit).
    """
    if max_i < 0:
        raise PreconditionError("max_i must be nonnegative")
    walker = _LiftingWalker(instance.p, instance.n, max_i, node_budget, short_circuit)
    old_limit = sys.getrecursionlimit()
    if max_i + 100 > old_limit:
        sys.setrecursionlimit(max_i + 200)
    try:
        counts = walker.run(instance.f.terms)
    finally:
        sys.setrecursionlimit(old_limit)
    return CountTable(instance.p, instance.n, tuple(counts), instance)


# ---------------------------------------------------------------------------
# Smooth case
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmoothCasePrediction:
    """Closed form M_i = M_(2k-1) * p^((n-1)(i-2k+1)) for i >= 2k-1.

    Valid whenever f has no singular point mod p^k: every solution then
    lifts in exactly p^(n-1) ways from level 2k-1 on.
    """

    p: int
    n: int
    k: int
    base_value: int

    @property
    def base_index(self) -> int:
        return 2 * self.k - 1

    @property
    def growth_exponent(self) -> int:
        return self.n - 1

    def predict(self, i: int) -> int:
        if i < self.base_index:
            raise PreconditionError(
                f"prediction only valid for i >= {self.base_index}, got {i}"
            )
        return self.base_value * self.p ** (self.growth_exponent * (i - self.base_index))

    def verify(self, table: CountTable) -> list[tuple[int, int, int, bool]]:
        """Rows (i, predicted, counted, ok) for every table index >= 2k-1."""
        rows = []
        for i in range(self.base_index, table.max_index + 1):
            pred = self.predict(i)
            rows.append((i, pred, table[i], pred == table[i]))
        return rows


def smooth_case_predict(instance: ProblemInstance, k: int, table: CountTable,
                        eval_budget: int = DEFAULT_EVAL_BUDGET) -> SmoothCasePrediction:
    """Build the smooth-case closed form after checking f has no singular
    point modulo p^k (no x with f(x) = 0 and grad f(x) = 0 mod p^k)."""
    if k < 1:
        raise PreconditionError("k must be a positive integer")
    p, n, f = instance.p, instance.n, instance.f
    m = p**k
    if m**n * (n + 1) > eval_budget:
        raise BudgetExceededError(
            f"singular-point scan needs about {m**n * (n + 1)} evaluations, "
            f"budget is {eval_budget}"
        )
    grads = f.gradient_terms()
    for point in itertools.product(range(m), repeat=n):
        if f.eval_mod(point, m) == 0 and all(
            _eval_terms(g, point, m) == 0 for g in grads
        ):
            raise PreconditionError(
                f"f has a singular point modulo {p}^{k}: x = {point}"
            )
    base_index = 2 * k - 1
    if table.max_index < base_index:
        raise PreconditionError(
            f"count table must contain M_{base_index} (have up to M_{table.max_index})"
        )
    if table.p != p:
        raise PreconditionError("count table prime differs from the instance prime")
    return SmoothCasePrediction(p=p, n=n, k=k, base_value=table[base_index])
