"""Exact rational algebra: multi-index combinatorics and sparse polynomials.

Everything in this module is exact.  Scalars are `fractions.Fraction`
(arbitrary-precision, always reduced, positive denominator), so every
algebraic identity downstream can be asserted with `==` instead of a
tolerance.  A polynomial is a sparse map

    exponent tuple (one int per variable)  ->  Fraction coefficient

with no stored zero coefficients.  The variable list is carried by the
polynomial itself; all polynomials living on one coordinate chart share
the same variable tuple, which keeps the dense exponent tuples small
(chart dimensions here never exceed a few tens).
"""

from __future__ import annotations

import random
import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "gen_kronecker",
    "sort_with_sign",
    "Polynomial",
    "parse_polynomial",
    "RationalSampler",
]


def sort_with_sign(indices: Sequence[int]) -> tuple[tuple[int, ...] | None, int]:
    """Sort an index tuple, returning (sorted tuple, permutation sign).

    The sign is 0 (and the tuple None) when an index repeats, which is
    exactly when the corresponding antisymmetric term vanishes.
    """
    n = len(indices)
    if len(set(indices)) != n:
        return None, 0
    inversions = 0
    for i in range(n):
        for j in range(i + 1, n):
            if indices[i] > indices[j]:
                inversions += 1
    return tuple(sorted(indices)), -1 if inversions % 2 else 1


def gen_kronecker(upper: Sequence[int], lower: Sequence[int]) -> int:
    """Generalized Kronecker delta: det of the matrix of pairwise deltas.

    Computed by permutation sign, never by literal determinant expansion:
    the value is 0 unless both tuples are permutations of the same set of
    distinct indices, in which case it is the product of the two sorting
    signs.
    """
    if len(upper) != len(lower):
        raise ValueError(f"index tuples must have equal length, got {len(upper)} and {len(lower)}")
    sorted_up, sign_up = sort_with_sign(upper)
    sorted_lo, sign_lo = sort_with_sign(lower)
    if sign_up == 0 or sign_lo == 0 or sorted_up != sorted_lo:
        return 0
    return sign_up * sign_lo


class Polynomial:
    """Sparse multivariate polynomial over the rationals.

    Immutable by convention: no method mutates `terms` after construction.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple[int, ...], Fraction] | None = None):
        self.variables: tuple[str, ...] = tuple(variables)
        clean: dict[tuple[int, ...], Fraction] = {}
        if terms:
            nvars = len(self.variables)
            for expo, coeff in terms.items():
                if len(expo) != nvars:
                    raise ValueError(f"exponent tuple {expo} has wrong length for {nvars} variables")
                c = Fraction(coeff)
                if c != 0:
                    clean[tuple(expo)] = c
        self.terms: dict[tuple[int, ...], Fraction] = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str]) -> Polynomial:
        return cls(variables)

    @classmethod
    def const(cls, variables: Sequence[str], value: Fraction | int) -> Polynomial:
        value = Fraction(value)
        if value == 0:
            return cls(variables)
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> Polynomial:
        variables = tuple(variables)
        try:
            idx = variables.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None
        expo = [0] * len(variables)
        expo[idx] = 1
        return cls(variables, {tuple(expo): Fraction(1)})

    # -- ring operations ----------------------------------------------

    def _check_same_vars(self, other: Polynomial) -> None:
        if self.variables != other.variables:
            raise ValueError(f"variable mismatch: {self.variables} vs {other.variables}")

    def __add__(self, other: Polynomial | Fraction | int) -> Polynomial:
        if not isinstance(other, Polynomial):
            other = Polynomial.const(self.variables, other)
        self._check_same_vars(other)
        out = dict(self.terms)
        for expo, coeff in other.terms.items():
            s = out.get(expo, 0) + coeff
            if s:
                out[expo] = s
            else:
                out.pop(expo, None)
        result = Polynomial.__new__(Polynomial)
        result.variables = self.variables
        result.terms = out
        return result

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        result = Polynomial.__new__(Polynomial)
        result.variables = self.variables
        result.terms = {expo: -coeff for expo, coeff in self.terms.items()}
        return result

    def __sub__(self, other: Polynomial | Fraction | int) -> Polynomial:
        if not isinstance(other, Polynomial):
            other = Polynomial.const(self.variables, other)
        return self + (-other)

    def __rsub__(self, other: Fraction | int) -> Polynomial:
        return (-self) + other

    def __mul__(self, other: Polynomial | Fraction | int) -> Polynomial:
        if not isinstance(other, Polynomial):
            c = Fraction(other)
            if c == 0:
                return Polynomial(self.variables)
            result = Polynomial.__new__(Polynomial)
            result.variables = self.variables
            result.terms = {expo: coeff * c for expo, coeff in self.terms.items()}
            return result
        self._check_same_vars(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                expo = tuple(x + y for x, y in zip(ea, eb))
                s = out.get(expo, 0) + ca * cb
                if s:
                    out[expo] = s
                else:
                    out.pop(expo, None)
        result = Polynomial.__new__(Polynomial)
        result.variables = self.variables
        result.terms = out
        return result

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> Polynomial:
        if exponent < 0:
            raise ValueError("negative powers are not polynomials")
        result = Polynomial.const(self.variables, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(self.variables, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.variables, frozenset(self.terms.items())))

    # -- calculus and evaluation ---------------------------------------

    def diff(self, name: str) -> Polynomial:
        """Exact partial derivative with respect to a named variable."""
        try:
            idx = self.variables.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None
        out: dict[tuple[int, ...], Fraction] = {}
        for expo, coeff in self.terms.items():
            e = expo[idx]
            if e == 0:
                continue
            new = list(expo)
            new[idx] = e - 1
            key = tuple(new)
            s = out.get(key, 0) + coeff * e
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return Polynomial(self.variables, out)

    def eval(self, point: Sequence[Fraction | int]) -> Fraction:
        """Exact evaluation at a rational point (one value per variable)."""
        if len(point) != len(self.variables):
            raise ValueError(f"point has length {len(point)}, expected {len(self.variables)}")
        values = [Fraction(v) for v in point]
        total = Fraction(0)
        for expo, coeff in self.terms.items():
            term = coeff
            for e, v in zip(expo, values):
                if e:
                    term *= v**e
            total += term
        return total

    def subs(self, assignment: Mapping[str, "Polynomial | Fraction | int"]) -> Polynomial:
        """Substitute polynomials (over the same variable tuple) for variables."""
        out = Polynomial(self.variables)
        rebuilt: dict[str, Polynomial] = {}
        for name, value in assignment.items():
            if name not in self.variables:
                raise KeyError(f"unknown variable {name!r}")
            rebuilt[name] = value if isinstance(value, Polynomial) else Polynomial.const(self.variables, value)
        for expo, coeff in self.terms.items():
            term = Polynomial.const(self.variables, coeff)
            for idx, e in enumerate(expo):
                if not e:
                    continue
                name = self.variables[idx]
                if name in rebuilt:
                    term = term * rebuilt[name] ** e
                else:
                    term = term * Polynomial.var(self.variables, name) ** e
            out = out + term
        return out

    def transplant(self, variables: Sequence[str], assignment: Mapping[str, "Polynomial"]) -> Polynomial:
        """Rewrite onto a new variable tuple, sending each old variable to a
        polynomial over the new variables.  Old variables missing from the
        assignment must not occur in any term."""
        variables = tuple(variables)
        out = Polynomial(variables)
        for expo, coeff in self.terms.items():
            term = Polynomial.const(variables, coeff)
            for idx, e in enumerate(expo):
                if not e:
                    continue
                name = self.variables[idx]
                if name not in assignment:
                    raise KeyError(f"variable {name!r} has no image in the new frame")
                term = term * assignment[name] ** e
            out = out + term
        return out

    # -- inspection ----------------------------------------------------

    def is_constant(self) -> bool:
        return all(not any(expo) for expo in self.terms)

    def constant_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError(f"polynomial {self} is not constant")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        return max((sum(expo) for expo in self.terms), default=0)

    def degree_in(self, name: str) -> int:
        idx = self.variables.index(name)
        return max((expo[idx] for expo in self.terms), default=0)

    def used_variables(self) -> set[str]:
        used: set[str] = set()
        for expo in self.terms:
            for idx, e in enumerate(expo):
                if e:
                    used.add(self.variables[idx])
        return used

    def coefficient_of(self, name: str, power: int = 1) -> Polynomial:
        """Coefficient polynomial of `name**power` (collecting in one variable)."""
        idx = self.variables.index(name)
        out: dict[tuple[int, ...], Fraction] = {}
        for expo, coeff in self.terms.items():
            if expo[idx] == power:
                new = list(expo)
                new[idx] = 0
                out[tuple(new)] = coeff
        return Polynomial(self.variables, out)

    # -- text form -----------------------------------------------------

    def to_text(self) -> str:
        """Canonical text form: terms sorted by exponent tuple, explicit
        rational coefficient first, `var^e` factors in variable order."""
        if not self.terms:
            return "0"
        pieces = []
        for expo in sorted(self.terms, reverse=True):
            coeff = self.terms[expo]
            factors = [str(coeff)]
            for idx, e in enumerate(expo):
                if e == 1:
                    factors.append(self.variables[idx])
                elif e > 1:
                    factors.append(f"{self.variables[idx]}^{e}")
            pieces.append(" * ".join(factors))
        return " + ".join(pieces)

    def __repr__(self) -> str:
        return f"Polynomial({self.to_text()!r})"


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^]))")


def parse_polynomial(text: str, variables: Sequence[str]) -> Polynomial:
    """Parse the text polynomial syntax: sum of terms, each term a `*`-separated
    product of rational constants `a/b` and factors `var^e`.  Unknown variable
    names are rejected."""
    variables = tuple(variables)
    tokens: list[tuple[str, str]] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ValueError(f"unexpected character {text[pos:].strip()[0]!r} in polynomial")
            break
        pos = m.end()
        for kind in ("num", "name", "op"):
            if m.group(kind) is not None:
                tokens.append((kind, m.group(kind)))
                break
    if not tokens:
        raise ValueError("empty polynomial text")

    result = Polynomial(variables)
    i = 0
    sign = 1
    # leading sign
    while i < len(tokens) and tokens[i] == ("op", "-"):
        sign = -sign
        i += 1
    while i < len(tokens):
        term = Polynomial.const(variables, sign)
        expect_factor = True
        while i < len(tokens):
            kind, value = tokens[i]
            if kind == "op" and value in "+-":
                break
            if not expect_factor:
                if kind == "op" and value == "*":
                    i += 1
                    expect_factor = True
                    continue
                raise ValueError(f"expected '*' or end of term, found {value!r}")
            if kind == "num":
                numer = int(value)
                i += 1
                if i + 1 < len(tokens) and tokens[i] == ("op", "/") and tokens[i + 1][0] == "num":
                    denom = int(tokens[i + 1][1])
                    if denom == 0:
                        raise ValueError("zero denominator")
                    i += 2
                    term = term * Fraction(numer, denom)
                else:
                    term = term * Fraction(numer)
            elif kind == "name":
                if value not in variables:
                    raise ValueError(f"unknown variable {value!r}")
                i += 1
                exponent = 1
                if i + 1 < len(tokens) and tokens[i] == ("op", "^") and tokens[i + 1][0] == "num":
                    exponent = int(tokens[i + 1][1])
                    i += 2
                term = term * Polynomial.var(variables, value) ** exponent
            else:
                raise ValueError(f"unexpected {value!r} in term")
            expect_factor = False
        if expect_factor:
            raise ValueError("dangling operator in polynomial text")
        result = result + term
        sign = 1
        consumed_separator = False
        if i < len(tokens):
            kind, value = tokens[i]
            if value == "+":
                i += 1
                consumed_separator = True
            elif value == "-":
                sign = -1
                i += 1
                consumed_separator = True
        # allow further unary minus runs
        while i < len(tokens) and tokens[i] == ("op", "-"):
            sign = -sign
            i += 1
        if consumed_separator and i >= len(tokens):
            raise ValueError("dangling operator in polynomial text")
    return result


class RationalSampler:
    """Seeded deterministic source of small rationals.

    Numerators range over [-9, 9] and denominators over {1, 2, 3}: small
    enough that exact arithmetic stays cheap, rich enough to break any
    accidental alignment.  Identical seeds reproduce identical streams.
    """

    def __init__(self, seed: int):
        self.seed = seed
        self._rng = random.Random(seed)

    def rational(self) -> Fraction:
        return Fraction(self._rng.randint(-9, 9), self._rng.choice((1, 2, 3)))

    def nonzero(self) -> Fraction:
        while True:
            value = self.rational()
            if value:
                return value

    def point(self, dim: int) -> tuple[Fraction, ...]:
        return tuple(self.rational() for _ in range(dim))

    def integer(self, low: int, high: int) -> int:
        return self._rng.randint(low, high)

    def choice(self, items: Sequence):
        return self._rng.choice(items)

    def sample(self, items: Sequence, k: int):
        return self._rng.sample(list(items), k)

    def shuffle(self, items: list) -> None:
        self._rng.shuffle(items)

    def polynomial(
        self,
        variables: Sequence[str],
        max_degree: int = 2,
        n_terms: int = 3,
        restrict_to: Iterable[str] | None = None,
    ) -> Polynomial:
        """Random sparse polynomial; exponents only on `restrict_to` if given."""
        variables = tuple(variables)
        allowed = [variables.index(v) for v in (restrict_to if restrict_to is not None else variables)]
        terms: dict[tuple[int, ...], Fraction] = {}
        for _ in range(n_terms):
            expo = [0] * len(variables)
            for _ in range(self._rng.randint(0, max_degree)):
                expo[self._rng.choice(allowed)] += 1
            key = tuple(expo)
            terms[key] = terms.get(key, Fraction(0)) + self.rational()
        return Polynomial(variables, {e: c for e, c in terms.items() if c})

    def spawn(self, tag: int) -> "RationalSampler":
        """Derived sampler with a seed mixed from this one (batch isolation)."""
        return RationalSampler((self.seed * 1000003 + tag) % (2**63))
