"""
Exact Cyclotomic Arithmetic

Elements of Q(ζ_n) stored on the Zumbroich basis at their minimal conductor.
Because the stored form is canonical, equality of field elements is plain
structural equality and the dataclass hash is usable as a dictionary key.

All coefficients are `fractions.Fraction`; there is no floating point here.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Any, Iterable, Mapping, Optional, Union

from sympy import factorint, mobius, totient

from .errors import (
    InvalidArgumentError,
    InvalidAutomorphismError,
    ParseError,
)

Number = Union[int, Fraction]

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+)\s*)?$")


@lru_cache(maxsize=None)
def _prime_powers(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(sorted((int(p), int(e)) for p, e in factorint(n).items()))


@lru_cache(maxsize=None)
def phi(n: int) -> int:
    """Euler totient."""
    return int(totient(n))


@lru_cache(maxsize=None)
def ramanujan_sum(m: int, e: int) -> int:
    """Tr_{Q(ζ_m)/Q}(ζ_m^e), the Ramanujan sum c_m(e)."""
    g = gcd(m, e % m) if e % m else m
    return int(mobius(m // g)) * phi(m) // phi(m // g)


def _reduce_at(n: int, terms: Mapping[int, Fraction]) -> dict[int, Fraction]:
    """Rewrite Σ c_k ζ_n^k on the Zumbroich basis of Q(ζ_n)."""
    current = {k % n: c for k, c in terms.items() if c}
    for p, nu in _prime_powers(n):
        q = p**nu
        inverse = pow(n // q, -1, q)
        reduced: dict[int, Fraction] = defaultdict(Fraction)
        for k, c in current.items():
            component = (k * inverse) % q
            if p == 2:
                if component < q // 2:
                    reduced[k] += c
                else:
                    reduced[(k + n // 2) % n] -= c
            elif component >= q // p:
                reduced[k] += c
            else:
                step = n // p
                for b in range(1, p):
                    reduced[(k + b * step) % n] -= c
        current = {k: c for k, c in reduced.items() if c}
    return current


def _minimize(n: int, terms: dict[int, Fraction]) -> tuple[int, dict[int, Fraction]]:
    """Descend from the Zumbroich form at n to the minimal conductor."""
    while n > 1 and terms:
        for p, nu in _prime_powers(n):
            if p == 2 and nu == 2:
                if all(k % 4 == 0 for k in terms):
                    terms = {k // 4: c for k, c in terms.items()}
                    n //= 4
                    break
            elif nu >= 2:
                if all(k % p == 0 for k in terms):
                    terms = {k // p: c for k, c in terms.items()}
                    n //= p
                    break
            elif p != 2:
                m = n // p
                cosets: dict[int, list[Fraction]] = defaultdict(list)
                for k, c in terms.items():
                    cosets[k % m].append(c)
                if all(len(cs) == p - 1 and len(set(cs)) == 1 for cs in cosets.values()):
                    inverse = pow(p, -1, m) if m > 1 else 0
                    terms = {(r * inverse) % m: -cs[0] for r, cs in cosets.items()}
                    n = m
                    break
        else:
            break
    if not terms:
        return 1, {}
    return n, terms


def _canonical(n: int, terms: Mapping[int, Number]) -> "Cyclotomic":
    accumulated: dict[int, Fraction] = defaultdict(Fraction)
    for k, c in terms.items():
        accumulated[k % n] += Fraction(c)
    current = {k: c for k, c in accumulated.items() if c}
    if not current:
        return ZERO
    if n % 4 == 2:
        # ζ_{2m}^k = (-1)^k ζ_m^{k(m+1)/2} for odd m
        m = n // 2
        halved: dict[int, Fraction] = defaultdict(Fraction)
        for k, c in current.items():
            halved[(k * ((m + 1) // 2)) % m] += -c if k % 2 else c
        n, current = m, {k: c for k, c in halved.items() if c}
    n, current = _minimize(n, _reduce_at(n, current))
    return Cyclotomic(n, tuple(sorted(current.items())))


@dataclass(frozen=True, slots=True)
class Cyclotomic:
    """Σ c_k ζ_conductor^k in canonical form; build with the module constructors."""

    conductor: int
    coeffs: tuple[tuple[int, Fraction], ...]

    # Arithmetic

    def _lift(self, m: int) -> dict[int, Fraction]:
        scale = m // self.conductor
        return {k * scale: c for k, c in self.coeffs}

    def __add__(self, other: Any) -> "Cyclotomic":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        m = lcm(self.conductor, other.conductor)
        terms: dict[int, Fraction] = defaultdict(Fraction, self._lift(m))
        for k, c in other._lift(m).items():
            terms[k] += c
        return _canonical(m, terms)

    __radd__ = __add__

    def __neg__(self) -> "Cyclotomic":
        return Cyclotomic(self.conductor, tuple((k, -c) for k, c in self.coeffs))

    def __sub__(self, other: Any) -> "Cyclotomic":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> "Cyclotomic":
        return (-self) + other

    def __mul__(self, other: Any) -> "Cyclotomic":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                return ZERO
            return Cyclotomic(self.conductor, tuple((k, c * other) for k, c in self.coeffs))
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        m = lcm(self.conductor, other.conductor)
        left, right = self._lift(m), other._lift(m)
        terms: dict[int, Fraction] = defaultdict(Fraction)
        for k1, c1 in left.items():
            for k2, c2 in right.items():
                terms[(k1 + k2) % m] += c1 * c2
        return _canonical(m, terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Cyclotomic":
        if exponent < 0:
            raise InvalidArgumentError("negative powers are not supported")
        result, base = ONE, self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    # Queries

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_rational(self) -> bool:
        return self.conductor == 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __str__(self) -> str:
        if self.conductor == 1:
            return str(to_rational(self))
        parts = []
        for k, c in self.coeffs:
            root = "1" if k == 0 else f"E({self.conductor})" + (f"^{k}" if k > 1 else "")
            if c == 1:
                parts.append(f"+{root}")
            elif c == -1:
                parts.append(f"-{root}")
            else:
                sign = "+" if c > 0 else "-"
                parts.append(f"{sign}{abs(c)}*{root}")
        text = "".join(parts)
        return text[1:] if text.startswith("+") else text


def _coerce(value: Any) -> Any:
    if isinstance(value, Cyclotomic):
        return value
    if isinstance(value, bool):
        return NotImplemented
    if isinstance(value, (int, Fraction)):
        return rational(value)
    return NotImplemented


# Constructors


def rational(value: Number) -> Cyclotomic:
    """The rational number `value` as a field element of conductor 1."""
    value = Fraction(value)
    if value == 0:
        return ZERO
    return Cyclotomic(1, ((0, value),))


def root_of_unity(n: int, k: int = 1) -> Cyclotomic:
    """ζ_n^k in canonical form."""
    if n < 1:
        raise InvalidArgumentError(f"root of unity needs n >= 1, got {n}")
    return _canonical(n, {k % n: 1})


def from_terms(n: int, terms: Iterable[tuple[int, Number]]) -> Cyclotomic:
    """Σ c·ζ_n^k over the given (k, c) pairs, canonicalized."""
    if n < 1:
        raise InvalidArgumentError(f"conductor must be positive, got {n}")
    accumulated: dict[int, Fraction] = defaultdict(Fraction)
    for k, c in terms:
        accumulated[k % n] += Fraction(c)
    return _canonical(n, accumulated)


ZERO = Cyclotomic(1, ())
ONE = Cyclotomic(1, ((0, Fraction(1)),))


# Galois action and traces


def galois_apply(x: Cyclotomic, k: int) -> Cyclotomic:
    """σ_k(x) where σ_k(ζ) = ζ^k."""
    n = x.conductor
    if gcd(k, n) != 1:
        raise InvalidAutomorphismError(f"σ_{k} is not an automorphism of Q(ζ_{n})")
    if k % n == 1:
        return x
    return _canonical(n, {(e * k) % n: c for e, c in x.coeffs})


def conjugate(x: Cyclotomic) -> Cyclotomic:
    """Complex conjugation, σ_{-1}."""
    return galois_apply(x, -1)


def trace_in_field(x: Cyclotomic, m: int) -> Fraction:
    """Tr_{Q(ζ_m)/Q}(x); requires x ∈ Q(ζ_m)."""
    return trace_times_root(x, m, 0)


def trace_times_root(x: Cyclotomic, m: int, shift: int) -> Fraction:
    """Tr_{Q(ζ_m)/Q}(x·ζ_m^shift) without forming the product."""
    if m < 1 or m % x.conductor:
        raise InvalidArgumentError(f"element of conductor {x.conductor} is not in Q(ζ_{m})")
    scale = m // x.conductor
    total = Fraction(0)
    for e, c in x.coeffs:
        total += c * ramanujan_sum(m, e * scale + shift)
    return total


def trace_to_q(x: Cyclotomic) -> Fraction:
    """Absolute trace from the minimal field of x."""
    return trace_in_field(x, x.conductor)


def to_rational(x: Cyclotomic) -> Optional[Fraction]:
    """The rational value of x, or None when x is irrational."""
    if x.conductor != 1:
        return None
    return x.coeffs[0][1] if x.coeffs else Fraction(0)


def field_membership(x: Cyclotomic, m: int) -> bool:
    """True iff x ∈ Q(ζ_m)."""
    return m % x.conductor == 0


def coordinates(x: Cyclotomic, m: int) -> dict[int, Fraction]:
    """Zumbroich coordinates of x at the fixed level m (no descent)."""
    if m % x.conductor:
        raise InvalidArgumentError(f"element of conductor {x.conductor} is not in Q(ζ_{m})")
    return _reduce_at(m, x._lift(m))


# Data-file literals


def parse_rational(value: Any) -> Fraction:
    """Parse an integer or an "a/b" string into a Fraction."""
    if isinstance(value, bool):
        raise ParseError(f"booleans are not numbers: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        match = _RATIONAL_RE.match(value)
        if match:
            numerator, denominator = match.group(1), match.group(2)
            if denominator is not None and int(denominator) == 0:
                raise ParseError(f"zero denominator in {value!r}")
            return Fraction(int(numerator), int(denominator or 1))
    raise ParseError(f"not an exact rational literal: {value!r}")


def parse_literal(value: Any) -> Cyclotomic:
    """Parse a cyclotomic literal: int, "a/b", or {"n": n, "terms": [[k, c], ...]}."""
    if isinstance(value, dict):
        if set(value) != {"n", "terms"}:
            raise ParseError(f"cyclotomic object needs exactly 'n' and 'terms': {value!r}")
        n = value["n"]
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise ParseError(f"conductor must be a positive integer: {n!r}")
        terms = value["terms"]
        if not isinstance(terms, list):
            raise ParseError(f"'terms' must be a list: {terms!r}")
        pairs = []
        for term in terms:
            if (
                not isinstance(term, list)
                or len(term) != 2
                or isinstance(term[0], bool)
                or not isinstance(term[0], int)
            ):
                raise ParseError(f"term must be [exponent, rational]: {term!r}")
            pairs.append((term[0], parse_rational(term[1])))
        return from_terms(n, pairs)
    return rational(parse_rational(value))


def _rational_literal(value: Fraction) -> Union[int, str]:
    if value.denominator == 1:
        return value.numerator
    return f"{value.numerator}/{value.denominator}"


def to_literal(x: Cyclotomic) -> Any:
    """Serialize x canonically; parse_literal(to_literal(x)) == x."""
    if x.conductor == 1:
        return _rational_literal(to_rational(x) or Fraction(0))
    return {"n": x.conductor, "terms": [[k, _rational_literal(c)] for k, c in x.coeffs]}
