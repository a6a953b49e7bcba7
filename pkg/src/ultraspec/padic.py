"""Exact p-adic valuations and norms of rational numbers.

Scalars are plain ``fractions.Fraction`` values; the prime travels alongside
them (``PrimeContext`` or a bare ``p``). Norm values live in the discrete value
group ``p^Z`` plus zero and are represented exactly by ``PNormValue``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Union

from .errors import ContextMismatch, SchemaError

Rational = Union[int, Fraction]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class PrimeContext:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"{self.p!r} is not a prime")

    def scalar(self, q) -> "PadicScalar":
        return PadicScalar(to_fraction(q), self.p)


def check_same_prime(*ps: int) -> int:
    first = ps[0]
    for p in ps[1:]:
        if p != first:
            raise ContextMismatch(f"prime mismatch: {first} vs {p}")
    return first


def _int_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(q: Rational, p: int) -> int | float:
    """Exponent of ``p`` in ``q``; ``math.inf`` for zero."""
    if type(q) is not Fraction:
        q = Fraction(q)
    if q == 0:
        return math.inf
    return _int_valuation(q.numerator, p) - _int_valuation(q.denominator, p)


def pnorm(q: Rational, p: int) -> "PNormValue":
    v = valuation(q, p)
    if v == math.inf:
        return PNormValue.zero(p)
    return PNormValue(p, -v)


@total_ordering
@dataclass(frozen=True)
class PNormValue:
    """Zero or ``p**exp``.  ``exp is None`` encodes zero."""

    p: int
    exp: int | None

    @classmethod
    def zero(cls, p: int) -> "PNormValue":
        return cls(p, None)

    @classmethod
    def one(cls, p: int) -> "PNormValue":
        return cls(p, 0)

    @property
    def is_zero(self) -> bool:
        return self.exp is None

    def __lt__(self, other: "PNormValue") -> bool:
        check_same_prime(self.p, other.p)
        if self.exp is None:
            return other.exp is not None
        if other.exp is None:
            return False
        return self.exp < other.exp

    def __mul__(self, other: "PNormValue") -> "PNormValue":
        check_same_prime(self.p, other.p)
        if self.exp is None or other.exp is None:
            return PNormValue.zero(self.p)
        return PNormValue(self.p, self.exp + other.exp)

    def __pow__(self, k: int) -> "PNormValue":
        if self.exp is None:
            if k <= 0:
                raise ZeroDivisionError("zero norm to a non-positive power")
            return self
        return PNormValue(self.p, self.exp * k)

    def inverse(self) -> "PNormValue":
        if self.exp is None:
            raise ZeroDivisionError("zero norm has no inverse")
        return PNormValue(self.p, -self.exp)

    def to_fraction(self) -> Fraction:
        if self.exp is None:
            return Fraction(0)
        return Fraction(self.p) ** self.exp

    def compare(self, t: Rational) -> int:
        return norm_compare(self, t)

    def to_json(self) -> dict:
        if self.exp is None:
            return {"zero": True}
        return {"pow": self.exp}

    @classmethod
    def from_json(cls, doc: dict, p: int) -> "PNormValue":
        if doc.get("zero") is True:
            return cls.zero(p)
        if "pow" in doc and isinstance(doc["pow"], int):
            return cls(p, doc["pow"])
        raise SchemaError(f"bad norm value {doc!r}")

    def __str__(self) -> str:
        return "0" if self.exp is None else f"{self.p}^{self.exp}"


def norm_compare(a: PNormValue, t: Rational) -> int:
    """Sign of ``a - t`` for a positive rational ``t``, via integer cross-multiplication."""
    t = Fraction(t)
    if t <= 0:
        raise ValueError("threshold must be positive")
    if a.exp is None:
        return -1
    # p^e vs n/d  <=>  p^e * d vs n  (e >= 0)  or  d vs n * p^-e  (e < 0)
    if a.exp >= 0:
        lhs, rhs = a.p ** a.exp * t.denominator, t.numerator
    else:
        lhs, rhs = t.denominator, t.numerator * a.p ** (-a.exp)
    return (lhs > rhs) - (lhs < rhs)


def largest_power_below(t: Rational, p: int) -> int:
    """Largest ``e`` with ``p**e < t`` (strict)."""
    t = Fraction(t)
    if t <= 0:
        raise ValueError("threshold must be positive")
    # float log is only a starting guess
    e = math.floor(math.log(t.numerator, p) - math.log(t.denominator, p))
    while norm_compare(PNormValue(p, e), t) >= 0:
        e -= 1
    while norm_compare(PNormValue(p, e + 1), t) < 0:
        e += 1
    return e


@dataclass(frozen=True)
class PadicScalar:
    value: Fraction
    p: int

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))

    def valuation(self) -> int | float:
        return valuation(self.value, self.p)

    def norm(self) -> PNormValue:
        return pnorm(self.value, self.p)


def to_fraction(q) -> Fraction:
    if type(q) is Fraction:
        return q
    if isinstance(q, PadicScalar):
        return q.value
    if isinstance(q, str):
        return parse_rational(q)
    if isinstance(q, bool) or not isinstance(q, (int, Fraction)):
        raise SchemaError(f"not an exact rational: {q!r}")
    return Fraction(q)


_RATIONAL = re.compile(r"-?([0-9]+)(?:/([0-9]+))?", re.ASCII)


def parse_rational(text: str) -> Fraction:
    """Parse ``"a/b"`` or ``"a"`` in base 10 with an optional leading minus."""
    m = _RATIONAL.fullmatch(text) if isinstance(text, str) else None
    if m is None:
        raise SchemaError(f"not a rational literal: {text!r}")
    if m.group(2) is not None and int(m.group(2)) == 0:
        raise SchemaError(f"zero denominator: {text!r}")
    return Fraction(text)


def format_rational(q: Rational) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
