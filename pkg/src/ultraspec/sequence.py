"""Vectors in c_0(Q_p) and K^n, and coordinate functionals.

Concrete vectors are finitely supported (``FinSuppVector``). A second type,
``GeometricTailVector``, holds sequences that are eventually geometric with a
ratio of norm < 1; these arise as exact kernel vectors and exact one-sided
inverse images for shift operators and are still null sequences.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import AmbientMismatch, ZeroVector
from .padic import PNormValue, check_same_prime, pnorm, to_fraction


def _clean(entries: Mapping[int, object] | Iterable[tuple[int, object]]) -> tuple:
    items = entries.items() if isinstance(entries, Mapping) else entries
    out = {}
    for i, q in items:
        i = int(i)
        if i < 0:
            raise ValueError(f"negative index {i}")
        q = to_fraction(q)
        if q != 0:
            out[i] = q
    return tuple(sorted(out.items()))


def _max_norm(values: Iterable[Fraction], p: int) -> PNormValue:
    best = PNormValue.zero(p)
    for q in values:
        best = max(best, pnorm(q, p))
    return best


@dataclass(frozen=True)
class FinSuppVector:
    """Finitely supported sequence; ``n is None`` means the ambient space is c_0."""

    p: int
    entries: tuple
    n: int | None = None

    def __init__(self, p: int, entries=(), n: int | None = None):
        cleaned = _clean(entries)
        if n is not None:
            if n <= 0:
                raise ValueError("dimension must be positive")
            if cleaned and cleaned[-1][0] >= n:
                raise AmbientMismatch(f"index {cleaned[-1][0]} outside K^{n}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "entries", cleaned)
        object.__setattr__(self, "n", n)

    @classmethod
    def basis(cls, p: int, i: int, n: int | None = None) -> "FinSuppVector":
        return cls(p, {i: 1}, n)

    @classmethod
    def from_list(cls, p: int, values, n: int | None = None) -> "FinSuppVector":
        return cls(p, enumerate(values), n)

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.entries)

    def coefficient(self, i: int) -> Fraction:
        for j, q in self.entries:
            if j == i:
                return q
        return Fraction(0)

    def support_end(self) -> int:
        """One past the largest stored index."""
        return self.entries[-1][0] + 1 if self.entries else 0

    def is_zero(self) -> bool:
        return not self.entries

    def to_list(self, length: int | None = None) -> list[Fraction]:
        length = self.n if length is None else length
        if length is None:
            length = self.support_end()
        d = self.as_dict()
        return [d.get(i, Fraction(0)) for i in range(length)]

    def sup_norm(self) -> PNormValue:
        return _max_norm((q for _, q in self.entries), self.p)

    def _check(self, other: "FinSuppVector"):
        check_same_prime(self.p, other.p)
        if self.n != other.n:
            raise AmbientMismatch(f"ambient mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        if isinstance(other, GeometricTailVector):
            return other + self
        self._check(other)
        d = self.as_dict()
        for i, q in other.entries:
            d[i] = d.get(i, 0) + q
        return FinSuppVector(self.p, d, self.n)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "FinSuppVector":
        c = to_fraction(c)
        return FinSuppVector(self.p, ((i, c * q) for i, q in self.entries), self.n)

    def __eq__(self, other):
        if isinstance(other, GeometricTailVector):
            return other == self
        if not isinstance(other, FinSuppVector):
            return NotImplemented
        return (self.p, self.entries, self.n) == (other.p, other.entries, other.n)

    def __hash__(self):
        return hash((self.p, self.entries, self.n))


@dataclass(frozen=True)
class GeometricTailVector:
    """``x_j = head_j`` for ``j < start`` and ``x_j = lead * ratio**(j - start)`` beyond.

    Requires ``|ratio| < 1`` so the sequence is null and its sup norm is
    ``max(|head|, |lead|)``. Always lives in c_0.
    """

    head: FinSuppVector
    start: int
    lead: Fraction
    ratio: Fraction

    def __post_init__(self):
        if self.head.n is not None:
            raise AmbientMismatch("geometric tails only exist in c_0")
        if self.head.support_end() > self.start:
            raise ValueError("head must be supported below start")
        object.__setattr__(self, "lead", to_fraction(self.lead))
        object.__setattr__(self, "ratio", to_fraction(self.ratio))
        if self.lead != 0 and pnorm(self.ratio, self.head.p) >= PNormValue.one(self.head.p):
            raise ValueError("tail ratio must have norm < 1")

    @property
    def p(self) -> int:
        return self.head.p

    @property
    def n(self) -> None:
        return None

    def coefficient(self, i: int) -> Fraction:
        if i < self.start:
            return self.head.coefficient(i)
        return self.lead * self.ratio ** (i - self.start)

    def sup_norm(self) -> PNormValue:
        return max(self.head.sup_norm(), pnorm(self.lead, self.p))

    def is_zero(self) -> bool:
        return self.lead == 0 and self.head.is_zero()

    def truncate(self, length: int) -> FinSuppVector:
        return FinSuppVector(self.p, ((i, self.coefficient(i)) for i in range(length)))

    def simplify(self):
        """Collapse to a ``FinSuppVector`` when the tail vanishes."""
        if self.lead == 0:
            return self.head
        if self.ratio == 0:
            return self.head + FinSuppVector(self.p, {self.start: self.lead})
        return self

    def scale(self, c):
        c = to_fraction(c)
        return GeometricTailVector(self.head.scale(c), self.start, c * self.lead, self.ratio).simplify()

    def __neg__(self):
        return self.scale(-1)

    def __add__(self, other):
        check_same_prime(self.p, other.p)
        if isinstance(other, FinSuppVector):
            if other.n is not None:
                raise AmbientMismatch("cannot add a K^n vector to a c_0 sequence")
            start = max(self.start, other.support_end())
            head = FinSuppVector(
                self.p, ((i, self.coefficient(i) + other.coefficient(i)) for i in range(start))
            )
            return GeometricTailVector(head, start, self.coefficient(start), self.ratio).simplify()
        if other.lead == 0 or self.lead == 0 or other.ratio == self.ratio:
            start = max(self.start, other.start)
            head = FinSuppVector(
                self.p, ((i, self.coefficient(i) + other.coefficient(i)) for i in range(start))
            )
            ratio = self.ratio if self.lead != 0 else other.ratio
            lead = self.coefficient(start) + other.coefficient(start)
            return GeometricTailVector(head, start, lead, ratio).simplify()
        raise NotImplementedError("sum of geometric tails with different ratios")

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, (FinSuppVector, GeometricTailVector)):
            return NotImplemented
        if self.p != other.p or other.n is not None:
            return False
        other_start = other.start if isinstance(other, GeometricTailVector) else other.support_end()
        start = max(self.start, other_start)
        if any(self.coefficient(i) != other.coefficient(i) for i in range(start + 1)):
            return False
        lead = self.coefficient(start)
        if lead == 0:
            return True
        other_ratio = other.ratio if isinstance(other, GeometricTailVector) else None
        return other_ratio == self.ratio

    def __hash__(self):
        # equality is semantic across representations
        return hash(self.p)


@dataclass(frozen=True)
class Functional:
    """``phi(y) = sum_i coefficients[i] * y_i`` over finitely many indices."""

    p: int
    coefficients: tuple

    def __init__(self, p: int, coefficients=()):
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coefficients", _clean(coefficients))

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.coefficients)

    def norm(self) -> PNormValue:
        return _max_norm((c for _, c in self.coefficients), self.p)

    def support_end(self) -> int:
        return self.coefficients[-1][0] + 1 if self.coefficients else 0

    def scale(self, c) -> "Functional":
        c = to_fraction(c)
        return Functional(self.p, ((i, c * q) for i, q in self.coefficients))

    def __call__(self, y) -> Fraction:
        return apply_functional(self, y)


def sup_norm(x) -> PNormValue:
    return x.sup_norm()


def unit_functional(x: FinSuppVector) -> Functional:
    """Coordinate functional with ``phi(x) = 1`` and ``||phi|| = ||x||^-1``.

    Supported on the smallest index where ``|x_i|`` attains the sup norm.
    """
    if x.is_zero():
        raise ZeroVector("unit functional of the zero vector")
    target = x.sup_norm()
    for i, q in x.entries:
        if pnorm(q, x.p) == target:
            return Functional(x.p, {i: 1 / q})
    raise AssertionError("sup norm not attained")


def normalize(x: FinSuppVector) -> tuple[FinSuppVector, Fraction]:
    """Return ``(z, c)`` with ``|c| = ||x||``, ``z = x / c`` and ``||z|| = 1``."""
    if x.is_zero():
        raise ZeroVector("cannot normalize the zero vector")
    e = x.sup_norm().exp
    c = Fraction(x.p) ** (-e)
    return x.scale(1 / c), c


def apply_functional(phi: Functional, y) -> Fraction:
    check_same_prime(phi.p, y.p)
    total = Fraction(0)
    for i, c in phi.coefficients:
        total += c * y.coefficient(i)
    return total

