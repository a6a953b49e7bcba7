"""Symbolic bounded operators on K^n and c_0(Q_p).

Expressions are folded eagerly by the constructor helpers ``shift_by_lambda``,
``affine`` and ``add_rank_one``: anything over a ``Matrix`` or ``Diagonal``
collapses into a new ``Matrix``/``Diagonal``, and shift expressions keep the
canonical forms ``S``, ``Shifted(S, lam)`` and ``Affine(S, alpha, beta)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Union

from .errors import AmbientMismatch, NotFiniteDimensional, ZeroBeta
from .padic import PNormValue, check_same_prime, pnorm, to_fraction
from .sequence import FinSuppVector, Functional, GeometricTailVector, apply_functional

Vector = Union[FinSuppVector, GeometricTailVector]


class OperatorExpr:
    p: int

    @property
    def n(self) -> int | None:
        """Dimension for K^n operators, ``None`` on c_0."""
        raise NotImplementedError


@dataclass(frozen=True)
class Matrix(OperatorExpr):
    p: int
    rows: tuple

    def __init__(self, p: int, rows):
        rows = tuple(tuple(to_fraction(q) for q in row) for row in rows)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise ValueError("matrix must be square and non-empty")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "rows", rows)

    @classmethod
    def identity(cls, p: int, n: int) -> "Matrix":
        return cls(p, [[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, p: int, n: int) -> "Matrix":
        return cls(p, [[0] * n for _ in range(n)])

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "Matrix") -> "Matrix":
        check_same_prime(self.p, other.p)
        n = self.n
        cols = list(zip(*other.rows))
        return Matrix(self.p, [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols] for row in self.rows])

    def __add__(self, other: "Matrix") -> "Matrix":
        check_same_prime(self.p, other.p)
        return Matrix(self.p, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + other.scale(-1)

    def scale(self, c) -> "Matrix":
        c = to_fraction(c)
        return Matrix(self.p, [[c * a for a in row] for row in self.rows])

    def entry_norm(self) -> PNormValue:
        return self._entry_norm

    @cached_property
    def _entry_norm(self) -> PNormValue:
        best = PNormValue.zero(self.p)
        for row in self.rows:
            for a in row:
                if a:
                    best = max(best, pnorm(a, self.p))
        return best

    def column(self, j: int) -> FinSuppVector:
        return FinSuppVector(self.p, ((i, row[j]) for i, row in enumerate(self.rows)), self.n)


# the spec's MaterializedMatrix is simply a folded Matrix
MaterializedMatrix = Matrix


@dataclass(frozen=True)
class Diagonal(OperatorExpr):
    """Diagonal operator on c_0 with ``d_i = prefix[i]`` and ``d_i = tail`` beyond."""

    p: int
    prefix: tuple
    tail: Fraction

    def __init__(self, p: int, prefix, tail):
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "prefix", tuple(to_fraction(q) for q in prefix))
        object.__setattr__(self, "tail", to_fraction(tail))

    @property
    def n(self) -> None:
        return None

    def entry(self, i: int) -> Fraction:
        return self.prefix[i] if i < len(self.prefix) else self.tail

    def values(self) -> list[Fraction]:
        """All entries that occur, with the tail value last."""
        return list(self.prefix) + [self.tail]

    def map(self, f) -> "Diagonal":
        return Diagonal(self.p, [f(d) for d in self.prefix], f(self.tail))


@dataclass(frozen=True)
class RightShift(OperatorExpr):
    p: int

    @property
    def n(self) -> None:
        return None


@dataclass(frozen=True)
class LeftShift(OperatorExpr):
    p: int

    @property
    def n(self) -> None:
        return None


@dataclass(frozen=True)
class Shifted(OperatorExpr):
    """``inner - lam * I``."""

    inner: OperatorExpr
    lam: Fraction

    @property
    def p(self) -> int:
        return self.inner.p

    @property
    def n(self):
        return self.inner.n


@dataclass(frozen=True)
class Affine(OperatorExpr):
    """``beta * inner + alpha * I``."""

    inner: OperatorExpr
    alpha: Fraction
    beta: Fraction

    def __post_init__(self):
        if self.beta == 0:
            raise ZeroBeta("affine map needs beta != 0")

    @property
    def p(self) -> int:
        return self.inner.p

    @property
    def n(self):
        return self.inner.n


@dataclass(frozen=True)
class RankOneUpdate(OperatorExpr):
    """``inner + C`` with ``C y = phi(y) * u``."""

    inner: OperatorExpr
    u: FinSuppVector
    phi: Functional

    @property
    def p(self) -> int:
        return self.inner.p

    @property
    def n(self):
        return self.inner.n

    def rank_one_norm(self) -> PNormValue:
        return self.phi.norm() * self.u.sup_norm()


SHIFTS = (RightShift, LeftShift)


def shift_pencil(A: OperatorExpr):
    """Write a shift-family operator as ``beta * base + alpha * I``.

    Returns ``(base, alpha, beta)`` or ``None`` if ``A`` is not of that form.
    """
    if isinstance(A, SHIFTS):
        return A, Fraction(0), Fraction(1)
    if isinstance(A, Shifted) and isinstance(A.inner, SHIFTS):
        return A.inner, -A.lam, Fraction(1)
    if isinstance(A, Affine) and isinstance(A.inner, SHIFTS):
        return A.inner, A.alpha, A.beta
    return None


# --- constructors -----------------------------------------------------------


def shift_by_lambda(A: OperatorExpr, lam) -> OperatorExpr:
    """``A - lam * I``, folded."""
    lam = to_fraction(lam)
    if lam == 0:
        return A
    if isinstance(A, Matrix):
        return Matrix(A.p, [[a - lam * (i == j) for j, a in enumerate(row)] for i, row in enumerate(A.rows)])
    if isinstance(A, Diagonal):
        return A.map(lambda d: d - lam)
    if isinstance(A, SHIFTS):
        return Shifted(A, lam)
    if isinstance(A, Shifted):
        return shift_by_lambda(A.inner, A.lam + lam)
    if isinstance(A, Affine):
        return affine(A.inner, A.alpha - lam, A.beta)
    if isinstance(A, RankOneUpdate):
        return RankOneUpdate(shift_by_lambda(A.inner, lam), A.u, A.phi)
    raise TypeError(f"unknown operator {A!r}")


def affine(A: OperatorExpr, alpha, beta) -> OperatorExpr:
    """``beta * A + alpha * I``, folded."""
    alpha, beta = to_fraction(alpha), to_fraction(beta)
    if beta == 0:
        raise ZeroBeta("affine map needs beta != 0")
    if beta == 1:
        return shift_by_lambda(A, -alpha)
    if isinstance(A, Matrix):
        return shift_by_lambda(A.scale(beta), -alpha)
    if isinstance(A, Diagonal):
        return A.map(lambda d: beta * d + alpha)
    if isinstance(A, SHIFTS):
        return Affine(A, alpha, beta)
    if isinstance(A, Shifted):
        return affine(A.inner, alpha - beta * A.lam, beta)
    if isinstance(A, Affine):
        return affine(A.inner, alpha + beta * A.alpha, beta * A.beta)
    if isinstance(A, RankOneUpdate):
        return RankOneUpdate(affine(A.inner, alpha, beta), A.u.scale(beta), A.phi)
    raise TypeError(f"unknown operator {A!r}")


def add_rank_one(A: OperatorExpr, u: FinSuppVector, phi: Functional) -> OperatorExpr:
    """``A + C`` with ``C y = phi(y) u``, folded into a matrix in finite dimension."""
    check_same_prime(A.p, u.p, phi.p)
    if u.n != A.n:
        raise AmbientMismatch(f"update vector lives in {u.n}, operator in {A.n}")
    if A.n is not None and phi.support_end() > A.n:
        raise AmbientMismatch("functional reaches outside K^n")
    if u.is_zero() or not phi.coefficients:
        return A
    if isinstance(A, Matrix):
        uu, ff = u.to_list(A.n), [phi.as_dict().get(j, Fraction(0)) for j in range(A.n)]
        return Matrix(A.p, [[a + uu[i] * ff[j] for j, a in enumerate(row)] for i, row in enumerate(A.rows)])
    return RankOneUpdate(A, u, phi)


def fold(A: OperatorExpr) -> OperatorExpr:
    """Re-normalize a hand-built expression tree."""
    if isinstance(A, Shifted):
        return shift_by_lambda(fold(A.inner), A.lam)
    if isinstance(A, Affine):
        return affine(fold(A.inner), A.alpha, A.beta)
    if isinstance(A, RankOneUpdate):
        return add_rank_one(fold(A.inner), A.u, A.phi)
    return A


# --- action -----------------------------------------------------------------


def _coord(A: OperatorExpr, x, j: int) -> Fraction:
    """``(A x)_j`` on c_0, for any vector exposing ``coefficient``."""
    if isinstance(A, RightShift):
        return x.coefficient(j - 1) if j >= 1 else Fraction(0)
    if isinstance(A, LeftShift):
        return x.coefficient(j + 1)
    if isinstance(A, Diagonal):
        return A.entry(j) * x.coefficient(j)
    if isinstance(A, Shifted):
        return _coord(A.inner, x, j) - A.lam * x.coefficient(j)
    if isinstance(A, Affine):
        return A.beta * _coord(A.inner, x, j) + A.alpha * x.coefficient(j)
    if isinstance(A, RankOneUpdate):
        return _coord(A.inner, x, j) + apply_functional(A.phi, x) * A.u.coefficient(j)
    raise TypeError(f"no coordinate form for {A!r}")


def _tail_start(A: OperatorExpr, s: int) -> int:
    # past this index (A x)_j is geometric with x's ratio whenever x is from s on
    if isinstance(A, RightShift):
        return s + 1
    if isinstance(A, LeftShift):
        return s
    if isinstance(A, Diagonal):
        return max(s, len(A.prefix))
    if isinstance(A, (Shifted, Affine)):
        return max(s, _tail_start(A.inner, s))
    if isinstance(A, RankOneUpdate):
        return max(_tail_start(A.inner, s), A.u.support_end())
    raise TypeError(f"no tail rule for {A!r}")


def apply(A: OperatorExpr, x: Vector) -> Vector:
    """Exact image ``A x``."""
    check_same_prime(A.p, x.p)
    if A.n != x.n:
        raise AmbientMismatch(f"operator on {A.n or 'c0'}, vector in {x.n or 'c0'}")
    if isinstance(x, GeometricTailVector):
        start = _tail_start(A, x.start)
        head = FinSuppVector(A.p, ((j, _coord(A, x, j)) for j in range(start)))
        return GeometricTailVector(head, start, _coord(A, x, start), x.ratio).simplify()
    if isinstance(A, Matrix):
        xs = x.as_dict()
        return FinSuppVector(
            A.p, ((i, sum((row[j] * q for j, q in xs.items()), Fraction(0))) for i, row in enumerate(A.rows)), A.n
        )
    if isinstance(A, Diagonal):
        return FinSuppVector(A.p, ((i, A.entry(i) * q) for i, q in x.entries))
    if isinstance(A, RightShift):
        return FinSuppVector(A.p, ((i + 1, q) for i, q in x.entries))
    if isinstance(A, LeftShift):
        return FinSuppVector(A.p, ((i - 1, q) for i, q in x.entries if i >= 1))
    if isinstance(A, Shifted):
        return apply(A.inner, x) - x.scale(A.lam)
    if isinstance(A, Affine):
        return apply(A.inner, x).scale(A.beta) + x.scale(A.alpha)
    if isinstance(A, RankOneUpdate):
        return apply(A.inner, x) + A.u.scale(apply_functional(A.phi, x))
    raise TypeError(f"unknown operator {A!r}")


# --- norms ------------------------------------------------------------------


def op_norm_bound(A: OperatorExpr) -> tuple[PNormValue, bool]:
    """Operator norm and whether it is exact (``False`` means upper bound)."""
    p = A.p
    if isinstance(A, Matrix):
        return A.entry_norm(), True
    if isinstance(A, Diagonal):
        return max(pnorm(d, p) for d in A.values()), True
    pencil = shift_pencil(A)
    if pencil is not None:
        # ||beta*S + alpha|| = max(|beta|, |alpha|), attained on e_0 (S) or e_1 (T)
        _, alpha, beta = pencil
        return max(pnorm(alpha, p), pnorm(beta, p)), True
    if isinstance(A, (Shifted, Affine)):
        inner, exact = op_norm_bound(A.inner)
        if isinstance(A, Shifted):
            scaled, shift = inner, pnorm(A.lam, p)
        else:
            scaled, shift = pnorm(A.beta, p) * inner, pnorm(A.alpha, p)
        return max(scaled, shift), exact and scaled != shift
    if isinstance(A, RankOneUpdate):
        inner, exact = op_norm_bound(A.inner)
        r = A.rank_one_norm()
        if r.is_zero:
            return inner, exact
        if A.n is not None:
            return materialize_matrix(A).entry_norm(), True
        # ultrametric: differing norms cannot cancel
        return max(inner, r), exact and inner != r
    raise TypeError(f"unknown operator {A!r}")


def op_norm(A: OperatorExpr) -> PNormValue:
    return op_norm_bound(A)[0]


def materialize_matrix(A: OperatorExpr) -> Matrix:
    if A.n is None:
        raise NotFiniteDimensional(f"{type(A).__name__} acts on c_0")
    folded = fold(A)
    if not isinstance(folded, Matrix):
        raise NotFiniteDimensional(f"cannot fold {A!r}")
    return folded
