"""One-sided invertibility, minimal one-sided inverse norms and canonical inverses.

Closed forms per family (write a shift-family operator as ``beta*(X - nu)``
with ``nu = -alpha/beta``):

* ``S - nu`` is an isometry for ``|nu| <= 1`` with range ``ker psi``,
  ``psi(y) = sum nu^j y_j``; the backward recursion ``x_j = y_{j+1} + nu x_{j+1}``
  is a norm-one left inverse. For ``|nu| > 1`` it is invertible with inverse
  norm ``|nu|^-1``.
* ``T - nu`` has the null eigenvector ``(nu^j)_j`` for ``|nu| < 1`` and the
  norm-one right inverse ``x_0 = 0, x_{i+1} = y_i + nu x_i``; for ``|nu| >= 1``
  it is bijective and ``||(T - nu) x|| = max(1, |nu|) ||x||``.
"""

from __future__ import annotations

import contextlib
import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Union

from .errors import (
    ContractionFailure,
    InfiniteSupport,
    NotInvertibleOnSide,
    Singular,
    UnsupportedFamily,
)
from .linalg import kernel_vector, matrix_inverse, transpose
from .operators import (
    Diagonal,
    LeftShift,
    Matrix,
    OperatorExpr,
    RankOneUpdate,
    RightShift,
    apply,
    fold,
    materialize_matrix,
    shift_pencil,
)
from .padic import PNormValue, pnorm
from .sequence import FinSuppVector, Functional, GeometricTailVector, apply_functional

SIDES = ("left", "right", "two_sided")


@dataclass(frozen=True)
class ExactInverse:
    matrix: Matrix


@dataclass(frozen=True)
class KernelVector:
    vector: Union[FinSuppVector, GeometricTailVector]


@dataclass(frozen=True)
class NonSurjectivityWitness:
    """``missed`` is not in the range; ``annihilator_ratio`` describes the
    functional ``psi(y) = sum_j r^j y_j`` vanishing on the range when the
    annihilator is not finitely supported."""

    missed: FinSuppVector
    reason: str
    annihilator: Functional | None = None
    annihilator_ratio: Fraction | None = None


@dataclass(frozen=True)
class CanonicalOneSidedInverse:
    family: str
    recursion: str
    lower_modulus: PNormValue


@dataclass(frozen=True)
class LowerBoundIsometry:
    gamma: PNormValue


Certificate = Union[ExactInverse, KernelVector, NonSurjectivityWitness, CanonicalOneSidedInverse, LowerBoundIsometry]


@dataclass(frozen=True)
class InvertibilityVerdict:
    side: str
    invertible: bool
    min_inverse_norm: PNormValue | None
    certificate: Certificate

    def __post_init__(self):
        if self.invertible != (self.min_inverse_norm is not None):
            raise ValueError("min_inverse_norm is present exactly when invertible")


# test hook: exponent added to every reported minimal inverse norm
_NORM_MUTATION = [0]


@contextlib.contextmanager
def mutated_min_inverse_norm(shift: int = 1):
    """Inflate every reported minimal inverse norm by ``p**shift``.

    Used only by the law harness self-test to show the laws are not vacuous.
    """
    _NORM_MUTATION[0] += shift
    try:
        yield
    finally:
        _NORM_MUTATION[0] -= shift


def _verdict(side, invertible, norm, cert) -> InvertibilityVerdict:
    if norm is not None and _NORM_MUTATION[0]:
        norm = PNormValue(norm.p, norm.exp + _NORM_MUTATION[0])
    return InvertibilityVerdict(side, invertible, norm, cert)


def _check_side(side: str):
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}, got {side!r}")


def _pencil_params(A: OperatorExpr):
    base, alpha, beta = shift_pencil(A)
    nu = -alpha / beta
    return base, nu, beta


@functools.lru_cache(maxsize=8192)
def _inverse_or_none(M: Matrix) -> Matrix | None:
    # membership sweeps ask for the same inverse once per side, kind and epsilon
    try:
        return matrix_inverse(M)
    except Singular:
        return None


def decide(A: OperatorExpr, side: str) -> InvertibilityVerdict:
    """Decide ``side``-invertibility of ``A`` and the minimal inverse norm."""
    _check_side(side)
    A = fold(A)
    p = A.p
    if A.n is not None:
        M = materialize_matrix(A)
        inv = _inverse_or_none(M)
        if inv is None:
            if side == "right":
                w = kernel_vector(transpose(M))
                psi = Functional(p, enumerate(w))
                missed = FinSuppVector(p, {next(i for i, c in enumerate(w) if c != 0): 1}, M.n)
                return _verdict(side, False, None, NonSurjectivityWitness(missed, "functional vanishes on the range", psi))
            v = kernel_vector(M)
            return _verdict(side, False, None, KernelVector(FinSuppVector(p, enumerate(v), M.n)))
        return _verdict(side, True, inv.entry_norm(), ExactInverse(inv))

    if isinstance(A, Diagonal):
        zero_at = next((i for i, d in enumerate(A.values()) if d == 0), None)
        if zero_at is not None:
            e = FinSuppVector.basis(p, zero_at)
            if side == "right":
                return _verdict(side, False, None, NonSurjectivityWitness(e, "zero diagonal entry", Functional(p, {zero_at: 1})))
            return _verdict(side, False, None, KernelVector(e))
        smallest = min(pnorm(d, p) for d in A.values())
        return _verdict(side, True, smallest.inverse(), CanonicalOneSidedInverse("diagonal", "entrywise", smallest))

    if shift_pencil(A) is not None:
        base, nu, beta = _pencil_params(A)
        size = pnorm(nu, p)
        one = PNormValue.one(p)
        gamma = pnorm(beta, p) * max(one, size)
        if isinstance(base, RightShift):
            if side == "left" and size <= one:
                return _verdict(side, True, gamma.inverse(), CanonicalOneSidedInverse("right_shift", "backward", gamma))
            if size > one:
                return _verdict(side, True, gamma.inverse(), CanonicalOneSidedInverse("right_shift", "forward", gamma))
            return _verdict(
                side,
                False,
                None,
                NonSurjectivityWitness(FinSuppVector.basis(p, 0), "psi(e_0) = 1 while psi vanishes on the range", annihilator_ratio=nu),
            )
        if side == "right" and size < one:
            return _verdict(side, True, gamma.inverse(), CanonicalOneSidedInverse("left_shift", "forward", gamma))
        if size >= one:
            return _verdict(side, True, gamma.inverse(), CanonicalOneSidedInverse("left_shift", "backward", gamma))
        return _verdict(side, False, None, KernelVector(shift_eigenvector(p, nu)))

    if isinstance(A, RankOneUpdate):
        raise UnsupportedFamily("rank-one updates on c_0 have no closed-form decision")
    raise UnsupportedFamily(f"cannot decide {type(A).__name__}")


def shift_eigenvector(p: int, nu) -> Union[FinSuppVector, GeometricTailVector]:
    """``(1, nu, nu^2, ...)``: the null vector of ``T - nu`` for ``|nu| < 1``."""
    return GeometricTailVector(FinSuppVector(p), 0, Fraction(1), Fraction(nu)).simplify()


def kernel_truncation(p: int, nu, m: int) -> FinSuppVector:
    """``(1, nu, ..., nu^m, 0, ...)``; ``||(T - nu) x|| / ||x|| = |nu|^(m+1)``."""
    nu = Fraction(nu)
    return FinSuppVector(p, ((j, nu**j) for j in range(m + 1)))


def canonical_inverse_apply(A: OperatorExpr, side: str, y):
    """Apply the canonical minimal-norm ``side`` inverse of ``A`` to ``y``."""
    verdict = decide(A, side)
    if not verdict.invertible:
        raise NotInvertibleOnSide(f"not {side} invertible")
    A = fold(A)
    p = A.p
    if isinstance(verdict.certificate, ExactInverse):
        return apply(verdict.certificate.matrix, y)
    if isinstance(A, Diagonal):
        if isinstance(y, GeometricTailVector):
            raise InfiniteSupport("diagonal inverse on geometric tails is not needed")
        return FinSuppVector(p, ((i, q / A.entry(i)) for i, q in y.entries))
    base, nu, beta = _pencil_params(A)
    if not isinstance(y, FinSuppVector):
        raise InfiniteSupport("shift inverses take finitely supported inputs")
    recursion = verdict.certificate.recursion
    m = y.support_end()
    ys = y.to_list(m)
    if isinstance(base, RightShift) and recursion == "backward":
        # x_j = y_{j+1} + nu x_{j+1}, vanishing from index m-1 on
        x = [Fraction(0)] * max(m, 1)
        for j in range(m - 2, -1, -1):
            x[j] = ys[j + 1] + nu * x[j + 1]
        out = FinSuppVector(p, enumerate(x))
    elif isinstance(base, RightShift):
        # x_0 = -y_0/nu, x_j = (x_{j-1} - y_j)/nu, geometric with ratio 1/nu past m
        x, prev = [], Fraction(0)
        for j in range(m):
            prev = (prev - ys[j]) / nu
            x.append(prev)
        out = GeometricTailVector(FinSuppVector(p, enumerate(x)), m, prev / nu if m else 0, 1 / nu).simplify()
    elif recursion == "backward":
        # x_i = (x_{i+1} - y_i)/nu, vanishing from index m on
        x = [Fraction(0)] * (m + 1)
        for i in range(m - 1, -1, -1):
            x[i] = (x[i + 1] - ys[i]) / nu
        out = FinSuppVector(p, enumerate(x))
    else:
        # x_0 = 0, x_{i+1} = y_i + nu x_i, geometric with ratio nu past m
        x = [Fraction(0)]
        for i in range(m):
            x.append(ys[i] + nu * x[i])
        head = FinSuppVector(p, enumerate(x[:m]))
        out = GeometricTailVector(head, m, x[m], nu).simplify()
    return out.scale(1 / beta)


def lower_modulus(A: OperatorExpr) -> PNormValue:
    """Exact ``inf ||A x|| / ||x||`` for shift pencils and diagonals (zero if not bounded below)."""
    A = fold(A)
    p = A.p
    if isinstance(A, Diagonal):
        return min(pnorm(d, p) for d in A.values())
    if shift_pencil(A) is not None:
        base, nu, beta = _pencil_params(A)
        if isinstance(base, LeftShift) and pnorm(nu, p) < PNormValue.one(p):
            return PNormValue.zero(p)
        return pnorm(beta, p) * max(PNormValue.one(p), pnorm(nu, p))
    raise UnsupportedFamily(f"no lower modulus formula for {type(A).__name__}")


@dataclass
class NeumannResult:
    """Result of summing ``C_l (-C C_l)^k``.

    ``D`` is a ``Matrix`` in finite dimension and an apply-only callable
    otherwise; ``tail_bound`` bounds the truncation error of the last partial sum.
    """

    D: Union[Matrix, Callable]
    tail_bound: PNormValue
    contraction: PNormValue
    partial_errors: list = field(default_factory=list)


def neumann_inverse(cl, C, n_max: int = 5, cl_norm: PNormValue | None = None) -> NeumannResult:
    """``D = C_l (I + C C_l)^{-1} = sum_k C_l (-C C_l)^k``.

    In finite dimension ``cl`` and ``C`` are matrices and ``D`` is the exact
    closed form; every partial sum ``D_n`` (n <= n_max) is checked against
    ``||D_n - D|| <= ||C_l|| ||C C_l||^(n+1)``. Otherwise ``cl`` is a callable
    applying a left inverse, ``C`` a ``(u, phi)`` rank-one pair, and ``D``
    applies the ``n_max``-term partial sum.
    """
    if isinstance(cl, Matrix):
        n = cl.n
        I = Matrix.identity(cl.p, n)
        CCl = C @ cl
        q = CCl.entry_norm()
        if q >= PNormValue.one(cl.p):
            raise ContractionFailure(f"||C C_l|| = {q} is not < 1")
        D = cl @ matrix_inverse(I + CCl)
        term, partial = cl, cl
        errors = []
        for k in range(n_max + 1):
            if k:
                term = term @ CCl.scale(-1)
                partial = partial + term
            err = (partial - D).entry_norm()
            bound = cl.entry_norm() * q ** (k + 1) if not q.is_zero else PNormValue.zero(cl.p)
            if err > bound:
                raise AssertionError(f"tail estimate violated at n={k}: {err} > {bound}")
            errors.append((k, err, bound))
        return NeumannResult(D, errors[-1][2], q, errors)

    u, phi = C
    p = u.p
    if cl_norm is None:
        raise ValueError("cl_norm is required for apply-only inverses")
    q = phi.norm() * u.sup_norm() * cl_norm
    if q >= PNormValue.one(p):
        raise ContractionFailure(f"||C|| ||C_l|| = {q} is not < 1")

    def D(y):
        # C C_l w = phi(C_l w) u, so every term after the first is a multiple of C_l u
        total = cl(y)
        coeff = apply_functional(phi, total)
        clu = cl(u)
        for _ in range(n_max):
            coeff = -coeff
            total = total + clu.scale(coeff)
            coeff = apply_functional(phi, clu) * coeff
        return total

    tail = cl_norm * q ** (n_max + 1) if not q.is_zero else PNormValue.zero(p)
    return NeumannResult(D, tail, q)
