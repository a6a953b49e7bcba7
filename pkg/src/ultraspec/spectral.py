"""Membership in left/right spectra, pseudospectra and condition pseudospectra.

All predicates use the strict threshold ``> 1/eps`` and exact comparisons.
``two_sided`` uses the two-sided inverse.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import ScalarOperator, UltraspecError, UnsupportedFamily
from .inverse import SIDES, InvertibilityVerdict, decide
from .operators import Diagonal, Matrix, OperatorExpr, RightShift, fold, op_norm, shift_by_lambda, shift_pencil
from .padic import PNormValue, format_rational, largest_power_below, norm_compare, pnorm, to_fraction

KINDS = ("spectrum", "pseudospectrum", "condition_pseudospectrum")


def _eps(eps) -> Fraction:
    eps = to_fraction(eps)
    if eps <= 0:
        raise ValueError("epsilon must be a positive rational")
    return eps


def in_spectrum(A: OperatorExpr, lam, side: str = "left") -> bool:
    return not decide(shift_by_lambda(A, lam), side).invertible


def _pseudo_from(verdict: InvertibilityVerdict, eps: Fraction) -> bool:
    if not verdict.invertible:
        return True
    return norm_compare(verdict.min_inverse_norm, 1 / eps) > 0


def _condition_from(verdict: InvertibilityVerdict, shifted_norm: PNormValue, eps: Fraction) -> bool:
    if not verdict.invertible:
        return True
    return norm_compare(shifted_norm * verdict.min_inverse_norm, 1 / eps) > 0


def in_pseudospectrum(A: OperatorExpr, lam, eps, side: str = "left") -> bool:
    return _pseudo_from(decide(shift_by_lambda(A, lam), side), _eps(eps))


def in_condition_pseudospectrum(A: OperatorExpr, lam, eps, side: str = "left") -> bool:
    shifted = shift_by_lambda(A, lam)
    return _condition_from(decide(shifted, side), op_norm(shifted), _eps(eps))


def member(A: OperatorExpr, lam, eps, side: str, kind: str) -> bool:
    if kind == "spectrum":
        return in_spectrum(A, lam, side)
    if kind == "pseudospectrum":
        return in_pseudospectrum(A, lam, eps, side)
    if kind == "condition_pseudospectrum":
        return in_condition_pseudospectrum(A, lam, eps, side)
    raise ValueError(f"kind must be one of {KINDS}")


def c_A(A: OperatorExpr) -> PNormValue:
    """``inf_lam ||A - lam I||``.

    In an ultrametric field the smallest ball around finitely many points has
    radius equal to their largest pairwise distance, which is also the largest
    distance from any one of them.
    """
    A = fold(A)
    p = A.p
    if isinstance(A, Matrix):
        diag = [A[i, i] for i in range(A.n)]
        off = max(
            (pnorm(A[i, j], p) for i in range(A.n) for j in range(A.n) if i != j),
            default=PNormValue.zero(p),
        )
        spread = max(pnorm(d - diag[0], p) for d in diag)
        value = max(off, spread)
    elif isinstance(A, Diagonal):
        vals = A.values()
        value = max(pnorm(d - vals[0], p) for d in vals)
    elif shift_pencil(A) is not None:
        value = pnorm(shift_pencil(A)[2], p)
    else:
        raise UnsupportedFamily(f"no C_A formula for {type(A).__name__}")
    if value.is_zero:
        raise ScalarOperator("operator is a scalar multiple of the identity")
    return value


# --- closed forms -----------------------------------------------------------


@dataclass(frozen=True)
class Constraint:
    """``|lam - center| <op> radius`` with ``op`` one of ``<``, ``=``, ``>``."""

    center: Fraction
    op: str
    radius: PNormValue

    def holds(self, lam) -> bool:
        d = pnorm(to_fraction(lam) - self.center, self.radius.p)
        return {"<": d < self.radius, "=": d == self.radius, ">": d > self.radius}[self.op]

    def __str__(self) -> str:
        return f"|λ - {format_rational(self.center)}| {self.op} {self.radius}"


@dataclass(frozen=True)
class RegionDescription:
    """Union of intersections of constraints; ``((),)`` is all of K, ``()`` is empty."""

    clauses: tuple

    @classmethod
    def everything(cls) -> "RegionDescription":
        return cls(((),))

    @classmethod
    def empty(cls) -> "RegionDescription":
        return cls(())

    def __or__(self, other: "RegionDescription") -> "RegionDescription":
        return RegionDescription(self.clauses + other.clauses)

    def contains(self, lam) -> bool:
        return any(all(c.holds(lam) for c in clause) for clause in self.clauses)

    def __str__(self) -> str:
        if not self.clauses:
            return "∅"
        if any(not clause for clause in self.clauses):
            return "K"
        return " ∪ ".join("{λ : " + " and ".join(map(str, clause)) + "}" for clause in self.clauses)


def _ball(center, radius: PNormValue) -> RegionDescription:
    return RegionDescription(((Constraint(to_fraction(center), "<", radius),),))


def _open_ball_rational(center, r: Fraction, p: int) -> RegionDescription:
    # |x| < r  <=>  |x| < p^(e+1) where p^e is the largest power of p below r
    return _ball(center, PNormValue(p, largest_power_below(r, p) + 1))


def closed_form_region(A: OperatorExpr, eps, side: str, kind: str) -> RegionDescription:
    """Symbolic region for diagonal and shift-family operators."""
    if side not in SIDES or kind not in KINDS:
        raise ValueError("bad side or kind")
    A = fold(A)
    p = A.p
    eps = _eps(eps) if kind != "spectrum" else None
    whole = RegionDescription.everything()
    empty = RegionDescription.empty()

    if isinstance(A, Diagonal):
        values = sorted(set(A.values()))
        points = RegionDescription(tuple((Constraint(v, "=", PNormValue.zero(p)),) for v in values))
        if kind == "spectrum":
            return points
        if kind == "pseudospectrum":
            region = empty
            for v in values:
                region = region | _open_ball_rational(v, eps, p)
            return region
        if eps > 1:
            return whole
        diameter = max(pnorm(v - values[0], p) for v in values)
        if diameter.is_zero:
            return points
        region = points
        for v in values:
            region = region | _open_ball_rational(v, eps * diameter.to_fraction(), p)
        return region

    pencil = shift_pencil(A)
    if pencil is None:
        raise UnsupportedFamily("closed forms exist only for diagonal and shift families")
    base, alpha, beta = pencil
    b = pnorm(beta, p)
    closed_disc = _ball(alpha, PNormValue(p, b.exp + 1))  # |mu - alpha| <= |beta|
    open_disc = _ball(alpha, b)  # |mu - alpha| < |beta|
    eps_disc = _open_ball_rational(alpha, eps, p) if eps is not None else None
    beta_below_eps = eps is not None and norm_compare(b, eps) < 0
    if isinstance(base, RightShift):
        onto_fails = side != "left"
        if kind == "spectrum":
            return closed_disc if onto_fails else empty
        if kind == "pseudospectrum":
            if onto_fails:
                return closed_disc | eps_disc
            return eps_disc if beta_below_eps else empty
        if eps > 1:
            return whole
        return closed_disc if onto_fails else empty
    injective_fails = side != "right"
    if kind == "spectrum":
        return open_disc if injective_fails else empty
    if kind == "pseudospectrum":
        if injective_fails:
            return open_disc | eps_disc
        return eps_disc if beta_below_eps else empty
    if eps > 1:
        return whole
    return open_disc if injective_fails else empty


# --- scanning ---------------------------------------------------------------


def grid_points(p: int, units: Iterable | None = None, valuations: Iterable[int] = range(-3, 4)) -> list[Fraction]:
    """``0`` together with every ``u * p**v``."""
    units = [to_fraction(u) for u in (units if units is not None else [*range(1, p), 1 + p])]
    pts = [Fraction(0)]
    for v in valuations:
        for u in units:
            pts.append(u * Fraction(p) ** v)
    return pts


COLUMNS = ("sigma_l", "sigma_r", "sigma_eps_l", "sigma_eps_r", "lambda_eps_l", "lambda_eps_r")


@dataclass
class RegionRow:
    lam: Fraction
    members: dict | None
    shifted_norm: PNormValue | None = None
    min_left: PNormValue | None = None
    min_right: PNormValue | None = None
    error: str | None = None

    def inclusions_hold(self) -> bool:
        if self.members is None:
            return True
        m = self.members
        return all(
            not m[small] or m[big]
            for small, big in [
                ("sigma_l", "sigma_eps_l"),
                ("sigma_r", "sigma_eps_r"),
                ("sigma_l", "lambda_eps_l"),
                ("sigma_r", "lambda_eps_r"),
            ]
        )


@dataclass
class RegionReport:
    p: int
    eps: Fraction
    grid: list
    rows: list = field(default_factory=list)

    def check_invariants(self) -> bool:
        return len(self.rows) == len(self.grid) and all(r.inclusions_hold() for r in self.rows)


def scan_row(A: OperatorExpr, lam, eps) -> RegionRow:
    lam, eps = to_fraction(lam), _eps(eps)
    try:
        shifted = shift_by_lambda(A, lam)
        left, right = decide(shifted, "left"), decide(shifted, "right")
        n = op_norm(shifted)
    except UltraspecError as exc:
        return RegionRow(lam, None, error=f"{type(exc).__name__}: {exc}")
    members = {
        "sigma_l": not left.invertible,
        "sigma_r": not right.invertible,
        "sigma_eps_l": _pseudo_from(left, eps),
        "sigma_eps_r": _pseudo_from(right, eps),
        "lambda_eps_l": _condition_from(left, n, eps),
        "lambda_eps_r": _condition_from(right, n, eps),
    }
    return RegionRow(lam, members, n, left.min_inverse_norm, right.min_inverse_norm)


def scan(A: OperatorExpr, grid: Iterable, eps) -> RegionReport:
    """Evaluate every spectral set at each grid point; rows never abort the scan."""
    grid = [to_fraction(g) for g in grid]
    report = RegionReport(A.p, _eps(eps), grid)
    report.rows = [scan_row(A, lam, eps) for lam in grid]
    return report
