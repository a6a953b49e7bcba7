"""Witness vectors, rank-one destabilizers, seeded perturbations and the law suite.

Destabilizers follow the kernel construction: normalize a vector ``x`` with a
small image, take the unit coordinate functional ``phi`` of the normalized
``z`` and set ``C y = -phi(y) (A - lam) z``, so that ``(A - lam + C) z = 0``.

Singularity of finite matrices is always re-checked with ``singular``, which
does not share code with the inverse engine: a determinant modulo a large
prime rules out singularity quickly, and the Leibniz expansion decides the
remaining cases exactly.
"""

from __future__ import annotations

import itertools
import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .errors import (
    CertificateFailure,
    InSpectrum,
    NotInConditionPseudospectrum,
    NotInPseudospectrum,
    ScalarOperator,
    UltraspecError,
    UnknownLaw,
    UnsupportedFamily,
)
from .inverse import ExactInverse, KernelVector, decide, mutated_min_inverse_norm
from .operators import (
    Diagonal,
    Matrix,
    OperatorExpr,
    add_rank_one,
    affine,
    apply,
    fold,
    materialize_matrix,
    op_norm,
    shift_by_lambda,
    shift_pencil,
)
from .padic import PNormValue, largest_power_below, norm_compare, pnorm, to_fraction
from .sequence import FinSuppVector, Functional, normalize, unit_functional
from .spectral import (
    SIDES,
    _condition_from,
    _pseudo_from,
    c_A,
    grid_points,
    in_condition_pseudospectrum,
    in_pseudospectrum,
    in_spectrum,
)

log = logging.getLogger(__name__)

_MODULUS = (1 << 61) - 1


# --- determinant oracle -----------------------------------------------------


def leibniz_det(rows) -> Fraction:
    n = len(rows)
    total = Fraction(0)
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Fraction(-1 if inversions % 2 else 1)
        for i, j in enumerate(perm):
            term *= rows[i][j]
            if term == 0:
                break
        total += term
    return total


def _det_mod(rows, q: int) -> int:
    a = []
    for row in rows:
        scale = math.lcm(*(Fraction(x).denominator for x in row))
        a.append([int(Fraction(x) * scale) % q for x in row])
    n, det = len(a), 1
    for k in range(n):
        piv = next((r for r in range(k, n) if a[r][k]), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det = det * a[k][k] % q
        inv = pow(a[k][k], -1, q)
        for r in range(k + 1, n):
            f = a[r][k] * inv % q
            if f:
                a[r] = [(x - f * y) % q for x, y in zip(a[r], a[k])]
    return det % q


def singular(M: Matrix) -> bool:
    """Exact singularity test independent of the inverse engine."""
    if _det_mod(M.rows, _MODULUS):
        return False
    return leibniz_det(M.rows) == 0


# --- witnesses --------------------------------------------------------------


def _small_image_vector(shifted: OperatorExpr, verdict) -> FinSuppVector:
    p = shifted.p
    cert = verdict.certificate
    if isinstance(cert, ExactInverse):
        M = cert.matrix
        best = M.entry_norm()
        j = next(j for j in range(M.n) if M.column(j).sup_norm() == best)
        return M.column(j)
    if isinstance(shifted, Diagonal):
        vals = shifted.values()
        i = min(range(len(vals)), key=lambda k: (pnorm(vals[k], p), k))
        return FinSuppVector.basis(p, i)
    if shift_pencil(shifted) is not None:
        # scaled isometry: every vector has the extremal ratio
        return FinSuppVector.basis(p, 0)
    raise UnsupportedFamily(f"no witness construction for {type(shifted).__name__}")


def _shrinks(shifted: OperatorExpr, x, factor: Fraction) -> bool:
    """``||shifted x|| < factor * ||x||`` exactly."""
    threshold = factor * x.sup_norm().to_fraction()
    return threshold > 0 and norm_compare(apply(shifted, x).sup_norm(), threshold) < 0


def pseudo_witness(A: OperatorExpr, lam, eps) -> FinSuppVector:
    """Nonzero ``x`` with ``||(A - lam) x|| < eps ||x||``."""
    lam, eps = to_fraction(lam), to_fraction(eps)
    shifted = shift_by_lambda(A, lam)
    verdict = decide(shifted, "left")
    if not verdict.invertible:
        raise InSpectrum("lambda is in the left spectrum; use the kernel certificate")
    if not _pseudo_from(verdict, eps):
        raise NotInPseudospectrum("lambda is not in the left pseudospectrum")
    x = _small_image_vector(shifted, verdict)
    if not _shrinks(shifted, x, eps):
        raise CertificateFailure("witness does not satisfy the strict inequality")
    return x


def condition_witness(A: OperatorExpr, lam, eps) -> FinSuppVector:
    """Nonzero ``x`` with ``||(A - lam) x|| < eps ||A - lam|| ||x||``."""
    lam, eps = to_fraction(lam), to_fraction(eps)
    shifted = shift_by_lambda(A, lam)
    verdict = decide(shifted, "left")
    if not verdict.invertible:
        raise InSpectrum("lambda is in the left spectrum; use the kernel certificate")
    n = op_norm(shifted)
    if not _condition_from(verdict, n, eps):
        raise NotInConditionPseudospectrum("lambda is not in the left condition pseudospectrum")
    x = _small_image_vector(shifted, verdict)
    if not _shrinks(shifted, x, eps * n.to_fraction()):
        raise CertificateFailure("witness does not satisfy the strict inequality")
    return x


# --- destabilizers ----------------------------------------------------------


def _zero_operator(A: OperatorExpr) -> OperatorExpr:
    return Matrix.zeros(A.p, A.n) if A.n is not None else Diagonal(A.p, [], 0)


@dataclass(frozen=True)
class Destabilizer:
    """Rank-one ``C y = phi(y) u`` with ``(A - lam + C) z = 0``."""

    A: OperatorExpr
    lam: Fraction
    eps: Fraction
    mode: str
    u: FinSuppVector
    phi: Functional
    kernel_witness: object
    norm: PNormValue
    bound: Fraction
    norm_bound_checked: bool

    @property
    def C(self) -> OperatorExpr:
        return add_rank_one(_zero_operator(self.A), self.u, self.phi)

    def perturbed(self) -> OperatorExpr:
        """``A + C``."""
        return add_rank_one(self.A, self.u, self.phi)


def _destabilize(A, lam, eps, mode: str, side: str) -> Destabilizer:
    lam, eps = to_fraction(lam), to_fraction(eps)
    if side not in ("left", "right"):
        raise ValueError("side must be left or right")
    if side == "right" and A.n is None:
        raise UnsupportedFamily("right-sided destabilizers are certified only for matrices")
    shifted = shift_by_lambda(A, lam)
    p = A.p
    shifted_norm = op_norm(shifted)
    bound = eps if mode == "pseudo" else eps * shifted_norm.to_fraction()
    if bound == 0:
        raise ScalarOperator("A - lam I = 0, so no perturbation has norm below eps ||A - lam I||")
    verdict = decide(shifted, "left")
    if not verdict.invertible:
        # lam already in the left spectrum: C = 0
        z = verdict.certificate.vector
        u, phi = FinSuppVector(p, {}, A.n), Functional(p)
    else:
        if mode == "pseudo":
            x = pseudo_witness(A, lam, eps)
        else:
            x = condition_witness(A, lam, eps)
        z, _ = normalize(x)
        phi = unit_functional(z)
        u = -apply(shifted, z)
    norm = phi.norm() * u.sup_norm()
    checked = norm_compare(norm, bound) < 0
    if not checked:
        raise CertificateFailure(f"||C|| = {norm} is not below {bound}")
    if not apply(add_rank_one(shifted, u, phi), z).is_zero():
        raise CertificateFailure("kernel witness is not annihilated")
    if A.n is not None and not singular(materialize_matrix(add_rank_one(shifted, u, phi))):
        raise CertificateFailure("perturbed matrix is not singular")
    return Destabilizer(A, lam, eps, mode, u, phi, z, norm, bound, checked)


def destabilizer(A: OperatorExpr, lam, eps, side: str = "left") -> Destabilizer:
    """``C`` with ``||C|| < eps`` and ``lam`` in the left spectrum of ``A + C``."""
    if not in_pseudospectrum(A, lam, eps, side):
        raise NotInPseudospectrum("lambda is not in the pseudospectrum")
    return _destabilize(A, lam, eps, "pseudo", side)


def condition_destabilizer(A: OperatorExpr, lam, eps, side: str = "left") -> Destabilizer:
    """``C`` with ``||C|| < eps ||A - lam||`` and ``lam`` in the left spectrum of ``A + C``."""
    if not in_condition_pseudospectrum(A, lam, eps, side):
        raise NotInConditionPseudospectrum("lambda is not in the condition pseudospectrum")
    return _destabilize(A, lam, eps, "condition", side)


# --- sampling ---------------------------------------------------------------


def _random_unit(rng: random.Random, p: int) -> int:
    return rng.choice((-1, 1)) * (rng.randint(1, p - 1) + p * rng.randint(0, 2))


def random_scalar(rng: random.Random, p: int, vmin: int = -3, vmax: int = 3, zero_rate: float = 0.0) -> Fraction:
    if zero_rate and rng.random() < zero_rate:
        return Fraction(0)
    return _random_unit(rng, p) * Fraction(p) ** rng.randint(vmin, vmax)


def random_bounded_perturbation(seed: int, shape: str, bound, p: int, n: int | None = None) -> OperatorExpr:
    """Seeded operator with exact norm strictly below ``bound``.

    ``shape`` is ``"matrix"`` (needs ``n``) or ``"rank_one"`` (on c_0). Entries
    are ``unit * p**v`` with ``v`` drawn from [-3, 3] and raised where needed.
    """
    bound = to_fraction(bound)
    rng = random.Random(seed)
    log.debug("perturbation seed=%d shape=%s bound=%s p=%d", seed, shape, bound, p)

    def entry(vmin: int) -> Fraction:
        if rng.random() < 1 / 3:
            return Fraction(0)
        v = max(rng.randint(-3, 3), vmin)
        return _random_unit(rng, p) * Fraction(p) ** v

    if shape == "matrix":
        vmin = -largest_power_below(bound, p)
        return Matrix(p, [[entry(vmin) for _ in range(n)] for _ in range(n)])
    if shape == "rank_one":
        u = FinSuppVector(p, {i: entry(-3) for i in range(5)})
        if u.is_zero():
            u = FinSuppVector.basis(p, rng.randrange(5))
        vmin = -largest_power_below(bound / u.sup_norm().to_fraction(), p)
        phi = Functional(p, {i: entry(vmin) for i in range(5)})
        if not phi.coefficients:
            phi = Functional(p, {rng.randrange(5): _random_unit(rng, p) * Fraction(p) ** max(vmin, 0)})
        return add_rank_one(Diagonal(p, [], 0), u, phi)
    raise ValueError(f"unknown shape {shape!r}")


def _matrix_candidates(A: Matrix, lam: Fraction, bound: Fraction, seed: int, count: int):
    """Seeded perturbations of norm < bound: half generic, half rank-one ones that make ``A - lam + C`` singular."""
    p, n = A.p, A.n
    shifted = shift_by_lambda(A, lam)
    rng = random.Random(seed)
    try:
        inv = decide(shifted, "left").certificate
        inv = inv.matrix if isinstance(inv, ExactInverse) else None
    except UltraspecError:
        inv = None
    def targeted() -> Matrix | None:
        w = FinSuppVector(p, {i: random_scalar(rng, p, zero_rate=0.3) for i in range(n)}, n)
        if w.is_zero():
            w = FinSuppVector.basis(p, rng.randrange(n), n)
        z = apply(inv, w) if inv is not None and rng.random() < 0.7 else w
        phi = unit_functional(z)
        if rng.random() < 0.3:
            # another functional with phi(z) = 1, of larger norm
            j = rng.randrange(n)
            coeffs = phi.as_dict()
            coeffs[j] = coeffs.get(j, 0) + random_scalar(rng, p)
            phi = Functional(p, coeffs)
            if phi(z) == 0:
                return None
            phi = phi.scale(1 / phi(z))
        C = add_rank_one(Matrix.zeros(p, n), -apply(shifted, z), phi)
        return C if norm_compare(C.entry_norm(), bound) < 0 else None

    for k in range(count):
        C = targeted() if k % 2 else None
        # out-of-bound targeted draws are replaced, so exactly ``count`` are emitted
        yield C if C is not None else random_bounded_perturbation(rng.randrange(2**32), "matrix", bound, p, n)


# --- laws -------------------------------------------------------------------


@dataclass
class LawInstance:
    A: OperatorExpr
    lam: Fraction = Fraction(0)
    eps: Fraction = Fraction(1)
    eps2: Fraction | None = None
    alpha: Fraction = Fraction(0)
    beta: Fraction = Fraction(1)
    seed: int = 0
    samples: int = 100
    ladder: int = 6

    def __post_init__(self):
        self.lam, self.eps = to_fraction(self.lam), to_fraction(self.eps)
        self.alpha, self.beta = to_fraction(self.alpha), to_fraction(self.beta)
        if self.eps2 is not None:
            self.eps2 = to_fraction(self.eps2)

    def to_json(self) -> dict:
        from .serialize import op_to_json, rational

        doc = {
            "p": self.A.p,
            "op": op_to_json(self.A),
            "lambda": rational(self.lam),
            "epsilon": rational(self.eps),
            "alpha": rational(self.alpha),
            "beta": rational(self.beta),
            "seed": self.seed,
            "samples": self.samples,
            "ladder": self.ladder,
        }
        if self.eps2 is not None:
            doc["epsilon2"] = rational(self.eps2)
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "LawInstance":
        from .padic import parse_rational
        from .serialize import op_from_json

        p = doc["p"]
        return cls(
            A=op_from_json(doc["op"], p),
            lam=parse_rational(doc.get("lambda", "0")),
            eps=parse_rational(doc.get("epsilon", "1")),
            eps2=parse_rational(doc["epsilon2"]) if "epsilon2" in doc else None,
            alpha=parse_rational(doc.get("alpha", "0")),
            beta=parse_rational(doc.get("beta", "1")),
            seed=doc.get("seed", 0),
            samples=doc.get("samples", 100),
            ladder=doc.get("ladder", 6),
        )


@dataclass
class LawVerdict:
    law_id: str
    instance: dict
    passed: bool
    detail: str = ""
    counterexample: dict | None = None
    # failure caused only by the finite eps ladder, with the certified exit depth in detail
    ladder_limited: bool = False

    def to_json(self) -> dict:
        return {
            "law": self.law_id,
            "pass": self.passed,
            "ladder_limited": self.ladder_limited,
            "detail": self.detail,
            "instance": self.instance,
            "counterexample": self.counterexample,
        }


def _implies(a: bool, b: bool) -> bool:
    return b or not a


def _law_inclusions(inst: LawInstance, pred) -> tuple[bool, str]:
    A, lam, eps = inst.A, inst.lam, inst.eps
    for side in ("left", "right"):
        spec = in_spectrum(A, lam, side)
        one = pred(A, lam, eps, side)
        two = pred(A, lam, eps, "two_sided")
        if not (_implies(spec, one) and _implies(one, two)):
            return False, f"{side}: spectrum={spec} one-sided={one} two-sided={two}"
    return True, "inclusions hold on both sides"


def _law_intersection(inst: LawInstance, pred) -> tuple[bool, str]:
    A, lam, p = inst.A, inst.lam, inst.A.p
    for side in ("left", "right"):
        ladder = [pred(A, lam, Fraction(1, p**k), side) for k in range(inst.ladder + 1)]
        if in_spectrum(A, lam, side):
            if not all(ladder):
                return False, f"{side}: spectral point dropped out of the ladder {ladder}"
        elif ladder[-1]:
            depth = _exit_depth(A, lam, side, pred, inst.ladder)
            return False, f"{side}: still a member at eps = p^-{inst.ladder}; leaves the set from k0 = {depth}", True
    return True, "ladder consistent"


def _exit_depth(A, lam, side, pred, start: int) -> int:
    """Smallest k0 with non-membership for every eps = p^-k, k >= k0 (off-spectrum points)."""
    k = start
    while pred(A, lam, Fraction(1, A.p**k), side):
        k += 1
    return k


def _law_nesting(inst: LawInstance, pred) -> tuple[bool, str]:
    A, lam, e1, e2 = inst.A, inst.lam, inst.eps, inst.eps2
    if e2 is None or not e1 < e2:
        raise ValueError("nesting laws need eps < eps2")
    for side in SIDES:
        spec = in_spectrum(A, lam, side)
        m1, m2 = pred(A, lam, e1, side), pred(A, lam, e2, side)
        if not (_implies(spec, m1) and _implies(m1, m2)):
            return False, f"{side}: spectrum={spec} eps1={m1} eps2={m2}"
    return True, "nested"


def law_L12(inst: LawInstance) -> tuple[bool, str]:
    A, lam, eps = inst.A, inst.lam, inst.eps
    if not isinstance(A, Matrix):
        raise UnsupportedFamily("perturbation sampling needs a finite matrix")
    member = in_pseudospectrum(A, lam, eps, "left")
    shifted = shift_by_lambda(A, lam)
    tried = hits = 0
    for C in _matrix_candidates(A, lam, eps, inst.seed, inst.samples):
        tried += 1
        if singular(shifted + C):
            hits += 1
            if not member:
                from .serialize import op_to_json

                return False, f"singular A + C - lam with ||C|| < eps but lam not in the pseudospectrum; C={op_to_json(C)}"
    return True, f"{tried} perturbations, {hits} singular, member={member}"


def _recheck_destabilizer(d: Destabilizer) -> str | None:
    shifted_plus_c = add_rank_one(shift_by_lambda(d.A, d.lam), d.u, d.phi)
    if norm_compare(d.phi.norm() * d.u.sup_norm(), d.bound) >= 0:
        return "norm bound fails"
    if d.kernel_witness.is_zero() or not apply(shifted_plus_c, d.kernel_witness).is_zero():
        return "kernel witness fails"
    if d.A.n is not None and not singular(materialize_matrix(shifted_plus_c)):
        return "determinant is nonzero"
    return None


def law_L13(inst: LawInstance) -> tuple[bool, str]:
    A, lam, eps = inst.A, inst.lam, inst.eps
    notes = []
    if in_pseudospectrum(A, lam, eps, "left"):
        problem = _recheck_destabilizer(destabilizer(A, lam, eps))
        if problem:
            return False, f"destabilizer: {problem}"
        notes.append("destabilizer certified")
    if isinstance(A, Matrix):
        ok, detail = law_L12(inst)
        if not ok:
            return ok, detail
        notes.append(detail)
    return True, "; ".join(notes) or "lambda outside the pseudospectrum"


def law_L18(inst: LawInstance) -> tuple[bool, str]:
    A, lam, eps = inst.A, inst.lam, inst.eps
    n = op_norm(shift_by_lambda(A, lam))
    if n.is_zero:
        return True, "precondition ||A - lam|| != 0 not met (vacuous)"
    nf = n.to_fraction()
    a = in_condition_pseudospectrum(A, lam, eps) == in_pseudospectrum(A, lam, eps * nf)
    b = in_pseudospectrum(A, lam, eps) == in_condition_pseudospectrum(A, lam, eps / nf)
    return a and b, f"(i) {a}, (ii) {b}"


def law_L19(inst: LawInstance) -> tuple[bool, str]:
    A, lam, eps, alpha, beta = inst.A, inst.lam, inst.eps, inst.alpha, inst.beta
    B = affine(A, alpha, beta)
    mu = alpha + beta * lam
    cond = in_condition_pseudospectrum(B, mu, eps) == in_condition_pseudospectrum(A, lam, eps)
    # pseudospectrum analogue: the inverse norm scales by 1/|beta|
    scaled = eps / pnorm(beta, A.p).to_fraction()
    pseudo = in_pseudospectrum(B, mu, eps) == in_pseudospectrum(A, lam, scaled)
    return cond and pseudo, f"condition covariance {cond}, pseudospectrum analogue {pseudo}"


def law_L20(inst: LawInstance) -> tuple[bool, str]:
    A, lam, eps = inst.A, inst.lam, inst.eps
    try:
        ca = c_A(A)
    except ScalarOperator:
        return True, "scalar operator (vacuous)"
    ok = _implies(in_pseudospectrum(A, lam, eps), in_condition_pseudospectrum(A, lam, eps / ca.to_fraction()))
    return ok, f"C_A = {ca}"


def law_L21(inst: LawInstance) -> tuple[bool, str]:
    A, lam, eps = inst.A, inst.lam, inst.eps
    if in_spectrum(A, lam) or not in_condition_pseudospectrum(A, lam, eps):
        return True, "precondition not met (vacuous)"
    x = condition_witness(A, lam, eps)
    shifted = shift_by_lambda(A, lam)
    ok = not x.is_zero() and _shrinks(shifted, x, eps * op_norm(shifted).to_fraction())
    return ok, "witness strict" if ok else "witness fails the strict inequality"


def _l22_candidates(inst: LawInstance):
    """Perturbations with a certificate that ``lam`` is in the left spectrum of ``A + C``."""
    A, lam, eps, p = inst.A, inst.lam, inst.eps, inst.A.p
    shifted = shift_by_lambda(A, lam)
    for k in (-2, -1, 1, 2):
        other = eps * Fraction(p) ** k
        try:
            d = condition_destabilizer(A, lam, other)
        except (NotInConditionPseudospectrum, ScalarOperator):
            continue
        yield add_rank_one(_zero_operator(A), d.u, d.phi), d.kernel_witness
    if isinstance(A, Matrix):
        bound = eps * op_norm(shifted).to_fraction()
        for C in _matrix_candidates(A, lam, bound, inst.seed, inst.samples):
            yield C, None


def law_L22(inst: LawInstance) -> tuple[bool, str]:
    A, lam, eps = inst.A, inst.lam, inst.eps
    shifted = shift_by_lambda(A, lam)
    n = op_norm(shifted)
    if n.is_zero:
        return True, "precondition ||A - lam|| != 0 not met (vacuous)"
    bound = eps * n.to_fraction()
    member = in_condition_pseudospectrum(A, lam, eps)
    used = 0
    for C, z in _l22_candidates(inst):
        if norm_compare(op_norm(C), bound) >= 0:
            continue
        if isinstance(A, Matrix):
            certified = singular(shifted + materialize_matrix(C))
        else:
            certified = not z.is_zero() and (apply(shifted, z) + apply(C, z)).is_zero()
        if certified:
            used += 1
            if not member:
                return False, "||C|| < eps ||A - lam|| and lam in the left spectrum of A + C, but lam not in the condition pseudospectrum"
    return True, f"{used} certified perturbations, member={member}"


def law_L23(inst: LawInstance) -> tuple[bool, str]:
    A, lam, eps = inst.A, inst.lam, inst.eps
    if op_norm(shift_by_lambda(A, lam)).is_zero:
        return True, "precondition ||A - lam|| != 0 not met (vacuous)"
    notes = []
    if in_condition_pseudospectrum(A, lam, eps):
        problem = _recheck_destabilizer(condition_destabilizer(A, lam, eps))
        if problem:
            return False, f"condition destabilizer: {problem}"
        notes.append("condition destabilizer certified")
    ok, detail = law_L22(inst)
    notes.append(detail)
    return ok, "; ".join(notes)


LAWS: dict[str, Callable[[LawInstance], tuple[bool, str]]] = {
    "L10": lambda i: _law_inclusions(i, in_pseudospectrum),
    "L16": lambda i: _law_inclusions(i, in_condition_pseudospectrum),
    "L11i": lambda i: _law_intersection(i, in_pseudospectrum),
    "L17i": lambda i: _law_intersection(i, in_condition_pseudospectrum),
    "L11ii": lambda i: _law_nesting(i, in_pseudospectrum),
    "L17ii": lambda i: _law_nesting(i, in_condition_pseudospectrum),
    "L12": law_L12,
    "L13": law_L13,
    "L18": law_L18,
    "L19": law_L19,
    "L20": law_L20,
    "L21": law_L21,
    "L22": law_L22,
    "L23": law_L23,
}


def law_check(law_id: str, instance: LawInstance) -> LawVerdict:
    """Run one law on one instance; contract errors count as failures."""
    if law_id not in LAWS:
        raise UnknownLaw(f"unknown law {law_id!r}")
    doc = instance.to_json()
    limited = False
    try:
        passed, detail, *rest = LAWS[law_id](instance)
        limited = bool(rest and rest[0])
    except (UltraspecError, AssertionError) as exc:
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    counter = None if passed else {"law": law_id, **doc}
    return LawVerdict(law_id, doc, passed, detail, counter, limited)


# --- ensembles --------------------------------------------------------------

MATRIX_ONLY = {"L12"}


def random_matrix(rng: random.Random, p: int, n: int, triangular: bool = False) -> Matrix:
    rows = [[random_scalar(rng, p, -2, 2, zero_rate=0.25) for _ in range(n)] for _ in range(n)]
    if triangular:
        rows = [[q if j >= i else 0 for j, q in enumerate(row)] for i, row in enumerate(rows)]
    return Matrix(p, rows)


def _lambda_choices(rng: random.Random, A: OperatorExpr) -> list[Fraction]:
    p = A.p
    pts = [rng.choice(grid_points(p))]
    if isinstance(A, Matrix):
        d = A[rng.randrange(A.n), rng.randrange(A.n)] if rng.random() < 0.3 else A[0, 0]
        pts += [A[rng.randrange(A.n), rng.randrange(A.n)] and A[0, 0], d + Fraction(p) ** rng.randint(0, 3)]
    elif isinstance(A, Diagonal):
        v = rng.choice(A.values())
        pts += [v, v + Fraction(p) ** rng.randint(1, 3)]
    return pts


def standard_ensemble(seed: int = 0, matrices_per_prime: int = 6, samples: int = 60) -> list[tuple[str, LawInstance]]:
    """Seeded ensemble covering matrices, diagonals and shift pencils for p in {2, 3, 5}."""
    rng = random.Random(seed)
    ops: list[OperatorExpr] = []
    for p in (2, 3, 5):
        for k in range(matrices_per_prime):
            ops.append(random_matrix(rng, p, rng.randint(1, 4), triangular=k % 2 == 0))
        ops.append(Diagonal(p, [0, 1, Fraction(1, p)], p**2))
        ops.append(Diagonal(p, [3, Fraction(2, p)], 1))
        from .operators import LeftShift, RightShift

        for base in (RightShift(p), LeftShift(p)):
            ops.append(base)
            ops.append(shift_by_lambda(base, Fraction(1, p)))
            ops.append(affine(base, p, Fraction(1, p)))
    pairs = []
    for A in ops:
        p = A.p
        for lam in _lambda_choices(rng, A):
            e = Fraction(p) ** rng.randint(-2, 2)
            base = dict(A=A, lam=lam, eps=e, seed=rng.randrange(2**32), samples=samples)
            for law in LAWS:
                if law in MATRIX_ONLY and not isinstance(A, Matrix):
                    continue
                extra = {}
                if law in ("L11ii", "L17ii"):
                    extra["eps2"] = e * p ** rng.randint(1, 2)
                if law == "L19":
                    extra["alpha"] = random_scalar(rng, p)
                    extra["beta"] = random_scalar(rng, p)
                pairs.append((law, LawInstance(**base, **extra)))
    return pairs


def canned_instances() -> list[tuple[str, LawInstance]]:
    from .operators import RightShift

    return [
        ("L13", LawInstance(Matrix(5, [[1, 0], [0, 5]]), 0, Fraction(1, 5))),
        ("L13", LawInstance(RightShift(5), 0, 1)),
        ("L23", LawInstance(Matrix(3, [[1, 1], [0, 3]]), 0, Fraction(1, 3))),
        ("L11i", LawInstance(Matrix(2, [[1, 0], [0, Fraction(1, 8)]]), 0, 1, ladder=6)),
    ]


def mutation_self_test() -> list[str]:
    """Laws whose verdict flips when reported inverse norms are inflated by ``p``."""
    clean = [law_check(law, inst).passed for law, inst in canned_instances()]
    with mutated_min_inverse_norm(1):
        dirty = [law_check(law, inst).passed for law, inst in canned_instances()]
    return [law for (law, _), a, b in zip(canned_instances(), clean, dirty) if a != b]
