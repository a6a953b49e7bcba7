from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

import oracles
from strategies import PRIMES, padic_rationals, prime_and_matrix
from ultraspec.errors import (
    InSpectrum,
    NotInConditionPseudospectrum,
    NotInPseudospectrum,
    ScalarOperator,
    UnknownLaw,
    UnsupportedFamily,
)
from ultraspec.operators import Diagonal, LeftShift, Matrix, RightShift, apply, materialize_matrix, op_norm, shift_by_lambda
from ultraspec.padic import PNormValue
from ultraspec.perturbation import (
    LAWS,
    LawInstance,
    canned_instances,
    condition_destabilizer,
    condition_witness,
    destabilizer,
    law_check,
    mutation_self_test,
    pseudo_witness,
    random_bounded_perturbation,
    singular,
    standard_ensemble,
)
from ultraspec.sequence import FinSuppVector
from ultraspec.spectral import in_condition_pseudospectrum, in_pseudospectrum

D15 = Matrix(5, [[1, 0], [0, 5]])


def v(entries, p=5, n=None):
    return FinSuppVector(p, entries, n)


class TestWitnesses:
    def test_scalar_on_c0(self):
        # |0 - 25|_5 = 1/25 < 1/5
        assert pseudo_witness(Diagonal(5, [], 0), 25, Fraction(1, 5)) == v({0: 1})
        with pytest.raises(NotInPseudospectrum):
            pseudo_witness(Diagonal(5, [], 0), Fraction(1, 25), Fraction(1, 5))

    def test_matrix_inverse_column(self):
        x = pseudo_witness(D15, 0, Fraction(1, 2))
        assert x == v({1: Fraction(1, 5)}, n=2)
        assert condition_witness(D15, 0, Fraction(1, 2)) == x

    def test_identity_near_one(self):
        assert pseudo_witness(Diagonal(5, [], 1), 6, 1) == v({0: 1})
        x = pseudo_witness(Matrix.identity(5, 1), 6, 1)
        ratio = apply(shift_by_lambda(Matrix.identity(5, 1), 6), x).sup_norm() * x.sup_norm().inverse()
        assert ratio == PNormValue(5, -1)

    def test_preconditions(self):
        with pytest.raises(InSpectrum):
            pseudo_witness(D15, 1, 1)
        with pytest.raises(InSpectrum):
            condition_witness(Diagonal(5, [1], Fraction(1, 5)), 1, Fraction(1, 5))
        with pytest.raises(NotInConditionPseudospectrum):
            condition_witness(RightShift(5), 0, 1)

    @given(prime_and_matrix(), st.data())
    def test_witness_strictness(self, pm, data):
        p, A = pm
        lam = data.draw(padic_rationals(p))
        eps = Fraction(p) ** data.draw(st.integers(-3, 3))
        shifted = shift_by_lambda(A, lam)
        assume(oracles.det([list(r) for r in shifted.rows]) != 0)
        if in_pseudospectrum(A, lam, eps):
            x = pseudo_witness(A, lam, eps)
            assert apply(shifted, x).sup_norm().to_fraction() < eps * x.sup_norm().to_fraction()
        if in_condition_pseudospectrum(A, lam, eps):
            x = condition_witness(A, lam, eps)
            n = oracles.mat_norm(shifted.rows, p)
            assert apply(shifted, x).sup_norm().to_fraction() < eps * n * x.sup_norm().to_fraction()


class TestDestabilizers:
    def test_worked_example(self):
        d = destabilizer(D15, 0, Fraction(1, 2))
        assert materialize_matrix(d.C) == Matrix(5, [[0, 0], [0, -5]])
        assert d.norm == PNormValue(5, -1) and d.norm_bound_checked
        assert materialize_matrix(d.perturbed()) == Matrix(5, [[1, 0], [0, 0]])
        assert condition_destabilizer(D15, 0, Fraction(1, 2)).C == d.C

    def test_spectral_point_needs_no_perturbation(self):
        for build in (destabilizer, condition_destabilizer):
            d = build(Matrix(3, [[1, 2], [2, 4]]), 0, Fraction(1, 9))
            assert d.norm.is_zero and apply(Matrix(3, [[1, 2], [2, 4]]), d.kernel_witness).is_zero()

    def test_right_shift_on_unit_circle(self):
        S = RightShift(5)
        d = destabilizer(S, 1, 5)
        assert d.u == v({0: 1, 1: -1}) and d.kernel_witness == v({0: 1})
        assert apply(shift_by_lambda(d.perturbed(), 1), d.kernel_witness).is_zero()

    def test_left_shift_kernel(self):
        d = destabilizer(LeftShift(5), 5, Fraction(1, 5))
        assert d.norm.is_zero
        assert apply(shift_by_lambda(LeftShift(5), 5), d.kernel_witness).is_zero()

    def test_contracts(self):
        with pytest.raises(NotInPseudospectrum):
            destabilizer(RightShift(5), 0, 1)
        with pytest.raises(UnsupportedFamily):
            destabilizer(RightShift(5), 0, 5, side="right")
        with pytest.raises(ScalarOperator):
            condition_destabilizer(Matrix.identity(5, 2), 1, 1)

    def test_right_side_for_matrices(self):
        d = destabilizer(D15, 0, Fraction(1, 2), side="right")
        assert singular(materialize_matrix(d.perturbed()))

    @given(prime_and_matrix(), st.data())
    def test_soundness(self, pm, data):
        p, A = pm
        lam = data.draw(padic_rationals(p))
        eps = Fraction(p) ** data.draw(st.integers(-3, 3))
        for in_set, build, bound in (
            (in_pseudospectrum, destabilizer, eps),
            (in_condition_pseudospectrum, condition_destabilizer, eps * op_norm(shift_by_lambda(A, lam)).to_fraction()),
        ):
            if not in_set(A, lam, eps) or bound == 0:
                continue
            d = build(A, lam, eps)
            C = materialize_matrix(d.C)
            assert oracles.mat_norm(C.rows, p) < bound
            shifted = shift_by_lambda(A, lam) + C
            assert oracles.det([list(r) for r in shifted.rows]) == 0
            assert not d.kernel_witness.is_zero() and apply(shifted, d.kernel_witness).is_zero()


class TestSampling:
    def test_strict_bound_forces_valuation(self):
        for seed in range(30):
            C = random_bounded_perturbation(seed, "matrix", Fraction(1, 5), 5, 3)
            assert all(q == 0 or oracles.absp(q, 5) <= Fraction(1, 25) for row in C.rows for q in row)

    def test_deterministic(self):
        assert random_bounded_perturbation(7, "matrix", 1, 3, 3) == random_bounded_perturbation(7, "matrix", 1, 3, 3)
        a = random_bounded_perturbation(7, "rank_one", 1, 3)
        b = random_bounded_perturbation(7, "rank_one", 1, 3)
        assert (a.u, a.phi) == (b.u, b.phi)

    @given(st.integers(0, 10**6), st.sampled_from(PRIMES), st.fractions(min_value=Fraction(1, 1000), max_value=10**9))
    def test_norm_below_bound(self, seed, p, bound):
        assume(bound > 0)
        C = random_bounded_perturbation(seed, "matrix", bound, p, 3)
        assert op_norm(C).to_fraction() < bound
        R = random_bounded_perturbation(seed, "rank_one", bound, p)
        assert R.rank_one_norm().to_fraction() < bound


@given(prime_and_matrix())
def test_singular_matches_cofactor_determinant(pm):
    _, A = pm
    assert singular(A) == (oracles.det([list(r) for r in A.rows]) == 0)


def test_singular_on_rank_deficient():
    assert singular(Matrix(2, [[1, 2, 3], [2, 4, 6], [0, 1, 1]]))
    assert not singular(Matrix(2, [[1, 0], [0, Fraction(1, 1024)]]))


class TestLaws:
    def test_worked_example(self):
        verdict = law_check("L13", LawInstance(D15, 0, Fraction(1, 2), samples=50))
        assert verdict.passed and "destabilizer certified" in verdict.detail

    def test_nesting_example(self):
        assert law_check("L11ii", LawInstance(RightShift(5), 1, Fraction(1, 5), eps2=5)).passed

    def test_l12_many_samples(self):
        A = Matrix(3, [[1, 3, 0], [0, Fraction(1, 3), 1], [9, 0, 2]])
        for lam, eps in ((0, Fraction(1, 3)), (1, 1), (Fraction(1, 3), 3)):
            verdict = law_check("L12", LawInstance(A, lam, eps, samples=300, seed=4))
            assert verdict.passed, verdict.detail

    def test_unknown_law(self):
        with pytest.raises(UnknownLaw):
            law_check("L99", LawInstance(D15))

    def test_contract_errors_become_failures(self):
        verdict = law_check("L12", LawInstance(RightShift(5)))
        assert not verdict.passed and "UnsupportedFamily" in verdict.detail
        assert verdict.counterexample["law"] == "L12"

    def test_instance_round_trip(self):
        inst = LawInstance(D15, Fraction(2, 5), 3, eps2=9, alpha=1, beta=Fraction(1, 5), seed=11)
        assert LawInstance.from_json(inst.to_json()).to_json() == inst.to_json()

    def test_counterexample_is_replayable(self):
        verdict = law_check("L17i", LawInstance(Matrix(2, [[1, 0], [0, 1024]]), 0, 1))
        replay = law_check(verdict.law_id, LawInstance.from_json(verdict.instance))
        assert replay.passed == verdict.passed and replay.detail == verdict.detail

    def test_ladder_limited_failures_are_labelled(self):
        # ||A^{-1}|| = 2^10 sits far beyond the default ladder depth of 6
        verdict = law_check("L11i", LawInstance(Matrix(2, [[1, 0], [0, 1024]]), 0, 1))
        assert not verdict.passed and verdict.ladder_limited and "k0 = 10" in verdict.detail
        deep = law_check("L11i", LawInstance(Matrix(2, [[1, 0], [0, 1024]]), 0, 1, ladder=10))
        assert deep.passed

    def test_mutation_flips_a_law(self):
        assert mutation_self_test()
        assert all(law_check(law, inst).passed for law, inst in canned_instances())

    def test_ensemble_is_seeded_and_covers_every_law(self):
        a = standard_ensemble(3, matrices_per_prime=2)
        b = standard_ensemble(3, matrices_per_prime=2)
        assert [(l, i.to_json()) for l, i in a] == [(l, i.to_json()) for l, i in b]
        assert {l for l, _ in a} == set(LAWS)
