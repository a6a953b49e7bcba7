from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from strategies import PRIMES, matrices, padic_rationals
from ultraspec.errors import AmbientMismatch, NotFiniteDimensional, ZeroBeta
from ultraspec.operators import (
    Affine,
    Diagonal,
    LeftShift,
    Matrix,
    RankOneUpdate,
    RightShift,
    Shifted,
    add_rank_one,
    affine,
    apply,
    fold,
    materialize_matrix,
    op_norm,
    op_norm_bound,
    shift_by_lambda,
    shift_pencil,
)
from ultraspec.padic import PNormValue
from ultraspec.sequence import FinSuppVector, Functional, GeometricTailVector


def v(entries, p=5, n=None):
    return FinSuppVector(p, entries, n)


def test_apply_examples():
    assert apply(RightShift(5), v({0: 1})) == v({1: 1})
    assert apply(LeftShift(5), v({0: 1})) == v({})
    assert apply(Diagonal(5, [2], 3), v({0: 1, 5: 1})) == v({0: 2, 5: 3})


def test_norm_examples():
    assert op_norm(Matrix(5, [[1, Fraction(1, 5)], [0, 2]])) == PNormValue(5, 1)
    assert op_norm(Shifted(RightShift(5), 5)) == PNormValue(5, 0)
    zero_update = RankOneUpdate(Diagonal(5, [Fraction(1, 25)], 1), v({}), Functional(5, {0: 1}))
    assert op_norm(zero_update) == PNormValue(5, 2)


def test_materialize_examples():
    M = Matrix(5, [[1, 2], [3, 4]])
    assert materialize_matrix(M) == M
    assert materialize_matrix(Shifted(Matrix(5, [[1, 0], [0, 2]]), 1)) == Matrix(5, [[0, 0], [0, 1]])
    outer = RankOneUpdate(Matrix.zeros(5, 2), v({0: 1}, n=2), Functional(5, {1: 1}))
    assert materialize_matrix(outer) == Matrix(5, [[0, 1], [0, 0]])
    with pytest.raises(NotFiniteDimensional):
        materialize_matrix(RightShift(5))


def test_constructor_examples():
    assert shift_by_lambda(Diagonal(5, [1], 2), 1) == Diagonal(5, [0], 1)
    assert affine(RightShift(5), 0, 1) == RightShift(5)
    C = add_rank_one(Matrix.zeros(5, 2), v({0: 1}, n=2), Functional(5, {0: 1}))
    assert materialize_matrix(C) == Matrix(5, [[1, 0], [0, 0]])
    with pytest.raises(ZeroBeta):
        affine(LeftShift(5), 1, 0)


def test_folding_of_shift_expressions():
    A = affine(Shifted(RightShift(5), 2), 3, 5)  # 5(S - 2) + 3
    assert A == Affine(RightShift(5), -7, 5)
    assert shift_pencil(A) == (RightShift(5), -7, 5)
    assert fold(Shifted(Shifted(LeftShift(3), 1), 2)) == Shifted(LeftShift(3), 3)
    assert shift_by_lambda(Shifted(LeftShift(3), 1), -1) == LeftShift(3)


def test_ambient_checks():
    with pytest.raises(AmbientMismatch):
        apply(Matrix.identity(5, 2), v({0: 1}))
    with pytest.raises(AmbientMismatch):
        add_rank_one(Matrix.zeros(5, 2), v({0: 1}), Functional(5, {0: 1}))
    with pytest.raises(AmbientMismatch):
        add_rank_one(Matrix.zeros(5, 2), v({0: 1}, n=2), Functional(5, {2: 1}))


@given(st.sampled_from(PRIMES).flatmap(lambda p: st.tuples(matrices(p), st.data())))
def test_matrix_action_and_norm_match_oracle(args):
    A, data = args
    p, n = A.p, A.n
    xs = [data.draw(padic_rationals(p)) for _ in range(n)]
    x = FinSuppVector.from_list(p, xs, n)
    assert apply(A, x).to_list(n) == oracles.matvec(A.rows, xs)
    assert op_norm(A).to_fraction() == oracles.mat_norm(A.rows, p)
    assert apply(A, x).sup_norm() <= op_norm(A) * x.sup_norm()
    # norm is attained on some basis vector
    assert max(apply(A, FinSuppVector.basis(p, j, n)).sup_norm() for j in range(n)) == op_norm(A)


@given(st.sampled_from(PRIMES).flatmap(lambda p: st.tuples(matrices(p), padic_rationals(p), padic_rationals(p))))
def test_affine_and_shift_fold_match_oracle(args):
    A, alpha, beta = args
    if beta == 0:
        beta = Fraction(1)
    n = A.n
    expected = [[beta * A[i, j] + alpha * (i == j) for j in range(n)] for i in range(n)]
    assert [list(r) for r in affine(A, alpha, beta).rows] == expected
    assert [list(r) for r in shift_by_lambda(A, alpha).rows] == [[A[i, j] - alpha * (i == j) for j in range(n)] for i in range(n)]


@st.composite
def shift_pencils(draw):
    p = draw(st.sampled_from(PRIMES))
    base = draw(st.sampled_from((RightShift(p), LeftShift(p))))
    alpha = draw(padic_rationals(p))
    beta = draw(padic_rationals(p, allow_zero=False))
    return affine(base, alpha, beta)


@given(shift_pencils(), st.data())
def test_shift_pencil_action_and_norm(A, data):
    base, alpha, beta = shift_pencil(A)
    p = A.p
    xs = [data.draw(padic_rationals(p)) for _ in range(5)]
    kind = "right" if isinstance(base, RightShift) else "left"
    expected = oracles.shift_apply(kind, -alpha / beta, beta, xs)
    assert apply(A, FinSuppVector.from_list(p, xs)).to_list(6) == expected
    norm, exact = op_norm_bound(A)
    assert exact
    assert norm.to_fraction() == max(oracles.absp(alpha, p), oracles.absp(beta, p))
    probe = FinSuppVector.basis(p, 0 if kind == "right" else 1)
    assert apply(A, probe).sup_norm() == norm


@given(shift_pencils(), st.data())
def test_geometric_tail_images_agree_with_truncations(A, data):
    p = A.p
    ratio = data.draw(padic_rationals(p, 1, 3, allow_zero=False))
    x = GeometricTailVector(FinSuppVector(p, {0: 1}), 1, 1, ratio)
    L = 12
    image, truncated = apply(A, x), apply(A, x.truncate(L))
    assert all(image.coefficient(j) == truncated.coefficient(j) for j in range(L - 1))


def test_rank_one_update_on_c0():
    A = add_rank_one(RightShift(5), v({0: 1}), Functional(5, {0: -1}))  # S - e_0 e_0^*
    assert isinstance(A, RankOneUpdate)
    assert apply(A, v({0: 1})) == v({0: -1, 1: 1})
    assert op_norm_bound(A) == (PNormValue(5, 0), False)
    B = add_rank_one(Diagonal(5, [], 0), v({0: 1}), Functional(5, {0: Fraction(1, 5)}))
    assert op_norm_bound(B) == (PNormValue(5, 1), True)
