from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cat2alg.errors import InputError
from cat2alg.exactlin import (FinAbGroup, cokernel, complement_basis, coordinates, diagonal,
                              imat, int_det, integer_kernel, inverse, is_zero, kernel_basis,
                              qdot, qeinsum, qeye, qmat, quotient, rank, rref,
                              smith_normal_form, solve_linear, to_fraction)
from oracles import invariant_factors_oracle, rank_oracle

small_int = st.integers(-6, 6)


def int_matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small_int, min_size=c, max_size=c),
                               min_size=r, max_size=r)))


def random_unimodular(rng, n):
    U = np.eye(n, dtype=np.int64)
    for _ in range(3 * n):
        i, j = rng.choice(n, 2, replace=False) if n > 1 else (0, 0)
        if i != j:
            U[i] += int(rng.integers(-2, 3)) * U[j]
    if n and rng.integers(2):
        U[0] *= -1
    return imat(U.tolist())


def test_to_fraction_rejects_floats():
    assert to_fraction("3/6") == Fraction(1, 2)
    assert to_fraction(4) == 4
    with pytest.raises(InputError):
        to_fraction(0.5)


def test_snf_example():
    U, D, V = smith_normal_form(imat([[2, 4], [6, 8]]))
    assert diagonal(D) == [2, 4]
    assert (U.dot(imat([[2, 4], [6, 8]])).dot(V) == D).all()
    assert abs(int_det(U)) == 1 and abs(int_det(V)) == 1


def test_cokernel_of_two():
    assert cokernel(imat([[2]])).invariant_factors == (2,)


def test_kernel_example():
    K = kernel_basis(qmat([[1, 2]]))
    assert K.shape == (2, 1)
    assert is_zero(qmat([[1, 2]]).dot(K))
    assert K[0, 0] / K[1, 0] == -2


def test_solve_example():
    sol = solve_linear(qmat([[1, 1]]), [2])
    assert list(sol.particular) == [2, 0]
    assert sol.kernel[0, 0] == -sol.kernel[1, 0]
    assert not solve_linear(qmat([[0, 0]]), [1]).consistent


def test_quotient_and_complement():
    W = qmat([[1], [1]])
    C = complement_basis(W, 2)
    assert rank(np.hstack([W, C])) == 2
    Q = quotient(W, 2)
    assert Q.dim == 1
    assert is_zero(Q.proj.dot(W))
    assert (Q.proj.dot(Q.section) == qeye(1)).all()


def test_finabgroup_arithmetic():
    G = FinAbGroup.from_orders([2, 3])
    assert G.invariant_factors == (6,)
    assert G.order == 6
    assert [G.index(G.element(i)) for i in range(6)] == list(range(6))
    H = cokernel(imat([[2, 4], [6, 8]]))
    assert str(H) == "Z/2 + Z/4"


@given(int_matrices())
def test_rank_matches_oracle(rows):
    assert rank(qmat(rows)) == rank_oracle(rows)


@given(int_matrices())
def test_rref_is_idempotent_and_kernel_exact(rows):
    M = qmat(rows)
    R, piv = rref(M)
    assert (rref(R)[0] == R).all()
    assert len(piv) == rank(M)
    K = kernel_basis(M)
    assert K.shape[1] == M.shape[1] - len(piv)
    assert is_zero(M.dot(K))


@given(int_matrices(3, 3))
def test_cokernel_matches_determinantal_divisors(rows):
    ncols = len(rows[0])
    assert cokernel(imat(rows), ncols).invariant_factors == invariant_factors_oracle(rows)


@given(int_matrices(3, 4))
def test_snf_reconstructs(rows):
    M = imat(rows)
    U, D, V = smith_normal_form(M)
    assert (U.dot(M).dot(V) == D).all()
    d = [x for x in diagonal(D) if x]
    assert all(b % a == 0 for a, b in zip(d, d[1:]))


def test_cokernel_invariant_under_unimodular_conjugation():
    rng = np.random.default_rng(7)
    for _ in range(25):
        r, c = rng.integers(1, 5, size=2)
        M = imat(rng.integers(-5, 6, size=(r, c)).tolist())
        ref = cokernel(M, c).invariant_factors
        P, Q = random_unimodular(rng, r), random_unimodular(rng, c)
        assert cokernel(P.dot(M).dot(Q), c).invariant_factors == ref


@given(int_matrices(3, 3))
def test_integer_kernel(rows):
    M = imat(rows)
    K = integer_kernel(M)
    assert (M.dot(K) == 0).all()
    assert K.shape[1] == M.shape[1] - rank(qmat(rows))


@settings(max_examples=30)
@given(st.integers(1, 4), st.integers(0, 10**6))
def test_inverse_and_coordinates(n, seed):
    rng = np.random.default_rng(seed)
    M = qmat(rng.integers(-3, 4, size=(n, n)).tolist())
    if rank(M) < n:
        return
    Mi = inverse(M)
    assert (M.dot(Mi) == qeye(n)).all()
    v = qmat(rng.integers(-3, 4, size=(n, 1)).tolist())[:, 0]
    assert (M.dot(coordinates(M, v)) == v).all()


def test_qeinsum_matches_einsum():
    rng = np.random.default_rng(3)
    A = qmat([[Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4))) for _ in range(3)]
              for _ in range(2)])
    B = qmat([[Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4))) for _ in range(4)]
              for _ in range(3)])
    assert (qeinsum("ij,jk->ik", A, B) == np.einsum("ij,jk->ik", A, B)).all()
    assert (qdot(A, B) == A.dot(B)).all()
    assert all(isinstance(x, Fraction) for x in qdot(A, B).flat)


@settings(max_examples=25)
@given(int_matrices())
def test_elimination_without_gmpy2(rows):
    import cat2alg.exactlin as el
    fast = rref(qmat(rows))
    saved, el._mpq = el._mpq, None
    try:
        slow = rref(qmat(rows))
    finally:
        el._mpq = saved
    assert (fast[0] == slow[0]).all() and fast[1] == slow[1]
    assert all(isinstance(x, Fraction) for x in slow[0].flat)
