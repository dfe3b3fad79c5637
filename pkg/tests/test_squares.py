import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cat2alg.corpus import random_module
from cat2alg.errors import DimensionError, ValidationError
from cat2alg.exactlin import qeye, qmat, qzeros, rank
from cat2alg.hochschild.algebra import (AlgebraHom, FDModule, base_change, dual_numbers,
                                        field_q, truncated_poly)
from cat2alg.hochschild.squares import (FiberSquare, check_square, coker_functor,
                                        condition_e_square, functor_F, functor_G,
                                        goodness_square, pullback, unit_map)

BASES = {"Q": field_q, "Q[x]/x^2": lambda: truncated_poly(2)}


def eps_module(A, d):
    """A-free module A^r with eps acting by the A-linear map d (block matrix)."""
    B = base_change(A, dual_numbers())
    r = d.shape[0] // A.dim
    acts = []
    for i in range(A.dim):
        La = np.kron(qeye(r), A.L(A.basis(i)))
        acts.extend([La, La @ d])
    return FDModule(B, np.stack(acts))


def test_squares_are_fiber_products():
    assert goodness_square().p.source.dim == 2
    assert condition_e_square().p.source.dim == 3


def test_non_fiber_square_rejected():
    Q, D = field_q(), dual_numbers()
    p = AlgebraHom(D, Q, [[1, 0]])
    i = AlgebraHom(Q, Q, [[1]])
    with pytest.raises(ValidationError):
        FiberSquare(p, p, i, i)


def test_eps_zero_module_unit_is_bijective():
    for make in BASES.values():
        A = make()
        sq = goodness_square().over(A)
        M = eps_module(A, qzeros(A.dim, A.dim))
        u, dim = unit_map(sq, M)
        assert dim == M.dim and rank(u) == M.dim
        assert all(v for k, v in check_square(sq, M).items() if k != "dims")


def test_pullback_of_free_module():
    A = truncated_poly(2)
    sq = goodness_square().over(A)
    M = FDModule.free(sq.p.source)
    X = pullback(sq.p, M).module
    assert X.dim == A.dim    # A[eps] (x)_{A[eps]} A = A


def test_fiber_product_recovers_dimension():
    A = truncated_poly(2)
    sq = condition_e_square().over(A)
    M = FDModule.free(sq.p.source)
    obj = functor_F(sq, M)
    assert functor_G(sq, obj).module.dim == M.dim


def test_coker_functor_example():
    X = eps_module(field_q(), qmat([[0, 1], [0, 0]]))
    C = coker_functor(X, field_q())
    assert C.dim == 1


def test_coker_functor_wrong_algebra():
    with pytest.raises(DimensionError):
        coker_functor(FDModule.free(truncated_poly(3)), field_q())


@pytest.mark.parametrize("make_sq", [goodness_square, condition_e_square])
@pytest.mark.parametrize("base", sorted(BASES))
def test_free_modules_pass(make_sq, base):
    sq = make_sq().over(BASES[base]())
    r = check_square(sq, FDModule.free(sq.p.source), np.random.default_rng(0))
    assert r["unit"] and r["counit_X"] and r["counit_Y"]


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from(sorted(BASES)))
def test_random_modules_goodness(seed, base):
    rng = np.random.default_rng(seed)
    sq = goodness_square().over(BASES[base]())
    M = random_module(rng, sq.p.source)
    r = check_square(sq, M, rng)
    assert r["unit"] and r["counit_X"] and r["counit_Y"]


@settings(max_examples=5, deadline=None)
@given(st.integers(0, 10**9))
def test_random_modules_condition_e(seed):
    rng = np.random.default_rng(seed)
    sq = condition_e_square().over(field_q())
    M = random_module(rng, sq.p.source)
    r = check_square(sq, M, rng)
    assert r["unit"] and r["counit_X"] and r["counit_Y"]
