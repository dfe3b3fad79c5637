from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cat2alg.corpus import hochschild_corpus, random_module
from cat2alg.errors import DimensionError, InputError, UnsupportedError, ValidationError
from cat2alg.exactlin import qeye, qmat, qzeros, rank
from cat2alg.hochschild.algebra import (AlgebraHom, Bimodule, FDModule, FinDimAlgebra,
                                        base_change, dual_numbers, field_q, group_algebra,
                                        matrix_algebra, truncated_poly, upper_triangular2)
from cat2alg.hochschild.cohomology import (bracket_descends, center, derivations,
                                           ext1_bimodule, gl_of_modcat, hh1,
                                           hochschild_summary, inner_derivations, is_derivation)
from cat2alg.hochschild.extensions import (baer_sum, classify, inner_element, inverse_extension,
                                           is_split, pi_map, pi_map_extension, split_extension,
                                           splitting)
from cat2alg.hochschild.squares import dual_number_commutator
from cat2alg.linf2 import check_identities, cohomology
from oracles import dual_commutator_oracle, hochschild_h1_oracle

CORPUS = hochschild_corpus()

# (center, Der, Inn, HH^1) per corpus algebra, frozen from the list-based oracle
EXPECTED = {
    "Q": (1, 0, 0, 0),
    "Q[x]/x^2": (2, 1, 0, 1),
    "Q[x]/x^3": (3, 2, 0, 2),
    "M2": (1, 3, 3, 0),
    "T2": (1, 2, 2, 0),
    "Q[Z/3]": (3, 0, 0, 0),
}


def x_d(k, power):
    """The derivation x^power d/dx on Q[x]/x^k (basis 1, x, ..., x^(k-1))."""
    D = qzeros(k, k)
    for m in range(1, k):
        if m - 1 + power < k:
            D[m - 1 + power, m] = Fraction(m)
    return D


# ---------------------------------------------------------------------------
# algebras and modules

def test_corpus_names():
    assert set(CORPUS) == set(EXPECTED)


def test_wrong_unit_rejected():
    c = qzeros(2, 2, 2)
    c[0, 0, 0] = c[1, 1, 1] = Fraction(1)      # Q x Q with idempotents e0, e1
    FinDimAlgebra(c, [1, 1])
    with pytest.raises(ValidationError):
        FinDimAlgebra(c, [1, 0])


def test_non_associative_rejected():
    # unit e0; e1 e1 = e2, e2 e1 = e1, e1 e2 = 0, so (e1 e1) e1 != e1 (e1 e1)
    c = qzeros(3, 3, 3)
    for i in range(3):
        c[0, i, i] = c[i, 0, i] = Fraction(1)
    c[1, 1, 2] = c[2, 1, 1] = Fraction(1)
    with pytest.raises(ValidationError, match="associative"):
        FinDimAlgebra(c, [1, 0, 0])


def test_matrix_algebra_products():
    M = matrix_algebra(2)
    E = [M.basis(i) for i in range(4)]
    assert (M.mul(E[1], E[2]) == E[0]).all()        # E01 E10 = E00
    assert not M.mul(E[2], E[2]).any()
    assert not M.is_commutative()


def test_base_change_needs_commutative_factor():
    with pytest.raises(UnsupportedError):
        base_change(field_q(), matrix_algebra(2))
    B = base_change(truncated_poly(2), dual_numbers())
    assert B.dim == 4 and B.is_commutative()


def test_algebra_hom_checks():
    D = dual_numbers()
    AlgebraHom(D, field_q(), [[1, 0]])
    with pytest.raises(ValidationError):
        AlgebraHom(D, field_q(), [[1, 1]])


def test_module_axioms_checked():
    A = truncated_poly(2)
    FDModule(A, np.stack([qeye(1), qzeros(1, 1)]))
    with pytest.raises(ValidationError):
        FDModule(A, np.stack([qeye(1), qeye(1)]))
    with pytest.raises(DimensionError):
        FDModule(A, qzeros(3, 1, 1))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from(sorted(EXPECTED)))
def test_random_module_quotients(seed, name):
    rng = np.random.default_rng(seed)
    A = CORPUS[name]
    X = random_module(rng, A)
    assert 1 <= X.dim <= 4
    S = X.submodule_closure(qeye(X.dim)[:, :1])
    Y, proj = X.quotient(S)
    assert Y.dim == X.dim - S.shape[1]
    for a, b in zip(X.action, Y.action):
        assert (proj @ a == b @ proj).all()


# ---------------------------------------------------------------------------
# cohomology

@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_corpus_values(name):
    A = CORPUS[name]
    z, der, inn, h1 = EXPECTED[name]
    assert center(A).shape[1] == z
    assert len(derivations(A)) == der
    assert rank(np.stack([D.reshape(-1) for D in inner_derivations(A)], axis=1)
                if inner_derivations(A) else qzeros(1, 0)) == inn
    assert hh1(A).dim == h1
    assert ext1_bimodule(A).dim == h1


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_against_cochain_oracle(name):
    A = CORPUS[name]
    assert hochschild_h1_oracle(A.mult.tolist(), A.dim) == EXPECTED[name][3]


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_gl_lie_2_algebra(name):
    A = CORPUS[name]
    L = gl_of_modcat(A)
    assert check_identities(L).ok
    assert cohomology(L).dims == (EXPECTED[name][0], EXPECTED[name][3])
    assert bracket_descends(A)


def test_derivations_of_truncated_polys():
    assert is_derivation(truncated_poly(2), x_d(2, 1))
    assert is_derivation(truncated_poly(3), x_d(3, 2))
    assert not is_derivation(truncated_poly(2), x_d(2, 0))


def test_summary_keys():
    s = hochschild_summary(matrix_algebra(2))
    assert s["hh0"] == 1 and s["hh1"] == 0 and s["gl_homology"] == [1, 0]


# ---------------------------------------------------------------------------
# extensions

def test_x_ddx_is_nontrivial():
    A = truncated_poly(2)
    X, cls = pi_map(A, x_d(2, 1))
    assert list(cls) == [1]
    assert not is_split(X)
    assert inner_element(A, x_d(2, 1)) is None


def test_inner_derivation_splits():
    A = matrix_algebra(2)
    ders = derivations(A)
    ext = ext1_bimodule(A)
    for D in ders:
        X, cls = pi_map(A, D, ext)
        assert not np.asarray(cls).any()
        a = inner_element(A, D)
        assert a is not None
        s = splitting(X)
        assert s is not None and (X.pi @ s == qeye(A.dim)).all()


def test_baer_sum_doubles():
    A = truncated_poly(2)
    X = pi_map_extension(A, x_d(2, 1))
    S = baer_sum(X, X)
    assert list(classify(S)) == [2]
    assert is_split(baer_sum(X, inverse_extension(X)))
    assert list(classify(inverse_extension(X))) == [-1]


def test_split_extension_has_class_zero():
    reg = Bimodule.regular(truncated_poly(3))
    X = split_extension(reg, reg)
    assert is_split(X)
    assert not classify(X).any()


def test_non_derivation_rejected():
    with pytest.raises(ValidationError):
        pi_map_extension(truncated_poly(2), x_d(2, 0))


def test_baer_sum_needs_matching_ends():
    X = pi_map_extension(truncated_poly(2), x_d(2, 1))
    Y = pi_map_extension(truncated_poly(3), x_d(3, 1))
    with pytest.raises(InputError):
        baer_sum(X, Y)


@pytest.mark.parametrize("k", [2, 3])
def test_pi_is_additive(k):
    A = truncated_poly(k)
    ext = ext1_bimodule(A)
    ders = derivations(A)
    for D in ders:
        for Dp in ders:
            cD, cDp = pi_map(A, D, ext)[1], pi_map(A, Dp, ext)[1]
            assert (pi_map(A, D + Dp, ext)[1] == cD + cDp).all()
            S = baer_sum(pi_map_extension(A, D), pi_map_extension(A, Dp))
            assert (classify(S, ext) == cD + cDp).all()


# ---------------------------------------------------------------------------
# dual-number commutator

def test_dual_commutator_example():
    A = truncated_poly(3)
    D, Dp = x_d(3, 1), x_d(3, 2)
    prod = dual_number_commutator(A, D, Dp)
    assert (prod[(1, 1)] == x_d(3, 2)).all()


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_dual_commutator_matches_matrix_oracle(name):
    A = CORPUS[name]
    ders = derivations(A)
    for D in ders:
        for Dp in ders:
            prod = dual_number_commutator(A, D, Dp)
            block, rest = dual_commutator_oracle(D.tolist(), Dp.tolist())
            assert (prod[(1, 1)] == qmat(block)).all()
            assert not any(rest)


def test_dual_commutator_rejects_non_derivation():
    with pytest.raises(ValidationError):
        dual_number_commutator(truncated_poly(2), x_d(2, 0), x_d(2, 1))


def test_group_algebra_is_semisimple_enough():
    A = group_algebra([[0, 1], [1, 0]])
    assert A.is_commutative() and hh1(A).dim == 0
    assert upper_triangular2().dim == 3
