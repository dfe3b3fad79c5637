from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cat2alg.corpus import (crossed_module_library, lie_abelian, lie_gl2, lie_sl2,
                            random_antisymmetric3, random_l2, sl2_string)
from cat2alg.errors import DimensionError, ValidationError
from cat2alg.exactlin import qarray, qmat, qzeros
from cat2alg.linf2 import (L2Algebra, change_basis, check_identities, cohomology,
                           from_crossed_module, gauge_transform, i5_residual, require_valid)
from cat2alg.hochschild.squares import random_invertible
from oracles import linf_relation_tensor, linf_violations


def as_lists(L):
    return [L.n0, L.n1] + [t.tolist() for t in L.tensors()]


def gl2_on_plane():
    """gl_2 acting on column vectors, zero boundary."""
    act = qzeros(4, 2, 2)
    for p in range(2):
        for q in range(2):
            act[2 * p + q, q, p] = Fraction(1)      # E_pq e_q = e_p
    return from_crossed_module(lie_gl2(), 2, qzeros(4, 2), act)


def test_gl2_crossed_module_is_valid():
    L = gl2_on_plane()
    assert check_identities(L).ok
    assert not L.l3.any()


def test_sl2_string_is_valid():
    L = sl2_string()
    assert (L.n0, L.n1) == (3, 1)
    assert check_identities(L).ok
    assert cohomology(L).dims == (1, 3)


def test_sl2_string_with_wrong_l3_fails_i4():
    L = sl2_string()
    bad = L2Algebra(qmat([[1], [0], [0]]), L.l2_00, L.l2_0m, L.l3)
    assert "I4a" in check_identities(bad).failed()


def test_inclusion_of_line_in_abelian_plane():
    L = from_crossed_module(lie_abelian(2), 1, [[1], [0]], qzeros(2, 1, 1))
    assert cohomology(L).dims == (0, 1)


def test_non_antisymmetric_bracket_fails_i1():
    T = qzeros(2, 2, 2)
    T[0, 1, 0] = T[1, 0, 0] = Fraction(1)
    rep = check_identities(L2Algebra(qzeros(2, 1), T, qzeros(2, 1, 1), qzeros(2, 2, 2, 1)))
    assert "I1" in rep.failed()
    assert {v.witness for v in rep.violations if v.identity == "I1"} == {(0, 1), (1, 0)}
    with pytest.raises(ValidationError):
        require_valid(L2Algebra(qzeros(2, 1), T, qzeros(2, 1, 1), qzeros(2, 2, 2, 1)))


def test_peiffer_failure_rejected():
    # l1 = id on a line with a nonzero action breaks l2(l1 h, h') = -l2(l1 h', h)
    act = qzeros(1, 1, 1)
    act[0, 0, 0] = Fraction(1)
    with pytest.raises(ValidationError):
        from_crossed_module(lie_abelian(1), 1, [[1]], act)


def test_shape_mismatch():
    with pytest.raises(DimensionError):
        L2Algebra(qzeros(2, 1), qzeros(2, 2, 2), qzeros(2, 2, 2), qzeros(2, 2, 2, 1))


def test_library_is_valid():
    for name, L in crossed_module_library().items():
        assert check_identities(L).ok, name


@pytest.mark.parametrize("name", ["b2-ideal", "sl2-standard", "heisenberg-adjoint"])
def test_graded_oracle_agrees_low_arity(name):
    L = crossed_module_library()[name]
    for arity in (1, 2, 3):
        assert linf_violations(*as_lists(L), arity) == []


def test_graded_oracle_sees_perturbed_l3_exactly_as_i5():
    rng = np.random.default_rng(0)
    L = gl2_on_plane()
    J = random_antisymmetric3(rng, 4, 2)
    B = L2Algebra(L.l1, L.l2_00, L.l2_0m, J)
    assert "I5" in check_identities(B).failed()
    R = i5_residual(B)
    oracle = linf_relation_tensor(*as_lists(B))
    for idx, v in oracle.items():
        for b in range(2):
            assert v.get(b, 0) == -R[idx + (b,)]


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**9))
def test_random_algebras_valid(seed):
    L = random_l2(np.random.default_rng(seed))
    assert check_identities(L).ok


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**9))
def test_verdict_invariant_under_basis_change(seed):
    rng = np.random.default_rng(seed)
    L = random_l2(rng)
    J = random_antisymmetric3(rng, L.n0, L.n1) if rng.integers(2) else qzeros(*L.l3.shape)
    B = L2Algebra(L.l1, L.l2_00, L.l2_0m, L.l3 + J)
    P1, P0 = random_invertible(L.n1, rng), random_invertible(L.n0, rng)
    assert check_identities(change_basis(B, P1, P0)).ok == check_identities(B).ok


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**9))
def test_gauge_transform_preserves_validity_and_homology(seed):
    rng = np.random.default_rng(seed)
    L = random_l2(rng)
    phi = qarray(rng.integers(-2, 3, size=(L.n0, L.n0, L.n1)))
    phi = (phi - np.transpose(phi, (1, 0, 2))) / 2
    G = gauge_transform(L, phi)
    assert check_identities(G).ok
    assert cohomology(G).dims == cohomology(L).dims


def test_sl2_bracket_constants():
    c = lie_sl2()
    e, f, h = 0, 1, 2
    assert c[e, f, h] == 1 and c[h, e, e] == 2 and c[h, f, f] == -2
