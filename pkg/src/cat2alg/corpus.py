"""Named examples and seeded random generators.

Every generator takes a ``numpy.random.Generator`` so that test suites and the
command line are reproducible from a single seed.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

import numpy as np

from .exactlin import FinAbGroup, inverse, qarray, qeye, qmat, qzeros
from .hochschild.algebra import (FDModule, FinDimAlgebra, field_q, group_algebra, matrix_algebra,
                                 truncated_poly, upper_triangular2)
from .hochschild.squares import random_invertible
from .linf2 import L2Algebra, change_basis, from_crossed_module, gauge_transform
from .picard import Complex2
from .twogroup import FiniteGroup, Skeletal2Group, cochain_coboundary


def _frac(rng, lo=-3, hi=3) -> Fraction:
    return Fraction(int(rng.integers(lo, hi + 1)))


def random_matrix(rng, rows, cols, lo=-3, hi=3) -> np.ndarray:
    M = qzeros(rows, cols)
    for idx in np.ndindex(rows, cols):
        M[idx] = _frac(rng, lo, hi)
    return M


# ---------------------------------------------------------------------------
# Lie algebras (structure constants c[i, j, k]) and representations

def lie_abelian(n: int) -> np.ndarray:
    return qzeros(n, n, n)


def lie_sl2() -> np.ndarray:
    """Basis e, f, h with [e,f] = h, [h,e] = 2e, [h,f] = -2f."""
    c = qzeros(3, 3, 3)
    E, F, H = 0, 1, 2
    for (a, b, k, v) in ((E, F, H, 1), (H, E, E, 2), (H, F, F, -2)):
        c[a, b, k] = Fraction(v)
        c[b, a, k] = Fraction(-v)
    return c


def lie_heisenberg() -> np.ndarray:
    """[x, y] = z."""
    c = qzeros(3, 3, 3)
    c[0, 1, 2], c[1, 0, 2] = Fraction(1), Fraction(-1)
    return c


def lie_b2() -> np.ndarray:
    """The non-abelian 2-dimensional algebra: [x, y] = y."""
    c = qzeros(2, 2, 2)
    c[0, 1, 1], c[1, 0, 1] = Fraction(1), Fraction(-1)
    return c


def lie_gl2() -> np.ndarray:
    """gl_2 in the basis E_pq (index 2p + q) with the commutator bracket."""
    c = qzeros(4, 4, 4)
    for p, q, r, s in product(range(2), repeat=4):
        if q == r:
            c[2 * p + q, 2 * r + s, 2 * p + s] += 1
        if s == p:
            c[2 * p + q, 2 * r + s, 2 * r + q] -= 1
    return c


def adjoint_action(c) -> np.ndarray:
    """action[i, a, b] = coefficient of e_b in [e_i, e_a]."""
    return qarray(c)


def sl2_standard() -> np.ndarray:
    act = qzeros(3, 2, 2)
    act[0, 1, 0] = Fraction(1)      # e: v1 -> v0
    act[1, 0, 1] = Fraction(1)      # f: v0 -> v1
    act[2, 0, 0], act[2, 1, 1] = Fraction(1), Fraction(-1)
    return act


def crossed_module_library() -> dict:
    """Valid strict 2-term algebras with n0 <= 4 and n1 <= 4."""
    out = {}
    for name, c in (("abelian1", lie_abelian(1)), ("abelian2", lie_abelian(2)), ("b2", lie_b2()),
                    ("heisenberg", lie_heisenberg()),
                    ("sl2", lie_sl2())):
        n = c.shape[0]
        out[f"{name}-ideal"] = from_crossed_module(c, n, qeye(n), adjoint_action(c))
        out[f"{name}-adjoint"] = from_crossed_module(c, n, qzeros(n, n), adjoint_action(c))
        out[f"{name}-trivial1"] = from_crossed_module(c, 1, qzeros(n, 1), qzeros(n, 1, 1))
    out["sl2-standard"] = from_crossed_module(lie_sl2(), 2, qzeros(3, 2), sl2_standard())
    b = lie_b2()
    partial = np.concatenate([qeye(2), qzeros(2, 1)], axis=1)
    act = qzeros(2, 3, 3)
    act[:, :2, :2] = b
    out["b2-ideal-plus-trivial"] = from_crossed_module(b, 3, partial, act)
    return out


def sl2_string() -> L2Algebra:
    """sl2 with l1 = 0, V^-1 = Q and l3 the trace-form 3-cocycle."""
    c = lie_sl2()
    K = qarray([[0, 1, 0], [1, 0, 0], [0, 0, 2]])   # trace form in e, f, h
    l3 = qzeros(3, 3, 3, 1)
    for i, j, k in product(range(3), repeat=3):
        l3[i, j, k, 0] = sum(K[i, p] * c[j, k, p] for p in range(3))
    return L2Algebra(qzeros(3, 1), c, qzeros(3, 1, 1), l3)


def random_l2(rng, max_n0=3, max_n1=4) -> L2Algebra:
    """A valid 2-term algebra: a strict seed, gauge-twisted and re-based."""
    n0 = int(rng.integers(1, max_n0 + 1))
    n1 = int(rng.integers(1, max_n1 + 1))
    seeds = [L for L in crossed_module_library().values() if L.n0 == n0 and L.n1 <= n1]
    kind = int(rng.integers(0, 3))
    if kind == 0 and seeds:
        L = seeds[int(rng.integers(0, len(seeds)))]
    elif kind == 1:
        # abelian degree 0, trivial action; l3 must land in ker l1, so keep it only if l1 = 0
        l1 = random_matrix(rng, n0, n1, -2, 2) if rng.integers(0, 2) else qzeros(n0, n1)
        J = random_antisymmetric3(rng, n0, n1) if not any(l1.flat) else qzeros(n0, n0, n0, n1)
        L = L2Algebra(l1, qzeros(n0, n0, n0), qzeros(n0, n1, n1), J)
    else:
        if n0 == 3 and rng.integers(0, 2):
            L = sl2_string()
        else:
            seeds = [L for L in crossed_module_library().values() if L.n0 <= n0]
            L = seeds[int(rng.integers(0, len(seeds)))]
    n0, n1 = L.n0, L.n1
    phi = qzeros(n0, n0, n1)
    for i, j in product(range(n0), repeat=2):
        if i < j:
            for a in range(n1):
                v = _frac(rng, -2, 2)
                phi[i, j, a], phi[j, i, a] = v, -v
    L = gauge_transform(L, phi)
    return change_basis(L, random_invertible(n1, rng), random_invertible(n0, rng))


def random_symmetric(rng, n0, n1, lo=-2, hi=2) -> np.ndarray:
    q = qzeros(n0, n0, n1)
    for i, j in product(range(n0), repeat=2):
        if i <= j:
            for a in range(n1):
                q[i, j, a] = q[j, i, a] = _frac(rng, lo, hi)
    return q


def random_antisymmetric3(rng, n0, n1, lo=-2, hi=2) -> np.ndarray:
    J = qzeros(n0, n0, n0, n1)
    for i, j, k in product(range(n0), repeat=3):
        if i < j < k:
            for a in range(n1):
                v = _frac(rng, lo, hi)
                for p, s in (((i, j, k), 1), ((j, k, i), 1), ((k, i, j), 1),
                             ((j, i, k), -1), ((i, k, j), -1), ((k, j, i), -1)):
                    J[p + (a,)] = s * v
    return J


# ---------------------------------------------------------------------------
# 2-groups

def z2_nontrivial() -> Skeletal2Group:
    """pi0 = pi1 = Z/2, trivial action, alpha(1,1,1) = 1."""
    return Skeletal2Group.from_values(FiniteGroup.cyclic(2), FinAbGroup.cyclic(2),
                                      None, {(1, 1, 1): 1})


def all_normalized_2groups(p0: int, p1: int):
    """Every normalized 3-cochain on Z/p0 with values in Z/p1 (trivial action)."""
    G0, G1 = FiniteGroup.cyclic(p0), FinAbGroup.cyclic(p1)
    free = [t for t in product(range(1, p0), repeat=3)]
    for values in product(range(p1), repeat=len(free)):
        alpha = np.zeros((p0, p0, p0), dtype=np.int64)
        for t, v in zip(free, values):
            alpha[t] = v
        yield Skeletal2Group(G0, G1, None, alpha, check=False)


def _sign_hom(G: FiniteGroup):
    """A surjection to {+1, -1} when one exists (via an index-2 subgroup)."""
    n = G.n
    for mask in range(1, 2 ** n):
        sign = [1 if not (mask >> g) & 1 else -1 for g in range(n)]
        if sign[0] != 1:
            continue
        if all(sign[G.mul(g, h)] == sign[g] * sign[h] for g in range(n) for h in range(n)):
            return sign
    return None


def random_twisted_2group(rng) -> Skeletal2Group:
    """pi0 of order <= 6 acting by -1 through a sign character; alpha = d(beta)."""
    choices = [FiniteGroup.cyclic(2), FiniteGroup.cyclic(4), FiniteGroup.cyclic(6),
               FiniteGroup.symmetric(3),
               FiniteGroup.direct_product(FiniteGroup.cyclic(2), FiniteGroup.cyclic(2))]
    G0 = choices[int(rng.integers(0, len(choices)))]
    m = int(rng.choice([3, 4, 5, 6]))
    G1 = FinAbGroup.cyclic(m)
    sign = _sign_hom(G0)
    action = np.array([[a if sign[g] == 1 else (-a) % m for a in range(m)] for g in range(G0.n)])
    frame = Skeletal2Group(G0, G1, action, None)
    beta = rng.integers(0, m, size=(G0.n, G0.n))
    beta[0, :] = 0
    beta[:, 0] = 0
    alpha = cochain_coboundary(frame, beta)
    return Skeletal2Group(G0, G1, action, alpha)


# ---------------------------------------------------------------------------
# complexes

def random_integer_complex(rng, max_size=5, bound=10) -> Complex2:
    n0 = int(rng.integers(0, max_size + 1))
    n1 = int(rng.integers(0, max_size + 1))
    d = np.empty((n0, n1), dtype=object)
    for idx in np.ndindex(n0, n1):
        d[idx] = int(rng.integers(-bound, bound + 1))
    return Complex2("Z", d)


def random_rational_complex(rng, max_size=3) -> Complex2:
    n0 = int(rng.integers(0, max_size + 1))
    n1 = int(rng.integers(0, max_size + 1))
    r = int(rng.integers(0, min(n0, n1) + 1))
    d = qmat(random_matrix(rng, n0, r) @ random_matrix(rng, r, n1)) if r else qzeros(n0, n1)
    return Complex2("Q", d)


def quasi_isomorphic_replacement(rng, K: Complex2, max_extra=2) -> Complex2:
    """K plus acyclic summands Q --id--> Q, then random bases in both degrees."""
    k = int(rng.integers(0, max_extra + 1))
    n0, n1 = K.n0 + k, K.n1 + k
    d = qzeros(n0, n1)
    d[:K.n0, :K.n1] = K.d
    for t in range(k):
        d[K.n0 + t, K.n1 + t] = Fraction(1)
    P0, P1 = random_invertible(n0, rng), random_invertible(n1, rng)
    return Complex2("Q", P0 @ d @ inverse(P1) if n0 * n1 else d)


# ---------------------------------------------------------------------------
# algebras and modules

def hochschild_corpus() -> dict:
    c3 = [[(i + j) % 3 for j in range(3)] for i in range(3)]
    algs = [field_q(), truncated_poly(2), truncated_poly(3), matrix_algebra(2),
            upper_triangular2(), group_algebra(c3)]
    algs[-1].name = "Q[Z/3]"
    return {A.name: A for A in algs}


def random_module(rng, B: FinDimAlgebra, max_dim=4) -> FDModule:
    """A direct sum of cyclic quotients of B, re-based, of dimension 1..max_dim."""
    parts = []
    total = 0
    while total == 0 or (total < max_dim and rng.integers(0, 2)):
        free = FDModule.free(B)
        gens = []
        for _ in range(int(rng.integers(0, 3))):
            v = qzeros(B.dim)
            for i in range(B.dim):
                v[i] = _frac(rng, -1, 1) if rng.integers(0, 2) else Fraction(0)
            gens.append(v)
        sub = free.submodule_closure(np.stack(gens, axis=1)) if gens else qzeros(B.dim, 0)
        X, _ = free.quotient(sub)
        if X.dim == 0 or total + X.dim > max_dim:
            continue
        parts.append(X)
        total += X.dim
    M = parts[0]
    for X in parts[1:]:
        M = M.direct_sum(X)
    return M.change_basis(random_invertible(M.dim, rng))
