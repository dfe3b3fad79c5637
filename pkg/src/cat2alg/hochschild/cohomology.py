"""Low-degree Hochschild cohomology and the Lie 2-algebra it assembles into.

Two independent routes to HH^1 are kept deliberately separate:

* :func:`derivations` / :func:`hh1` write the Leibniz rule one coefficient
  equation at a time and quotient by the inner derivations;
* :func:`ext1_bimodule` builds the truncated bar complex
  ``A -> Hom(A, A) -> Hom(A (x) A, A)`` from Kronecker products of the
  multiplication matrices and takes H^1 of it.

A linear map ``D: A -> A`` is an ``n x n`` matrix with ``D[k, i]`` the
coefficient of ``e_k`` in ``D(e_i)``.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from ..exactlin import (coordinates, image_basis, kernel_basis, nonzero_indices, qeye, qmat,
                        qzeros, quotient, rank)
from ..linf2 import L2Algebra, cohomology
from .algebra import FinDimAlgebra, _ein


def center(A: FinDimAlgebra) -> np.ndarray:
    """Basis (columns) of Z(A)."""
    # z e_i - e_i z, coefficient of e_k, as a linear form in z_j
    M = np.transpose(A.mult, (1, 2, 0)) - np.transpose(A.mult, (0, 2, 1))   # [i, k, j]
    return kernel_basis(M.reshape(A.dim * A.dim, A.dim))


def derivations(A: FinDimAlgebra) -> list:
    """Basis of Der(A) as a list of n x n matrices."""
    n, c = A.dim, A.mult
    rows = []
    # D(e_i e_j) = D(e_i) e_j + e_i D(e_j); unknown D[a, b] at column a*n + b
    for i in range(n):
        for j in range(n):
            for k in range(n):
                row = qzeros(n * n)
                for p in range(n):
                    row[k * n + p] += c[i, j, p]
                for q in range(n):
                    row[q * n + i] -= c[q, j, k]
                    row[q * n + j] -= c[i, q, k]
                rows.append(row)
    K = kernel_basis(np.stack(rows)) if rows else qeye(n * n)
    return [K[:, t].reshape(n, n) for t in range(K.shape[1])]


def ad(A: FinDimAlgebra, a) -> np.ndarray:
    """Inner derivation x -> a x - x a."""
    return A.L(a) - A.R(a)


def inner_derivations(A: FinDimAlgebra) -> list:
    span = np.stack([ad(A, A.basis(i)).reshape(-1) for i in range(A.dim)], axis=1)
    B = image_basis(span)
    return [B[:, t].reshape(A.dim, A.dim) for t in range(B.shape[1])]


def is_derivation(A: FinDimAlgebra, D) -> bool:
    D = qmat(D)
    lhs = _ein("ijp,kp->ijk", A.mult, D)
    rhs = _ein("qi,qjk->ijk", D, A.mult) + _ein("qj,iqk->ijk", D, A.mult)
    return not nonzero_indices(lhs - rhs)


class HH1(NamedTuple):
    der: np.ndarray       # n*n x dim Der, columns are vec(D)
    inner: np.ndarray     # dim Der x dim Inn, inner derivations in Der coordinates
    proj: np.ndarray      # Der coordinates -> HH^1
    section: np.ndarray   # HH^1 -> Der coordinates (coset representatives)

    @property
    def dim(self) -> int:
        return self.proj.shape[0]

    def coset_basis(self) -> list:
        n = int(round(self.der.shape[0] ** 0.5))
        reps = self.der @ self.section
        return [reps[:, t].reshape(n, n) for t in range(reps.shape[1])]

    def der_coords(self, D) -> np.ndarray:
        return coordinates(self.der, qmat(D).reshape(-1))


def hh1(A: FinDimAlgebra) -> HH1:
    ders = derivations(A)
    n2 = A.dim * A.dim
    Dm = np.stack([D.reshape(-1) for D in ders], axis=1) if ders else qzeros(n2, 0)
    inn = inner_derivations(A)
    inner = np.stack([coordinates(Dm, J.reshape(-1)) for J in inn], axis=1) if inn else \
        qzeros(len(ders), 0)
    Q = quotient(inner, len(ders))
    return HH1(Dm, inner, Q.proj, Q.section)


# ---------------------------------------------------------------------------
# truncated bar complex

class Ext1(NamedTuple):
    """H^1 of A -> Hom(A,A) -> Hom(A(x)A, A) with fixed coordinates."""

    delta0: np.ndarray    # n*n x n
    delta1: np.ndarray    # n^3 x n*n
    cocycles: np.ndarray  # basis of ker delta1 (columns)
    proj: np.ndarray      # cocycle coordinates -> Ext^1 coordinates

    @property
    def dim(self) -> int:
        return self.proj.shape[0]

    def is_cocycle(self, f) -> bool:
        return not nonzero_indices(self.delta1 @ qmat(f).reshape(-1))

    def classify(self, f) -> np.ndarray:
        """Ext^1 coordinates of the class of a 1-cocycle f: A -> A."""
        return self.proj @ coordinates(self.cocycles, qmat(f).reshape(-1))


def bar_differentials(A: FinDimAlgebra):
    n = A.dim
    I = qeye(n)
    Ls, Rs = A.left_matrices(), A.right_matrices()
    # delta^1 f (e_i, e_j) = e_i f(e_j) - f(e_i e_j) + f(e_i) e_j, row-major vec(f)
    blocks = []
    for i in range(n):
        for j in range(n):
            blocks.append(np.kron(Ls[i], I[j:j + 1, :]) - np.kron(I, A.mult[i, j].reshape(1, n))
                          + np.kron(Rs[j], I[i:i + 1, :]))
    d1 = np.concatenate(blocks, axis=0)
    # delta^0 a = (x -> x a - a x)
    d0 = np.stack([(Rs[a] - Ls[a]).reshape(-1) for a in range(n)], axis=1)
    return d0, d1


def ext1_bimodule(A: FinDimAlgebra) -> Ext1:
    d0, d1 = bar_differentials(A)
    Z = kernel_basis(d1)
    B = np.stack([coordinates(Z, d0[:, a]) for a in range(A.dim)], axis=1)
    Q = quotient(B, Z.shape[1])
    return Ext1(d0, d1, Z, Q.proj)


# ---------------------------------------------------------------------------
# the Lie 2-algebra A -> Der(A)

def gl_of_modcat(A: FinDimAlgebra) -> L2Algebra:
    """Truncated Hochschild Lie 2-algebra: V^-1 = A, V^0 = Der(A).

    l1(a) = [a, -], l2 is the commutator on Der(A) and evaluation D(a) on the
    mixed component, l3 = 0.

    This bracket is a proposed model for the module category, not a proven
    description of it; the invariants H^-1 and H^0 are what is certified.
    """
    H = hh1(A)
    n, d = A.dim, H.der.shape[1]
    ders = [H.der[:, t].reshape(n, n) for t in range(d)]
    l1 = np.stack([H.der_coords(ad(A, A.basis(a))) for a in range(n)], axis=1) if d else \
        qzeros(0, n)
    l2 = qzeros(d, d, d)
    for i in range(d):
        for j in range(d):
            l2[i, j] = H.der_coords(ders[i] @ ders[j] - ders[j] @ ders[i])
    m = qzeros(d, n, n)
    for i in range(d):
        m[i] = ders[i].T          # m[i, a, b] = coefficient of e_b in D_i(e_a)
    labels0 = [f"D{i}" for i in range(d)]
    labels1 = [f"e{a}" for a in range(n)]
    return L2Algebra(l1, l2, m, qzeros(d, d, d, n), labels0, labels1)


def bracket_descends(A: FinDimAlgebra) -> bool:
    """[D, ad_a] = ad_{D a} lies in Inn(A) for every basis derivation and a."""
    inn = inner_derivations(A)
    span = np.stack([J.reshape(-1) for J in inn], axis=1) if inn else qzeros(A.dim ** 2, 0)
    r = rank(span) if inn else 0
    for D in derivations(A):
        for a in range(A.dim):
            J = ad(A, A.basis(a))
            v = (D @ J - J @ D).reshape(-1, 1)
            if rank(np.concatenate([span, v], axis=1)) != r:
                return False
    return True


def hochschild_summary(A: FinDimAlgebra) -> dict:
    L = gl_of_modcat(A)
    h_m1, h0 = cohomology(L).dims
    return {"dim": A.dim, "center": center(A).shape[1], "der": len(derivations(A)),
            "inner": len(inner_derivations(A)), "hh0": center(A).shape[1], "hh1": hh1(A).dim,
            "ext1": ext1_bimodule(A).dim, "gl_homology": [h_m1, h0]}
