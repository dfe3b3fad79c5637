"""Bimodule self-extensions of A, the map Der(A) -> Ext^1 and Baer sums."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import DimensionError, InputError, ValidationError
from ..exactlin import (coordinates, kernel_basis, nonzero_indices, qeye, qmat,
                        qzeros, quotient, rank, restrict, solve_linear)
from .algebra import Bimodule, FinDimAlgebra, is_equivariant
from .cohomology import Ext1, ad, ext1_bimodule, is_derivation


@dataclass
class ExtensionSeq:
    """0 -> N --iota--> E --pi--> M -> 0 of A-bimodules."""

    N: Bimodule
    E: Bimodule
    M: Bimodule
    iota: np.ndarray
    pi: np.ndarray

    def __post_init__(self):
        self.iota, self.pi = qmat(self.iota), qmat(self.pi)
        if self.iota.shape != (self.E.dim, self.N.dim) or self.pi.shape != (self.M.dim, self.E.dim):
            raise DimensionError("iota/pi shapes do not match the modules")
        if not is_equivariant(self.iota, self.N, self.E):
            raise ValidationError("iota is not a bimodule map")
        if not is_equivariant(self.pi, self.E, self.M):
            raise ValidationError("pi is not a bimodule map")
        if nonzero_indices(self.pi @ self.iota):
            raise ValidationError("pi o iota is not zero")
        if rank(self.iota) != self.N.dim:
            raise ValidationError("iota is not injective")
        if rank(self.pi) != self.M.dim:
            raise ValidationError("pi is not surjective")
        if self.E.dim != self.N.dim + self.M.dim:
            raise ValidationError("sequence is not exact in the middle")

    @property
    def algebra(self) -> FinDimAlgebra:
        return self.E.algebra


def split_extension(N: Bimodule, M: Bimodule) -> ExtensionSeq:
    E = N.direct_sum(M)
    iota = np.concatenate([qeye(N.dim), qzeros(M.dim, N.dim)], axis=0)
    pi = np.concatenate([qzeros(M.dim, N.dim), qeye(M.dim)], axis=1)
    return ExtensionSeq(N, E, M, iota, pi)


def pi_map_extension(A: FinDimAlgebra, D) -> ExtensionSeq:
    """E = A + A with a.(x, y).b = (a x b, a y b + D(a) x b); iota(y) = (0, y), pi(x, y) = x."""
    D = qmat(D)
    if D.shape != (A.dim, A.dim) or not is_derivation(A, D):
        raise ValidationError("D is not a derivation of A")
    n = A.dim
    left, right = [], []
    for i in range(n):
        e = A.basis(i)
        La = A.L(e)
        blk = qzeros(2 * n, 2 * n)
        blk[:n, :n] = La
        blk[n:, n:] = La
        blk[n:, :n] = A.L(D @ e)
        left.append(blk)
        Rb = A.R(e)
        blk = qzeros(2 * n, 2 * n)
        blk[:n, :n] = Rb
        blk[n:, n:] = Rb
        right.append(blk)
    reg = Bimodule.regular(A)
    E = Bimodule(A, np.stack(left), np.stack(right))
    iota = np.concatenate([qzeros(n, n), qeye(n)], axis=0)
    pi = np.concatenate([qeye(n), qzeros(n, n)], axis=1)
    return ExtensionSeq(reg, E, reg, iota, pi)


def extension_cocycle(X: ExtensionSeq) -> np.ndarray:
    """The derivation a -> iota^-1(a e - e a) for a lift e of the unit of M = A.

    Only self-extensions of the regular bimodule are classified here.
    """
    A = X.algebra
    reg = Bimodule.regular(A)
    if not (X.N == reg and X.M == reg):
        raise InputError("classification needs N and M to be the regular bimodule")
    sol = solve_linear(X.pi, A.unit)
    e = sol.particular
    cols = []
    for a in range(A.dim):
        v = X.E.left[a] @ e - X.E.right[a] @ e
        cols.append(coordinates(X.iota, v))
    return np.stack(cols, axis=1)


def classify(X: ExtensionSeq, ext: Optional[Ext1] = None) -> np.ndarray:
    """Ext^1 coordinates of the extension class."""
    ext = ext or ext1_bimodule(X.algebra)
    return ext.classify(extension_cocycle(X))


def pi_map(A: FinDimAlgebra, D, ext: Optional[Ext1] = None):
    X = pi_map_extension(A, D)
    return X, classify(X, ext)


def splitting(X: ExtensionSeq) -> Optional[np.ndarray]:
    """A bimodule section s: M -> E with pi s = id, or None if the sequence does not split."""
    e, m = X.E.dim, X.M.dim
    rows, rhs = [], []
    # pi s = I  (unknown s row-major, s[r, c] at r*m + c)
    rows.append(np.kron(X.pi, qeye(m)))
    rhs.append(qeye(m).reshape(-1))
    for sa, ma in ((X.E.left, X.M.left), (X.E.right, X.M.right)):
        for a, b in zip(sa, ma):
            rows.append(np.kron(a, qeye(m)) - np.kron(qeye(e), b.T))
            rhs.append(qzeros(e * m))
    sol = solve_linear(np.concatenate(rows, axis=0), np.concatenate(rhs))
    if sol.particular is None:
        return None
    return sol.particular.reshape(e, m)


def is_split(X: ExtensionSeq) -> bool:
    return splitting(X) is not None


def inner_element(A: FinDimAlgebra, D) -> Optional[np.ndarray]:
    """Some a with D = [a, -], or None."""
    span = np.stack([ad(A, A.basis(i)).reshape(-1) for i in range(A.dim)], axis=1)
    return solve_linear(span, qmat(D).reshape(-1)).particular


def inverse_extension(X: ExtensionSeq) -> ExtensionSeq:
    return ExtensionSeq(X.N, X.E, X.M, -X.iota, X.pi)


def baer_sum(X: ExtensionSeq, Y: ExtensionSeq) -> ExtensionSeq:
    """Pull back along the diagonal of M, push out along the addition of N."""
    if not (X.N == Y.N and X.M == Y.M):
        raise InputError("Baer sum needs matching end terms")
    e1, e2 = X.E.dim, Y.E.dim
    # pullback P = {(u, v) : pi1 u = pi2 v}
    K = kernel_basis(np.concatenate([X.pi, -Y.pi], axis=1))

    def on_pullback(a, b):
        blk = qzeros(e1 + e2, e1 + e2)
        blk[:e1, :e1] = a
        blk[e1:, e1:] = b
        return restrict(K, blk)

    left = [on_pullback(a, b) for a, b in zip(X.E.left, Y.E.left)]
    right = [on_pullback(a, b) for a, b in zip(X.E.right, Y.E.right)]
    # antidiagonal copy of N inside P
    W = coordinates(K, np.concatenate([X.iota, -Y.iota], axis=0))
    Q = quotient(W, K.shape[1])
    E = Bimodule(X.algebra, np.stack([Q.proj @ a @ Q.section for a in left]),
                 np.stack([Q.proj @ a @ Q.section for a in right]))
    iota = Q.proj @ coordinates(K, np.concatenate([X.iota, qzeros(e2, X.N.dim)], axis=0))
    pi = X.pi @ K[:e1, :] @ Q.section
    return ExtensionSeq(X.N, E, X.M, iota, pi)
