"""Finite-dimensional algebras over Q, their modules and bimodules.

Structure constants: ``e_i e_j = sum_k c[i, j, k] e_k``.  Elements are
coordinate vectors.  Linear maps are matrices acting on columns, so the
matrix of left multiplication by ``a`` has ``L(a)[k, j] = sum_i a_i c[i,j,k]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..errors import DimensionError, UnsupportedError, ValidationError
from ..exactlin import (image_basis, inverse, kernel_basis, nonzero_indices, qarray, qeinsum,
                        qeye, qmat, qvec, qzeros, quotient)


def _ein(spec, *ops):
    return qeinsum(spec, *ops)


@dataclass
class FinDimAlgebra:
    mult: np.ndarray
    unit: np.ndarray
    name: str = ""

    def __post_init__(self):
        self.mult = qarray(self.mult)
        n = self.mult.shape[0] if self.mult.ndim == 3 else -1
        if self.mult.shape != (n, n, n):
            raise DimensionError(f"structure constants must have shape (n,n,n), got {self.mult.shape}")
        self.unit = qvec(self.unit)
        if self.unit.shape != (n,):
            raise DimensionError("unit has the wrong length")
        c = self.mult
        assoc = _ein("ijp,pkm->ijkm", c, c) - _ein("jkp,ipm->ijkm", c, c)
        bad = nonzero_indices(assoc)
        if bad:
            raise ValidationError("multiplication is not associative", bad[0][:3])
        I = qeye(n)
        for side, M in (("left", _ein("i,ijk->jk", self.unit, c)),
                        ("right", _ein("j,ijk->ik", self.unit, c))):
            bad = nonzero_indices(M - I)
            if bad:
                raise ValidationError(f"unit fails the {side} unit law", bad[0][:1])

    @property
    def dim(self) -> int:
        return self.mult.shape[0]

    def basis(self, i) -> np.ndarray:
        e = qzeros(self.dim)
        e[i] = Fraction(1)
        return e

    def mul(self, a, b) -> np.ndarray:
        return _ein("ijk,i,j->k", self.mult, qvec(a), qvec(b))

    def L(self, a) -> np.ndarray:
        return _ein("ijk,i->kj", self.mult, qvec(a))

    def R(self, b) -> np.ndarray:
        return _ein("ijk,j->ki", self.mult, qvec(b))

    def left_matrices(self) -> np.ndarray:
        return np.transpose(self.mult, (0, 2, 1))     # [i] = L(e_i)

    def right_matrices(self) -> np.ndarray:
        return np.transpose(self.mult, (1, 2, 0))     # [j] = R(e_j)

    def is_commutative(self) -> bool:
        return not nonzero_indices(self.mult - np.transpose(self.mult, (1, 0, 2)))

    def __eq__(self, other):
        return (isinstance(other, FinDimAlgebra) and self.dim == other.dim
                and bool(np.all(self.mult == other.mult)) and bool(np.all(self.unit == other.unit)))


# ---------------------------------------------------------------------------
# named algebras

def field_q() -> FinDimAlgebra:
    return FinDimAlgebra(qarray([[[1]]]), [1], "Q")


def truncated_poly(k: int) -> FinDimAlgebra:
    """Q[x]/(x^k) in the basis 1, x, ..., x^(k-1)."""
    c = qzeros(k, k, k)
    for i in range(k):
        for j in range(k - i):
            c[i, j, i + j] = Fraction(1)
    return FinDimAlgebra(c, [1] + [0] * (k - 1), f"Q[x]/x^{k}")


def dual_numbers() -> FinDimAlgebra:
    A = truncated_poly(2)
    A.name = "D"
    return A


def matrix_algebra(k: int) -> FinDimAlgebra:
    """M_k(Q) with basis E_pq at index p*k + q."""
    n = k * k
    c = qzeros(n, n, n)
    for p in range(k):
        for q in range(k):
            for r in range(k):
                c[p * k + q, q * k + r, p * k + r] = Fraction(1)
    unit = [1 if i // k == i % k else 0 for i in range(n)]
    return FinDimAlgebra(c, unit, f"M{k}")


def upper_triangular2() -> FinDimAlgebra:
    """Upper triangular 2x2 matrices, basis E11, E12, E22."""
    M = matrix_algebra(2)
    keep = [0, 1, 3]
    c = M.mult[np.ix_(keep, keep, keep)]
    return FinDimAlgebra(c, [1, 0, 1], "T2")


def group_algebra(table) -> FinDimAlgebra:
    """Q[G] from a multiplication table with identity 0."""
    n = len(table)
    c = qzeros(n, n, n)
    for g in range(n):
        for h in range(n):
            c[g, h, table[g][h]] = Fraction(1)
    return FinDimAlgebra(c, [1] + [0] * (n - 1), f"Q[G{n}]")


def square_zero_plane() -> FinDimAlgebra:
    """Q[e1, e2]/(e1, e2)^2 in the basis 1, e1, e2."""
    c = qzeros(3, 3, 3)
    for i in range(3):
        c[0, i, i] = c[i, 0, i] = Fraction(1)
    return FinDimAlgebra(c, [1, 0, 0], "Q[e1,e2]/m^2")


def base_change(A: FinDimAlgebra, B: FinDimAlgebra) -> FinDimAlgebra:
    """A (x) B for commutative B; basis e_i (x) f_k sits at index i*dim(B) + k."""
    if not B.is_commutative():
        raise UnsupportedError("base change needs a commutative algebra B")
    nA, nB = A.dim, B.dim
    c = _ein("ijp,klq->ikjlpq", A.mult, B.mult).reshape(nA * nB, nA * nB, nA * nB)
    unit = _ein("i,k->ik", A.unit, B.unit).reshape(-1)
    name = f"{A.name}(x){B.name}" if A.name and B.name else ""
    return FinDimAlgebra(c, unit, name)


@dataclass
class AlgebraHom:
    """Unital algebra map given by its matrix (target.dim x source.dim)."""

    source: FinDimAlgebra
    target: FinDimAlgebra
    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = qmat(self.matrix)
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise DimensionError("homomorphism matrix has the wrong shape")
        f = self.matrix
        lhs = _ein("ijp,kp->ijk", self.source.mult, f)
        rhs = _ein("ai,bj,abk->ijk", f, f, self.target.mult)
        bad = nonzero_indices(lhs - rhs)
        if bad:
            raise ValidationError("map is not multiplicative", bad[0][:2])
        if nonzero_indices(f @ self.source.unit - self.target.unit):
            raise ValidationError("map is not unital")

    def tensor_left(self, A: FinDimAlgebra) -> "AlgebraHom":
        """id_A (x) f."""
        return AlgebraHom(base_change(A, self.source), base_change(A, self.target),
                          np.kron(qeye(A.dim), self.matrix))


# ---------------------------------------------------------------------------
# modules

@dataclass
class FDModule:
    """Left module: ``action[i]`` is the matrix of ``e_i``."""

    algebra: FinDimAlgebra
    action: np.ndarray

    def __post_init__(self):
        self.action = qarray(self.action)
        n = self.algebra.dim
        if self.action.ndim != 3 or self.action.shape[0] != n or \
                self.action.shape[1] != self.action.shape[2]:
            raise DimensionError(f"action must have shape ({n}, m, m)")
        _check_rep(self.algebra, self.action, "left")

    @property
    def dim(self) -> int:
        return self.action.shape[1]

    def rho(self, a) -> np.ndarray:
        return _ein("i,ijk->jk", qvec(a), self.action)

    @classmethod
    def free(cls, A: FinDimAlgebra, rank_: int = 1) -> "FDModule":
        return cls(A, np.stack([np.kron(qeye(rank_), A.L(A.basis(i))) for i in range(A.dim)]))

    def submodule_closure(self, vectors) -> np.ndarray:
        """Basis (columns) of the submodule generated by the given columns."""
        V = qmat(vectors) if np.asarray(vectors).size else qzeros(self.dim, 0)
        if V.shape[1] == 0:
            return V
        span = np.concatenate([self.action[i] @ V for i in range(self.algebra.dim)], axis=1)
        return image_basis(span)

    def quotient(self, sub) -> tuple:
        """(M/S, projection matrix) for a submodule S given by columns."""
        Q = quotient(sub, self.dim)
        act = np.stack([Q.proj @ a @ Q.section for a in self.action]) if Q.dim else \
            qzeros(self.algebra.dim, 0, 0)
        return FDModule(self.algebra, act), Q.proj

    def change_basis(self, P) -> "FDModule":
        P = qmat(P)
        Pi = inverse(P)
        return FDModule(self.algebra, np.stack([Pi @ a @ P for a in self.action]))

    def direct_sum(self, other: "FDModule") -> "FDModule":
        return FDModule(self.algebra, np.stack([_blockdiag(a, b) for a, b in
                                                zip(self.action, other.action)]))

    def restrict(self, f: AlgebraHom) -> "FDModule":
        """f_* of a module over f.target."""
        if f.target != self.algebra:
            raise DimensionError("module is not over the target of the homomorphism")
        return FDModule(f.source, _ein("ki,kab->iab", f.matrix, self.action))


def _blockdiag(a, b):
    m, n = a.shape[0], b.shape[0]
    out = qzeros(m + n, m + n)
    out[:m, :m] = a
    out[m:, m:] = b
    return out


def _check_rep(A: FinDimAlgebra, act, side: str):
    m = act.shape[1]
    if side == "left":
        # rho(e_i) rho(e_j) = rho(e_i e_j)
        prod = _ein("iab,jbc->ijac", act, act)
    else:
        # right action on columns: v.(e_i e_j) = (v.e_i).e_j, so R(e_i e_j) = R(e_j) R(e_i)
        prod = _ein("jab,ibc->ijac", act, act)
    target = _ein("ijk,kac->ijac", A.mult, act)
    bad = nonzero_indices(prod - target)
    if bad:
        raise ValidationError(f"{side} action is not a representation", bad[0][:2])
    if nonzero_indices(_ein("i,iab->ab", A.unit, act) - qeye(m)):
        raise ValidationError(f"{side} action is not unital")


@dataclass
class Bimodule:
    """A-bimodule: ``left[i]`` and ``right[i]`` are the matrices of ``e_i`` acting."""

    algebra: FinDimAlgebra
    left: np.ndarray
    right: np.ndarray

    def __post_init__(self):
        self.left, self.right = qarray(self.left), qarray(self.right)
        n = self.algebra.dim
        if self.left.shape != self.right.shape or self.left.ndim != 3 or self.left.shape[0] != n:
            raise DimensionError("bimodule actions have inconsistent shapes")
        _check_rep(self.algebra, self.left, "left")
        _check_rep(self.algebra, self.right, "right")
        comm = _ein("iab,jbc->ijac", self.left, self.right) - _ein("jab,ibc->ijac", self.right, self.left)
        bad = nonzero_indices(comm)
        if bad:
            raise ValidationError("left and right actions do not commute", bad[0][:2])

    @property
    def dim(self) -> int:
        return self.left.shape[1]

    @classmethod
    def regular(cls, A: FinDimAlgebra) -> "Bimodule":
        return cls(A, A.left_matrices(), A.right_matrices())

    def __eq__(self, other):
        return (isinstance(other, Bimodule) and self.algebra == other.algebra
                and self.left.shape == other.left.shape
                and bool(np.all(self.left == other.left)) and bool(np.all(self.right == other.right)))

    def direct_sum(self, other: "Bimodule") -> "Bimodule":
        return Bimodule(self.algebra,
                        np.stack([_blockdiag(a, b) for a, b in zip(self.left, other.left)]),
                        np.stack([_blockdiag(a, b) for a, b in zip(self.right, other.right)]))


def is_equivariant(f, src, dst) -> bool:
    """Whether the matrix f: src -> dst commutes with every action."""
    pairs = [(src.action, dst.action)] if isinstance(src, FDModule) else \
        [(src.left, dst.left), (src.right, dst.right)]
    return all(not nonzero_indices(f @ a - b @ f) for sa, da in pairs for a, b in zip(sa, da))


def equivariant_maps(src, dst) -> np.ndarray:
    """Basis of Hom(src, dst) in row-major vec coordinates (columns)."""
    m, k = src.dim, dst.dim
    pairs = [(src.action, dst.action)] if isinstance(src, FDModule) else \
        [(src.left, dst.left), (src.right, dst.right)]
    rows = []
    for sa, da in pairs:
        for a, b in zip(sa, da):
            # vec(f a - b f) with row-major vec(f)[r*m + s] = f[r, s]
            rows.append(np.kron(qeye(k), a.T) - np.kron(b, qeye(m)))
    M = np.concatenate(rows, axis=0) if rows else qzeros(0, k * m)
    return kernel_basis(M)
