"""Exact integer and rational linear algebra.

Rational matrices are numpy object arrays holding :class:`fractions.Fraction`
entries; integer matrices are object arrays of Python ints.  Nothing here
ever touches floating point.

Vectors in a matrix are *columns* unless a function says otherwise; the one
exception is :func:`cokernel`, whose input rows are relations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import DimensionError, InputError

try:   # optional speed-up for elimination; results are converted back to Fraction
    from gmpy2 import mpq as _mpq
except ImportError:  # pragma: no cover
    _mpq = None


# ---------------------------------------------------------------------------
# construction helpers

def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise InputError(f"floating point value {x!r} is not exact; use 'p/q' strings")
    raise InputError(f"cannot interpret {x!r} as a rational number")


def to_int(x) -> int:
    if isinstance(x, bool):
        raise InputError("booleans are not integers here")
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, str):
        return int(x.strip())
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    raise InputError(f"cannot interpret {x!r} as an integer")


def qmat(data, rows: Optional[int] = None, cols: Optional[int] = None) -> np.ndarray:
    """Rational matrix from nested sequences (or an existing array)."""
    if isinstance(data, np.ndarray) and data.ndim == 2:
        out = np.empty(data.shape, dtype=object)
        for idx in np.ndindex(data.shape):
            out[idx] = to_fraction(data[idx])
        return out
    data = list(data)
    if not data:
        return np.empty((rows or 0, cols or 0), dtype=object)
    r = len(data)
    c = len(data[0])
    out = np.empty((r, c), dtype=object)
    for i, row in enumerate(data):
        if len(row) != c:
            raise DimensionError("ragged matrix rows")
        for j, x in enumerate(row):
            out[i, j] = to_fraction(x)
    return out


def qvec(data) -> np.ndarray:
    return np.array([to_fraction(x) for x in data], dtype=object)


def qzeros(*shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def qeye(n: int) -> np.ndarray:
    out = qzeros(n, n)
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def qarray(arr) -> np.ndarray:
    """Coerce an arbitrary-rank array to Fractions."""
    arr = np.asarray(arr, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx in np.ndindex(arr.shape):
        out[idx] = to_fraction(arr[idx])
    return out


def _to_int_scaled(A):
    """(integer array, common denominator) with A = ints / denominator."""
    flat = list(np.asarray(A, dtype=object).flat)
    den = 1
    for x in flat:
        d = x.denominator if isinstance(x, Fraction) else 1
        if d != 1:
            den = den * d // gcd(den, d)
    out = np.empty(len(flat), dtype=object)
    for k, x in enumerate(flat):
        out[k] = int(x * den) if den != 1 else int(x)
    return out.reshape(np.shape(A)), den


def qeinsum(spec: str, *ops) -> np.ndarray:
    """Exact einsum: operands are scaled to integers, contracted, then divided once."""
    scaled = [_to_int_scaled(op) for op in ops]
    den = 1
    for _, d in scaled:
        den *= d
    res = np.einsum(spec, *[a for a, _ in scaled], optimize=False)
    res = np.asarray(res, dtype=object)
    out = np.empty(res.shape, dtype=object)
    for idx in np.ndindex(res.shape):
        out[idx] = Fraction(int(res[idx]), den)
    return out


def qdot(A, B) -> np.ndarray:
    return qeinsum("ij,jk->ik", A, B) if np.ndim(B) == 2 else qeinsum("ij,j->i", A, B)


def imat(data) -> np.ndarray:
    data = [list(r) for r in data]
    if not data:
        return np.empty((0, 0), dtype=object)
    c = len(data[0])
    out = np.empty((len(data), c), dtype=object)
    for i, row in enumerate(data):
        if len(row) != c:
            raise DimensionError("ragged matrix rows")
        for j, x in enumerate(row):
            out[i, j] = to_int(x)
    return out


def ieye(n: int) -> np.ndarray:
    out = np.empty((n, n), dtype=object)
    out.fill(0)
    for i in range(n):
        out[i, i] = 1
    return out


def is_zero(arr) -> bool:
    return all(x == 0 for x in np.asarray(arr, dtype=object).flat)


def nonzero_indices(arr):
    arr = np.asarray(arr, dtype=object)
    return [idx for idx in np.ndindex(arr.shape) if arr[idx] != 0]


# ---------------------------------------------------------------------------
# rational elimination

def _elim(rows, ncols, zero):
    """In-place Gauss-Jordan on a list of row lists; returns pivot columns."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c] != zero), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        prow = rows[r]
        inv = 1 / prow[c]
        support = [j for j in range(c, ncols) if prow[j] != zero]
        for j in support:
            prow[j] = prow[j] * inv
        for i in range(nrows):
            if i != r:
                row = rows[i]
                f = row[c]
                if f != zero:
                    for j in support:
                        row[j] = row[j] - f * prow[j]
        pivots.append(c)
        r += 1
    return pivots


def rref(M: np.ndarray):
    """Reduced row echelon form; returns ``(R, pivot_columns)``."""
    R = qmat(M) if M.size else M.copy()
    rows, cols = R.shape
    if not R.size:
        return R, []
    if _mpq is not None:
        data = [[_mpq(x.numerator, x.denominator) for x in row] for row in R.tolist()]
        pivots = _elim(data, cols, _mpq(0))
        out = np.empty((rows, cols), dtype=object)
        for i, row in enumerate(data):
            for j, x in enumerate(row):
                out[i, j] = Fraction(int(x.numerator), int(x.denominator))
        return out, pivots
    data = R.tolist()
    pivots = _elim(data, cols, 0)
    out = np.empty((rows, cols), dtype=object)
    for i, row in enumerate(data):
        out[i, :] = row
    return out, pivots


def rank(M: np.ndarray) -> int:
    if M.size == 0:
        return 0
    return len(rref(M)[1])


def kernel_basis(M: np.ndarray) -> np.ndarray:
    """Columns spanning the right kernel ``{v : M v = 0}``."""
    rows, cols = M.shape
    if rows == 0:
        return qeye(cols)
    R, pivots = rref(M)
    free = [j for j in range(cols) if j not in pivots]
    K = qzeros(cols, len(free))
    for k, f in enumerate(free):
        K[f, k] = Fraction(1)
        for i, p in enumerate(pivots):
            K[p, k] = -R[i, f]
    return K


def image_basis(M: np.ndarray) -> np.ndarray:
    """Pivot columns of ``M``: a basis of its column space."""
    rows, cols = M.shape
    if cols == 0 or rows == 0:
        return qzeros(rows, 0)
    _, pivots = rref(M)
    return qmat(M)[:, pivots] if pivots else qzeros(rows, 0)


class Solution(NamedTuple):
    particular: Optional[np.ndarray]
    kernel: np.ndarray

    @property
    def consistent(self) -> bool:
        return self.particular is not None


def solve_linear(M: np.ndarray, b) -> Solution:
    """Solve ``M x = b``.

    ``particular`` is ``None`` when the system is inconsistent.  ``b`` may be a
    vector or a matrix (several right-hand sides solved together).
    """
    M = qmat(M) if not (isinstance(M, np.ndarray) and M.dtype == object) else M
    b = np.asarray(b, dtype=object)
    vector = b.ndim == 1
    B = b.reshape(-1, 1) if vector else b
    rows, cols = M.shape
    if B.shape[0] != rows:
        raise DimensionError(f"right-hand side has {B.shape[0]} rows, matrix has {rows}")
    aug = np.concatenate([M, B], axis=1) if rows else qzeros(0, cols + B.shape[1])
    R, pivots = rref(aug) if rows else (aug, [])
    kern = kernel_basis(M)
    if any(p >= cols for p in pivots):
        return Solution(None, kern)
    X = qzeros(cols, B.shape[1])
    for i, p in enumerate(pivots):
        X[p, :] = R[i, cols:]
    return Solution(X[:, 0] if vector else X, kern)


def inverse(M: np.ndarray) -> np.ndarray:
    n, m = M.shape
    if n != m:
        raise DimensionError("inverse of a non-square matrix")
    sol = solve_linear(M, qeye(n))
    if sol.particular is None or sol.kernel.shape[1]:
        raise InputError("matrix is singular")
    return sol.particular


def complement_basis(W: np.ndarray, n: int) -> np.ndarray:
    """Standard basis vectors completing the columns of ``W`` to a basis.

    Greedy in index order: the pivot columns of ``[W | I]`` beyond ``W``.
    """
    k = W.shape[1] if W.size else 0
    aug = np.concatenate([W, qeye(n)], axis=1) if k else qeye(n)
    _, pivots = rref(aug) if n else (None, [])
    chosen = [p - k for p in pivots if p >= k]
    C = qzeros(n, len(chosen))
    for t, i in enumerate(chosen):
        C[i, t] = Fraction(1)
    return C


class Quotient(NamedTuple):
    """``V / W`` presented by a projection and a section."""

    proj: np.ndarray     # (dim V/W) x n, kernel = W
    section: np.ndarray  # n x (dim V/W), proj @ section = identity

    @property
    def dim(self) -> int:
        return self.proj.shape[0]


def quotient(W: np.ndarray, n: int) -> Quotient:
    Wb = image_basis(W) if W.size else qzeros(n, 0)
    C = complement_basis(Wb, n)
    full = np.concatenate([Wb, C], axis=1)
    inv = inverse(full) if n else qzeros(0, 0)
    proj = inv[Wb.shape[1]:, :]
    return Quotient(proj, C)


def coordinates(basis: np.ndarray, v) -> np.ndarray:
    """Coordinates of ``v`` in the (independent) columns of ``basis``."""
    sol = solve_linear(basis, v)
    if sol.particular is None:
        raise InputError("vector is not in the span of the basis")
    return sol.particular


def restrict(S: np.ndarray, A: np.ndarray) -> np.ndarray:
    """Matrix of ``A`` on the invariant subspace spanned by the columns of ``S``."""
    return coordinates(S, A @ S) if S.shape[1] else qzeros(0, 0)


# ---------------------------------------------------------------------------
# integer matrices and Smith normal form

def _swap_rows(A, i, j):
    A[i], A[j] = A[j], A[i]


def _swap_cols(A, i, j):
    for row in A:
        row[i], row[j] = row[j], row[i]


def smith_normal_form(M):
    """Return ``(U, D, V)`` with ``U @ M @ V == D`` and D in Smith form.

    Classical elimination; the pivot is the entry of minimal nonzero
    absolute value in the remaining block.
    """
    A = [[to_int(x) for x in row] for row in np.asarray(M, dtype=object).tolist()] \
        if np.asarray(M).size else [[] for _ in range(np.asarray(M).shape[0])]
    m = len(A)
    n = np.asarray(M).shape[1] if np.asarray(M).ndim == 2 else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return _finish(U, A, V)
            i, j = best
            if i != t:
                _swap_rows(A, i, t)
                _swap_rows(U, i, t)
            if j != t:
                _swap_cols(A, j, t)
                _swap_cols(V, j, t)
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                q = A[i][t] // p
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[t])]
                if A[i][t]:
                    dirty = True
            for j in range(t + 1, n):
                q = A[t][j] // p
                if q:
                    for row in A:
                        row[j] -= q * row[t]
                    for row in V:
                        row[j] -= q * row[t]
                if A[t][j]:
                    dirty = True
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % p), None)
            if bad is not None:
                i = bad[0]
                A[t] = [a + b for a, b in zip(A[t], A[i])]
                U[t] = [a + b for a, b in zip(U[t], U[i])]
                continue
            break
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
    return _finish(U, A, V)


def _finish(U, A, V):
    def arr(rows, r, c):
        out = np.empty((r, c), dtype=object)
        for i in range(r):
            for j in range(c):
                out[i, j] = rows[i][j]
        return out
    m, n = len(U), len(V)
    return arr(U, m, m), arr(A, m, n), arr(V, n, n)


def int_det(M) -> int:
    """Exact determinant of a square integer matrix (Bareiss)."""
    A = [[to_int(x) for x in row] for row in np.asarray(M, dtype=object).tolist()]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def diagonal(D) -> list[int]:
    D = np.asarray(D, dtype=object)
    return [int(D[i, i]) for i in range(min(D.shape))] if D.ndim == 2 else []


def integer_kernel(M) -> np.ndarray:
    """Columns forming a Z-basis of ``{v in Z^n : M v = 0}``."""
    M = np.asarray(M, dtype=object)
    n = M.shape[1]
    if M.shape[0] == 0:
        return ieye(n)
    _, D, V = smith_normal_form(M)
    r = sum(1 for d in diagonal(D) if d)
    return V[:, r:]


def in_row_lattice(R, v) -> bool:
    """Is the integer row vector ``v`` a Z-combination of the rows of ``R``?"""
    R = np.asarray(R, dtype=object)
    v = [to_int(x) for x in v]
    if R.size == 0:
        return all(x == 0 for x in v)
    _, D, V = smith_normal_form(R)
    w = [sum(v[i] * V[i, j] for i in range(len(v))) for j in range(V.shape[1])]
    diag = diagonal(D)
    for j, x in enumerate(w):
        d = diag[j] if j < len(diag) else 0
        if d == 0:
            if x:
                return False
        elif x % d:
            return False
    return True


# ---------------------------------------------------------------------------
# finitely generated abelian groups

@dataclass(frozen=True)
class FinAbGroup:
    """``Z/d_1 + ... + Z/d_k`` with ``d_1 | d_2 | ... | d_k``; 0 encodes Z.

    ``basis_change`` and ``kept`` optionally record how an ambient lattice
    ``Z^n`` maps onto these coordinates (row vector ``x`` goes to
    ``(x @ basis_change)[kept]``, reduced modulo the factors).
    """

    invariant_factors: tuple[int, ...]
    basis_change: Optional[np.ndarray] = field(default=None, compare=False, repr=False)
    kept: Optional[tuple[int, ...]] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        fs = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", fs)
        if any(d < 0 or d == 1 for d in fs):
            raise InputError(f"invalid invariant factors {fs}")
        for a, b in zip(fs, fs[1:]):
            if a == 0 and b != 0 or (b % a if a else False):
                raise InputError(f"invariant factors {fs} do not form a divisibility chain")

    @classmethod
    def cyclic(cls, n: int) -> "FinAbGroup":
        return cls(() if n == 1 else (n,))

    @classmethod
    def from_orders(cls, orders: Sequence[int]) -> "FinAbGroup":
        """Canonicalize an arbitrary direct sum of cyclic groups."""
        n = len(orders)
        M = np.empty((n, n), dtype=object)
        M.fill(0)
        for i, d in enumerate(orders):
            M[i, i] = int(d)
        return cokernel(M)

    @property
    def rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d == 0)

    @property
    def is_finite(self) -> bool:
        return self.rank == 0

    @property
    def order(self) -> int:
        if not self.is_finite:
            raise ValueError("infinite group has no finite order")
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def elements(self):
        """All elements as coordinate tuples, row-major (last coordinate fastest)."""
        if not self.is_finite:
            raise ValueError("cannot enumerate an infinite group")
        return list(product(*(range(d) for d in self.invariant_factors)))

    def reduce(self, x) -> tuple:
        return tuple(int(a) % d if d else int(a) for a, d in zip(x, self.invariant_factors))

    def add(self, x, y) -> tuple:
        return self.reduce(a + b for a, b in zip(x, y))

    def neg(self, x) -> tuple:
        return self.reduce(-a for a in x)

    def zero(self) -> tuple:
        return tuple(0 for _ in self.invariant_factors)

    def index(self, x) -> int:
        i = 0
        for a, d in zip(self.reduce(x), self.invariant_factors):
            i = i * d + a
        return i

    def element(self, index: int) -> tuple:
        out = []
        for d in reversed(self.invariant_factors):
            out.append(index % d)
            index //= d
        return tuple(reversed(out))

    def project(self, x) -> tuple:
        """Image of an ambient lattice vector (requires a witness)."""
        if self.basis_change is None:
            raise ValueError("group carries no presentation witness")
        y = [sum(int(x[i]) * self.basis_change[i, j] for i in range(len(x)))
             for j in range(self.basis_change.shape[1])]
        return self.reduce(y[k] for k in self.kept)

    def __str__(self):
        if not self.invariant_factors:
            return "0"
        return " + ".join("Z" if d == 0 else f"Z/{d}" for d in self.invariant_factors)


def cokernel(M, n_generators: Optional[int] = None) -> FinAbGroup:
    """``Z^cols / (row span of M)``; rows of ``M`` are relations."""
    M = np.asarray(M, dtype=object)
    if M.ndim != 2:
        M = M.reshape(0, n_generators or 0)
    cols = M.shape[1] if M.size or n_generators is None else n_generators
    if M.shape[0] == 0:
        V = ieye(cols)
        diag = []
    else:
        _, D, V = smith_normal_form(M)
        diag = diagonal(D)
    factors, kept = [], []
    for j in range(cols):
        d = diag[j] if j < len(diag) else 0
        if d != 1:
            factors.append(abs(d))
            kept.append(j)
    # SNF already orders nonzero entries by divisibility; zeros sit at the end.
    return FinAbGroup(tuple(factors), basis_change=V, kept=tuple(kept))


def lattice_basis(G) -> np.ndarray:
    """Columns forming a Z-basis of the lattice spanned by the columns of ``G``."""
    G = np.asarray(G, dtype=object)
    n = G.shape[0]
    if G.ndim != 2 or G.shape[1] == 0:
        return np.empty((n, 0), dtype=object)
    U, D, V = smith_normal_form(G.T)
    # rows of G.T span the same lattice as the rows of D V^-1
    Vinv = inverse(qmat(V))
    rows = [i for i, d in enumerate(diagonal(D)) if d]
    B = np.empty((n, len(rows)), dtype=object)
    for k, i in enumerate(rows):
        for j in range(n):
            B[j, k] = int(D[i, i] * Vinv[i, j])
    return B


def lattice_quotient(L, relations) -> FinAbGroup:
    """``span_Z(L columns) / span_Z(relation rows)``; relations must lie in the lattice.

    The witness on the result maps an ambient vector of the lattice (given in
    the coordinates of ``lattice_basis(L)``) to the canonical coordinates.
    """
    B = lattice_basis(L)
    k = B.shape[1]
    rows = []
    for r in relations:
        r = [to_int(x) for x in r]
        if not any(r):
            continue
        sol = solve_linear(qmat(B), [Fraction(x) for x in r]).particular
        if sol is None or any(v.denominator != 1 for v in sol):
            raise InputError("relation does not lie in the lattice")
        rows.append([int(v) for v in sol])
    M = imat(rows) if rows else np.empty((0, k), dtype=object)
    return cokernel(M, k)
