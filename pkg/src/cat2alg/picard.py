"""Two-term complexes and the Picard groupoids they present.

A complex is ``K^-1 --d--> K^0``.  Over ``Z`` each term is ``Z^n`` modulo a
relation lattice (rows of a relation matrix); over ``Q`` each term is just
``Q^n``.  The matrix ``d`` has shape ``(dim K^0, dim K^-1)`` and acts on
column vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import DimensionError, InputError, UnsupportedError, ValidationError
from .exactlin import (cokernel, imat, in_row_lattice, integer_kernel, inverse, kernel_basis,
                       lattice_quotient, qeye, qmat, qzeros, quotient, rank, solve_linear, to_int)


@dataclass
class Complex2:
    ring: str
    d: np.ndarray
    rel_m1: np.ndarray = None
    rel_0: np.ndarray = None

    def __post_init__(self):
        if self.ring not in ("Z", "Q"):
            raise InputError(f"unknown ring {self.ring!r}; use 'Z' or 'Q'")
        d = np.asarray(self.d, dtype=object)
        if d.ndim != 2:
            raise DimensionError("d must be a matrix")
        self.d = imat(d.tolist()) if self.ring == "Z" and d.size else \
            (qmat(d) if d.size else np.empty(d.shape, dtype=object))
        n0, n1 = self.d.shape
        for name, n in (("rel_m1", n1), ("rel_0", n0)):
            R = getattr(self, name)
            if R is None or np.asarray(R).size == 0:
                R = np.empty((0, n), dtype=object)
            elif self.ring == "Q":
                raise InputError("relations only make sense over Z")
            else:
                R = imat(np.asarray(R, dtype=object).tolist())
                if R.shape[1] != n:
                    raise DimensionError(f"{name} must have {n} columns")
            setattr(self, name, R)
        if self.ring == "Z":
            for r in self.rel_m1:
                image = [sum(self.d[i, j] * r[j] for j in range(n1)) for i in range(n0)]
                if not in_row_lattice(self.rel_0, image):
                    raise ValidationError("d does not map relations of K^-1 into relations of K^0",
                                          [int(x) for x in r])

    @property
    def n0(self) -> int:
        return self.d.shape[0]

    @property
    def n1(self) -> int:
        return self.d.shape[1]

    @classmethod
    def over_q(cls, d, n0=None, n1=None) -> "Complex2":
        d = np.asarray(d, dtype=object)
        if d.size == 0:
            d = np.empty((n0 or 0, n1 or 0), dtype=object)
        return cls("Q", d)


class PiData(NamedTuple):
    pi0: object   # FinAbGroup over Z, dimension over Q
    pi1: object


def ch_pi(K: Complex2) -> PiData:
    """pi0 = coker d and pi1 = ker d."""
    if K.ring == "Q":
        r = rank(K.d) if K.d.size else 0
        return PiData(K.n0 - r, K.n1 - r)
    n0, n1 = K.n0, K.n1
    rows = [list(K.d[:, j]) for j in range(n1)] + [list(r) for r in K.rel_0]
    pi0 = cokernel(imat(rows) if rows else np.empty((0, n0), dtype=object), n0)
    # v with d v in the relation lattice of K^0, modulo relations of K^-1
    k0 = K.rel_0.shape[0]
    M = np.empty((n0, n1 + k0), dtype=object)
    for i in range(n0):
        for j in range(n1):
            M[i, j] = K.d[i, j]
        for j in range(k0):
            M[i, n1 + j] = -K.rel_0[j, i]
    if n0 == 0:
        L = np.empty((n1, 0), dtype=object) if n1 == 0 else _ieye(n1)
    else:
        L = integer_kernel(M)[:n1, :]
    pi1 = lattice_quotient(L, K.rel_m1.tolist())
    return PiData(pi0, pi1)


def _ieye(n):
    from .exactlin import ieye
    return ieye(n)


def homology(K: Complex2) -> tuple[int, int]:
    """(dim H^-1, dim H^0) over Q."""
    if K.ring != "Q":
        raise UnsupportedError("homology dimensions are computed over Q")
    p = ch_pi(K)
    return p.pi1, p.pi0


# ---------------------------------------------------------------------------
# Hom and tensor complexes over Q

def _require_q(*Ks):
    for K in Ks:
        if K.ring != "Q":
            raise UnsupportedError("derived Hom and tensor are only modelled over Q")


@dataclass
class HomComplex:
    """``Hom(K^0, K'^-1) -> {chain maps}`` with the cycle basis it uses."""

    complex: Complex2
    cycles: np.ndarray        # columns: vec(f^-1) stacked on vec(f^0)
    shapes: tuple

    def coords(self, f_m1, f_0) -> np.ndarray:
        """Coordinates of a chain map in degree 0."""
        v = np.concatenate([qmat(f_m1).reshape(-1), qmat(f_0).reshape(-1)])
        sol = solve_linear(self.cycles, v)
        if sol.particular is None:
            raise ValidationError("not a chain map")
        return sol.particular

    def is_null_homotopic(self, f_m1, f_0) -> bool:
        c = self.coords(f_m1, f_0)
        d = self.complex.d
        return solve_linear(d, c).particular is not None


def hom_flat(K: Complex2, Kp: Complex2) -> HomComplex:
    _require_q(K, Kp)
    d, dp = K.d, Kp.d
    n0, n1, m0, m1 = K.n0, K.n1, Kp.n0, Kp.n1
    # f^-1: m1 x n1, f^0: m0 x n0; constraint f^0 d - d' f^-1 = 0 (m0 x n1)
    N = m1 * n1 + m0 * n0
    A = qzeros(m0 * n1, N)
    for idx in range(N):
        e = qzeros(N)
        e[idx] = Fraction(1)
        fm1 = e[:m1 * n1].reshape(m1, n1)
        f0 = e[m1 * n1:].reshape(m0, n0)
        A[:, idx] = (f0 @ d - dp @ fm1).reshape(-1) if m0 * n1 else A[:, idx]
    Z = kernel_basis(A) if m0 * n1 else qeye(N)
    # h: m1 x n0  ->  (h d, d' h)
    H = m1 * n0
    D = qzeros(Z.shape[1], H)
    for idx in range(H):
        e = qzeros(H)
        e[idx] = Fraction(1)
        h = e.reshape(m1, n0)
        v = np.concatenate([(h @ d).reshape(-1), (dp @ h).reshape(-1)])
        sol = solve_linear(Z, v)
        assert sol.particular is not None
        D[:, idx] = sol.particular
    return HomComplex(Complex2("Q", D), Z, ((m1, n1), (m0, n0)))


def tensor_flat(K: Complex2, Kp: Complex2) -> Complex2:
    """Truncation to degrees -1, 0 of the tensor complex."""
    _require_q(K, Kp)
    d, dp = K.d, Kp.d
    n0, n1, m0, m1 = K.n0, K.n1, Kp.n0, Kp.n1
    I = lambda k: qeye(k)
    # T^-2 = K^-1 (x) K'^-1 ; T^-1 = K^-1 (x) K'^0 (+) K^0 (x) K'^-1 ; T^0 = K^0 (x) K'^0
    D2 = np.concatenate([-np.kron(I(n1), dp), np.kron(d, I(m1))], axis=0) \
        if n1 * m1 else qzeros(n1 * m0 + n0 * m1, 0)
    D1 = np.concatenate([np.kron(d, I(m0)), np.kron(I(n0), dp)], axis=1) \
        if n0 * m0 else qzeros(0, n1 * m0 + n0 * m1)
    D2, D1 = qmat(D2) if D2.size else D2, qmat(D1) if D1.size else D1
    assert all(x == 0 for x in (D1 @ D2).flat)
    Q = quotient(D2, n1 * m0 + n0 * m1)
    dT = D1 @ Q.section if D1.size and Q.dim else qzeros(n0 * m0, Q.dim)
    return Complex2("Q", dT)


def compose(f, g):
    """Compose chain maps given as pairs ``(f^-1, f^0)``: first g, then f."""
    return (qmat(f[0]) @ qmat(g[0]), qmat(f[1]) @ qmat(g[1]))


# ---------------------------------------------------------------------------
# objects of the prestack and their isomorphism classes

def pch_iso_classes(K: Complex2, samples=None) -> list[list]:
    """Group objects of K^0 into isomorphism classes (cosets of the image of d).

    Without samples, all of K^0 is enumerated, which needs a finite K^0.
    """
    n0 = K.n0
    if samples is None:
        if K.ring == "Q" and n0 > 0:
            raise UnsupportedError("cannot enumerate a nonzero rational vector space")
        if K.ring == "Q":
            samples = [()]
        else:
            A = cokernel(K.rel_0 if K.rel_0.size else np.empty((0, n0), dtype=object), n0)
            if not A.is_finite:
                raise UnsupportedError("K^0 is infinite; pass explicit sample elements")
            Vinv = inverse(qmat(A.basis_change))
            samples = []
            for y in A.elements():
                full = [0] * n0
                for k, j in enumerate(A.kept):
                    full[j] = y[k]
                samples.append(tuple(int(sum(full[i] * Vinv[i, j] for i in range(n0)))
                                     for j in range(n0)))
    samples = [tuple(s) if isinstance(s, (list, tuple)) else (s,) for s in samples]
    for s in samples:
        if len(s) != n0:
            raise DimensionError(f"sample {s} is not in K^0")
    if K.ring == "Z":
        rows = [list(K.d[:, j]) for j in range(K.n1)] + [list(r) for r in K.rel_0]
        R = imat(rows) if rows else np.empty((0, n0), dtype=object)

        def same(a, b):
            return in_row_lattice(R, [to_int(x) - to_int(y) for x, y in zip(a, b)])
    else:
        def same(a, b):
            diff = [Fraction(x) - Fraction(y) for x, y in zip(a, b)]
            return solve_linear(K.d, diff).particular is not None if K.n1 else not any(diff)
    classes: list[list] = []
    for s in samples:
        for c in classes:
            if same(c[0], s):
                c.append(s)
                break
        else:
            classes.append([s])
    return classes
