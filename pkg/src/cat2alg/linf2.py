"""Two-term L-infinity algebras over Q.

Tensor layout (output index last, all entries Fractions):

    l1      (n0, n1)          matrix V^-1 -> V^0
    l2_00   (n0, n0, n0)      l2(e_i, e_j) = sum_k l2_00[i, j, k] e_k
    l2_0m   (n0, n1, n1)      l2(e_i, h_a) = sum_b l2_0m[i, a, b] h_b
    l3      (n0, n0, n0, n1)  totally antisymmetric

The bracket with the degree -1 argument first is ``l2(h, x) = -l2(x, h)``;
two degree -1 arguments bracket to zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import NamedTuple, Optional

import numpy as np

from .errors import DimensionError, ValidationError
from .exactlin import (inverse, kernel_basis, nonzero_indices, qarray, qeinsum, qeye, qmat,
                       qzeros, quotient)


def _ein(spec, *ops):
    return qeinsum(spec, *ops)


@dataclass
class L2Algebra:
    l1: np.ndarray
    l2_00: np.ndarray
    l2_0m: np.ndarray
    l3: np.ndarray
    labels0: Optional[list] = None
    labels1: Optional[list] = None

    def __post_init__(self):
        self.l1 = qarray(self.l1)
        n0, n1 = self.l1.shape
        self.l2_00 = qarray(self.l2_00)
        self.l2_0m = qarray(self.l2_0m)
        self.l3 = qarray(self.l3)
        for name, shape in (("l2_00", (n0, n0, n0)), ("l2_0m", (n0, n1, n1)),
                            ("l3", (n0, n0, n0, n1))):
            if getattr(self, name).shape != shape:
                raise DimensionError(f"{name} has shape {getattr(self, name).shape}, expected {shape}")

    @property
    def n0(self) -> int:
        return self.l1.shape[0]

    @property
    def n1(self) -> int:
        return self.l1.shape[1]

    @classmethod
    def zero(cls, n0: int, n1: int) -> "L2Algebra":
        return cls(qzeros(n0, n1), qzeros(n0, n0, n0), qzeros(n0, n1, n1), qzeros(n0, n0, n0, n1))

    def bracket(self, x, y):
        return _ein("ijk,i,j->k", self.l2_00, x, y)

    def act(self, x, h):
        return _ein("iab,i,a->b", self.l2_0m, x, h)

    def jacobiator(self, x, y, z):
        return _ein("ijka,i,j,k->a", self.l3, x, y, z)

    def tensors(self) -> tuple:
        return self.l1, self.l2_00, self.l2_0m, self.l3

    def __eq__(self, other):
        if not isinstance(other, L2Algebra):
            return NotImplemented
        return all(a.shape == b.shape and bool(np.all(a == b))
                   for a, b in zip(self.tensors(), other.tensors()))


class Violation(NamedTuple):
    identity: str
    witness: tuple
    residual: object


@dataclass
class IdentityReport:
    violations: list = field(default_factory=list)
    checked: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def failed(self) -> set:
        return {v.identity for v in self.violations}

    def __bool__(self):
        return self.ok


def cyclic_sum(T, axes=(0, 1, 2)):
    """Sum of a tensor over cyclic permutations of three of its axes."""
    perm1 = list(range(T.ndim))
    perm2 = list(range(T.ndim))
    a, b, c = axes
    # T(x,y,z) + T(y,z,x) + T(z,x,y) as functions of (x,y,z)
    perm1[a], perm1[b], perm1[c] = b, c, a
    perm2[a], perm2[b], perm2[c] = c, a, b
    return T + np.transpose(T, np.argsort(perm1)) + np.transpose(T, np.argsort(perm2))


def _swap(T, i, j):
    axes = list(range(T.ndim))
    axes[i], axes[j] = axes[j], axes[i]
    return np.transpose(T, axes)


def identity_residuals(L: L2Algebra) -> dict:
    """Residual tensors of every defining identity; all zero iff L is valid."""
    l1, T, M, J = L.tensors()
    out = {}
    out["I1"] = T + _swap(T, 0, 1)
    # l1 l2(x,h) - l2(x, l1 h), indices (x, h, out)
    out["I2"] = _ein("iab,kb->iak", M, l1) - _ein("ja,ijk->iak", l1, T)
    # l2(l1 h, h') + l2(l1 h', h), indices (h, h', out)
    out["I3"] = _ein("ia,ibc->abc", l1, M) + _ein("ib,iac->abc", l1, M)
    # sum_cyc l2(l2(x,y),z) - l1 l3(x,y,z)
    TT = _ein("ijp,pkm->ijkm", T, T)
    out["I4a"] = cyclic_sum(TT) - _ein("ijka,ma->ijkm", J, l1)
    # l2([x,y],h) - l2(x,l2(y,h)) + l2(y,l2(x,h)) - l3(x,y,l1 h), indices (x,y,h,out)
    out["I4b"] = (_ein("ijp,pac->ijac", T, M) - _ein("jab,ibc->ijac", M, M)
                  + _ein("iab,jbc->ijac", M, M) - _ein("ka,ijkc->ijac", l1, J))
    out["I5"] = i5_residual(L)
    return out


def i5_residual(L: L2Algebra):
    """l2(l3(x,y,z),w) - sum_cyc [l3(l2(x,y),z,w) + l3(x,y,l2(z,w)) - l2(z,l3(x,y,w))].

    Indices (x, y, z, w, out).  ``l2(h, w) = -l2(w, h)`` for the first term.
    """
    _, T, M, J = L.tensors()
    lhs = -_ein("ijka,lab->ijklb", J, M)
    # terms as functions of (x,y,z,w) before the cyclic sum over x,y,z
    t1 = _ein("ijp,pklb->ijklb", T, J)
    t2 = _ein("klp,ijpb->ijklb", T, J)
    t3 = -_ein("ijla,kab->ijklb", J, M)
    rhs = cyclic_sum(t1 + t2 + t3)
    return lhs - rhs


def _totally_antisymmetric_residual(J):
    return {"l3_antisym": J + _swap(J, 0, 1), "l3_antisym2": J + _swap(J, 1, 2)}


def check_identities(L: L2Algebra, limit: Optional[int] = None) -> IdentityReport:
    """Evaluate all identities exactly on basis tuples; list each failing tuple."""
    res = identity_residuals(L)
    res.update(_totally_antisymmetric_residual(L.l3))
    rep = IdentityReport(checked=tuple(res))
    for name, R in res.items():
        seen = set()
        for idx in nonzero_indices(R):
            w = idx[:-1]
            if w in seen:
                continue
            seen.add(w)
            rep.violations.append(Violation(name, w, R[idx]))
            if limit is not None and len(rep.violations) >= limit:
                return rep
    return rep


def require_valid(L: L2Algebra) -> None:
    rep = check_identities(L, limit=1)
    if not rep.ok:
        v = rep.violations[0]
        raise ValidationError(f"identity {v.identity} fails", v.witness)


# ---------------------------------------------------------------------------
# constructors

def lie_algebra_residuals(c) -> dict:
    c = qarray(c)
    cc = _ein("ijp,pkm->ijkm", c, c)
    return {"antisym": c + _swap(c, 0, 1), "jacobi": cyclic_sum(cc)}


def from_crossed_module(g, h_dim: int, partial, action) -> L2Algebra:
    """Strict 2-term algebra from a differential crossed module.

    ``g`` holds structure constants of the Lie algebra in degree 0,
    ``partial`` is the (n0 x h_dim) boundary matrix and ``action[i, a, b]``
    is the coefficient of h_b in e_i acting on h_a.
    """
    g = qarray(g)
    n0 = g.shape[0]
    partial = qmat(partial) if np.asarray(partial).size else qzeros(n0, h_dim)
    action = qarray(action) if np.asarray(action).size else qzeros(n0, h_dim, h_dim)
    if partial.shape != (n0, h_dim) or action.shape != (n0, h_dim, h_dim):
        raise DimensionError("crossed module data has inconsistent dimensions")
    for name, R in lie_algebra_residuals(g).items():
        bad = nonzero_indices(R)
        if bad:
            raise ValidationError(f"degree 0 bracket fails {name}", bad[0][:-1])
    # [x,y].h = x.(y.h) - y.(x.h)
    rep = _ein("ijp,pab->ijab", g, action) - _ein("jac,icb->ijab", action, action) \
        + _ein("iac,jcb->ijab", action, action)
    bad = nonzero_indices(rep)
    if bad:
        raise ValidationError("action is not a Lie algebra action", bad[0][:-1])
    L = L2Algebra(partial, g, action, qzeros(n0, n0, n0, h_dim))
    res = identity_residuals(L)
    for name, what in (("I2", "boundary is not equivariant"), ("I3", "Peiffer identity fails")):
        bad = nonzero_indices(res[name])
        if bad:
            raise ValidationError(what, bad[0][:-1])
    return L


# ---------------------------------------------------------------------------
# homology

class Cohomology(NamedTuple):
    h_minus1: np.ndarray     # basis of ker l1 (columns)
    h0_proj: np.ndarray      # V^0 -> H^0
    h0_section: np.ndarray   # H^0 -> V^0
    h0_bracket: np.ndarray   # structure constants on H^0

    @property
    def dims(self) -> tuple[int, int]:
        return self.h_minus1.shape[1], self.h0_proj.shape[0]


def cohomology(L: L2Algebra) -> Cohomology:
    K = kernel_basis(L.l1) if L.n0 else qeye(L.n1)
    Q = quotient(L.l1, L.n0)
    k = Q.dim
    S, P = Q.section, Q.proj
    br = _ein("ijk,ia,jb,ck->abc", L.l2_00, S, S, P) if k else qzeros(0, 0, 0)
    for name, R in lie_algebra_residuals(br).items():
        if nonzero_indices(R):
            raise ValidationError(f"induced bracket on H^0 fails {name}")
    return Cohomology(K, P, S, br)


# ---------------------------------------------------------------------------
# transformations

def change_basis(L: L2Algebra, P1, P0) -> L2Algebra:
    """Express L in new bases given by the columns of P1 (V^-1) and P0 (V^0)."""
    P1, P0 = qmat(P1), qmat(P0)
    Q1, Q0 = inverse(P1), inverse(P0)
    l1 = Q0 @ L.l1 @ P1
    l2 = _ein("abc,ai,bj,kc->ijk", L.l2_00, P0, P0, Q0)
    m = _ein("abc,ai,bj,kc->ijk", L.l2_0m, P0, P1, Q1)
    l3 = _ein("abcd,ai,bj,ck,ld->ijkl", L.l3, P0, P0, P0, Q1)
    return L2Algebra(l1, l2, m, l3)


def gauge_transform(L: L2Algebra, phi) -> L2Algebra:
    """Twist by an antisymmetric phi: V^0 x V^0 -> V^-1.

    The result is isomorphic to L through the morphism with identity
    components and quadratic part phi.
    """
    phi = qarray(phi)
    l1, T, M, J = L.tensors()
    dphi = _ein("ija,ka->ijk", phi, l1)
    T2 = T + dphi
    M2 = M + _ein("ija,jb->iba", phi, l1)
    # l2(phi(x,y), z) = -l2(z, phi(x,y))
    t1 = -_ein("ija,kab->ijkb", phi, M)
    t2 = _ein("ijp,pkb->ijkb", T, phi)
    t3 = _ein("ijp,pkb->ijkb", dphi, phi)
    J2 = J + cyclic_sum(t1 + t2 + t3)
    return L2Algebra(l1, T2, M2, J2)


def antisymmetrize2(A):
    return (A - _swap(A, 0, 1)) / 2


def antisymmetrize3(A):
    out = qzeros(*A.shape)
    for p in permutations(range(3)):
        sign = _perm_sign(p)
        out = out + sign * np.transpose(A, list(p) + [3])
    return out / 6


def _perm_sign(p) -> int:
    p = list(p)
    s = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s
