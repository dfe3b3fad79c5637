"""Skew-symmetrization of pseudo Lie 2-algebra data.

Pseudo data on a two-term complex ``d: V^-1 -> V^0`` consists of a bracket
``lt2`` with no symmetry assumed (components on V^0 x V^0, V^0 x V^-1 and
V^-1 x V^0), a symmetric defect ``s: V^0 x V^0 -> V^-1`` measuring the failure
of antisymmetry, and a cyclic trilinear ``lt3``.  Halving the defect turns it
into a genuine two-term L-infinity algebra, so 2 must be invertible: only Q
is supported.

Tensor layout follows :mod:`cat2alg.linf2`; additionally

    lt2_m0  (n1, n0, n1)      lt2(h_a, e_i) = sum_b lt2_m0[a, i, b] h_b
    s       (n0, n0, n1)
    lt3     (n0, n0, n0, n1)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DimensionError, UnsupportedError, ValidationError
from .exactlin import nonzero_indices, qarray
from .linf2 import L2Algebra, IdentityReport, Violation, _ein, _swap, cyclic_sum, check_identities

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)


@dataclass
class PseudoL2Data:
    d: np.ndarray
    lt2_00: np.ndarray
    lt2_0m: np.ndarray
    lt2_m0: np.ndarray
    s: np.ndarray
    lt3: np.ndarray
    ring: str = "Q"

    def __post_init__(self):
        if self.ring != "Q":
            raise UnsupportedError("skew-symmetrization needs 1/2; only ring 'Q' is supported")
        self.d = qarray(self.d)
        n0, n1 = self.d.shape
        shapes = {"lt2_00": (n0, n0, n0), "lt2_0m": (n0, n1, n1), "lt2_m0": (n1, n0, n1),
                  "s": (n0, n0, n1), "lt3": (n0, n0, n0, n1)}
        for name, shape in shapes.items():
            setattr(self, name, qarray(getattr(self, name)))
            if getattr(self, name).shape != shape:
                raise DimensionError(f"{name} has shape {getattr(self, name).shape}, expected {shape}")

    @property
    def n0(self):
        return self.d.shape[0]

    @property
    def n1(self):
        return self.d.shape[1]


def pseudo_residuals(P: PseudoL2Data) -> dict:
    d, T, A, B, s, J = P.d, P.lt2_00, P.lt2_0m, P.lt2_m0, P.s, P.lt3
    out = {}
    # lt2 is a map of complexes
    out["P0_left"] = _ein("iab,kb->iak", A, d) - _ein("ja,ijk->iak", d, T)
    out["P0_right"] = _ein("aib,kb->aik", B, d) - _ein("ja,jik->aik", d, T)
    out["P0_mixed"] = _ein("ia,ibc->abc", d, A) - _ein("ib,aic->abc", d, B)
    # symmetric part of lt2 is the boundary of s
    ds = _ein("ija,ka->ijk", s, d)
    out["P1"] = T + _swap(T, 0, 1) - ds
    out["P1_mixed"] = A + np.transpose(B, (1, 0, 2)) - _ein("ija,jb->iba", s, d)
    out["P1_sym"] = s - _swap(s, 0, 1)
    TT = _ein("ijp,pkm->ijkm", T, T)
    out["P2"] = cyclic_sum(TT) - _ein("ijka,ma->ijkm", J, d)
    out["P3"] = J - np.transpose(J, (1, 2, 0, 3))
    # lt3(x,y,z) + lt3(y,x,z) = sum_cyc lt2(s(x,y), z)
    sz = _ein("ija,akb->ijkb", s, B)
    out["P4"] = J + _swap(J, 0, 1) - cyclic_sum(sz)
    return out


def check_pseudo(P: PseudoL2Data, limit=None) -> IdentityReport:
    """Check the pseudo identities on all basis tuples.

    The jacobiator-level identity of the pseudo data is not evaluated here;
    it is certified through the output of :func:`skew_symmetrize` instead, see
    :func:`certify`.
    """
    rep = IdentityReport(checked=tuple(pseudo_residuals(P)))
    for name, R in pseudo_residuals(P).items():
        seen = set()
        for idx in nonzero_indices(R):
            w = idx[:-1]
            if w not in seen:
                seen.add(w)
                rep.violations.append(Violation(name, w, R[idx]))
                if limit and len(rep.violations) >= limit:
                    return rep
    return rep


def skew_symmetrize(P: PseudoL2Data, check=True) -> L2Algebra:
    if check:
        rep = check_pseudo(P, limit=1)
        if not rep.ok:
            v = rep.violations[0]
            raise ValidationError(f"pseudo identity {v.identity} fails", v.witness)
    d, T, A, B, s, J = P.d, P.lt2_00, P.lt2_0m, P.lt2_m0, P.s, P.lt3
    ds = _ein("ija,ka->ijk", s, d)
    l2 = T - HALF * ds
    # mixed component: the same halving, l2(x,h) = lt2(x,h) - s(x, dh)/2
    m = A - HALF * _ein("ija,jb->iba", s, d)
    c1 = cyclic_sum(_ein("ija,akb->ijkb", s, B))        # lt2(s(x,y), z)
    c2 = cyclic_sum(_ein("ijp,pkb->ijkb", T, s))        # s(lt2(x,y), z)
    c3 = cyclic_sum(_ein("ijp,pkb->ijkb", ds, s))       # s(ds(x,y), z)
    l3 = J - HALF * c1 - HALF * c2 + QUARTER * c3
    return L2Algebra(d, l2, m, l3)


def certify(P: PseudoL2Data) -> dict:
    """Full verdict: pseudo identities directly, the jacobiator one via the output."""
    rep = check_pseudo(P)
    out = {"pseudo_ok": rep.ok, "violations": rep.violations,
           "jacobiator_path": "certified through identity I5 of the skew-symmetrized algebra"}
    if rep.ok:
        L = skew_symmetrize(P, check=False)
        lrep = check_identities(L)
        out["output_ok"] = lrep.ok
        out["output_violations"] = lrep.violations
        out["jacobiator_ok"] = "I5" not in lrep.failed()
    return out


def perturb(L: L2Algebra, q) -> PseudoL2Data:
    """Pseudo data whose skew-symmetrization is exactly L (q symmetric)."""
    q = qarray(q)
    n0, n1 = L.n0, L.n1
    if q.shape != (n0, n0, n1):
        raise DimensionError(f"q must have shape {(n0, n0, n1)}")
    if nonzero_indices(q - _swap(q, 0, 1)):
        raise ValidationError("q is not symmetric")
    d, T, M, J = L.tensors()
    dq = _ein("ija,ka->ijk", q, d)
    lt2 = T + dq
    A = M + _ein("ija,jb->iba", q, d)                    # l2(x,h) + q(x,dh)
    B = -np.transpose(M, (1, 0, 2)) + _ein("ija,ib->bja", q, d)   # -l2(x,h) + q(dh,x)
    # l2(q(x,y), z) = -l2(z, q(x,y))
    t1 = -_ein("ija,kab->ijkb", q, M)
    t2 = _ein("ijp,pkb->ijkb", T, q)
    t3 = _ein("ijp,pkb->ijkb", dq, q)
    lt3 = J + cyclic_sum(t1 + t2 + t3)
    return PseudoL2Data(d, lt2, A, B, 2 * q, lt3)
