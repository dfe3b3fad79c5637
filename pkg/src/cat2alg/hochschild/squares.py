"""Dual-number computations and the fiber-product adjunction checks.

Modules over ``A (x) S`` for a commutative algebra ``S`` model the category
of A-modules base-changed to ``S``.  An algebra map ``f: S -> S'`` gives the
pullback ``f^* X = (A (x) S') (x)_{A (x) S} X``.  For a fiber square of
commutative algebras ``S3 = S1 x_S0 S2`` the functor

    F = p^* x q^* : Mod(A(x)S3) -> Mod(A(x)S1) x_{Mod(A(x)S0)} Mod(A(x)S2)

has the right adjoint G sending ``(X, Y, phi)`` to the fiber product
``X x_Z Y`` with ``Z = i^* X``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from ..errors import DimensionError, InputError, ValidationError
from ..exactlin import (coordinates, inverse, kernel_basis, nonzero_indices, qeye,
                        qdot, qmat, qzeros, quotient, rank, restrict, solve_linear)
from .algebra import (AlgebraHom, FDModule, FinDimAlgebra, base_change, dual_numbers, field_q,
                      square_zero_plane)
from .cohomology import is_derivation


# ---------------------------------------------------------------------------
# dual-number commutator

Monomial = tuple   # (a, b) for eps1^a eps2^b, a, b in {0, 1}


def _tmul(P: dict, Q: dict, n: int) -> dict:
    out = {}
    for (a, b), X in P.items():
        for (c, d), Y in Q.items():
            if a + c > 1 or b + d > 1:
                continue
            key = (a + c, b + d)
            out[key] = out.get(key, qzeros(n, n)) + X @ Y
    return out


def dual_number_commutator(A: FinDimAlgebra, D, Dp) -> dict:
    """(1 + e1 D)(1 + e2 D')(1 - e1 D)(1 - e2 D') as {monomial: matrix}.

    Asserts the product equals 1 + e1 e2 (D D' - D' D).
    """
    D, Dp = qmat(D), qmat(Dp)
    for M in (D, Dp):
        if not is_derivation(A, M):
            raise ValidationError("argument is not a derivation")
    n = A.dim
    I = qeye(n)
    factors = [{(0, 0): I, (1, 0): D}, {(0, 0): I, (0, 1): Dp},
               {(0, 0): I, (1, 0): -D}, {(0, 0): I, (0, 1): -Dp}]
    prod = {(0, 0): I}
    for f in factors:
        prod = _tmul(prod, f, n)
    expected = {(0, 0): I, (1, 1): D @ Dp - Dp @ D}
    for key in ((0, 0), (1, 0), (0, 1), (1, 1)):
        diff = prod.get(key, qzeros(n, n)) - expected.get(key, qzeros(n, n))
        if nonzero_indices(diff):
            raise AssertionError(f"commutator identity fails at eps monomial {key}")
    return prod


# ---------------------------------------------------------------------------
# pullback along algebra maps

class Pullback(NamedTuple):
    module: FDModule      # f^* X over f.target
    unit: np.ndarray      # X -> f^* X, x -> 1 (x) x  (f.source-linear)


def pullback(f: AlgebraHom, X: FDModule) -> Pullback:
    if X.algebra != f.source:
        raise DimensionError("module is not over the source of the homomorphism")
    B, Bp = f.source, f.target
    m, nB, nBp = X.dim, B.dim, Bp.dim
    amb = nBp * m      # basis e_p (x) x_u at index p*m + u
    rels = []
    for p in range(nBp):
        for j in range(nB):
            # e_p f(e_j) (x) x - e_p (x) e_j x
            left = np.kron(Bp.mul(Bp.basis(p), f.matrix[:, j]).reshape(-1, 1), qeye(m))
            right = np.kron(Bp.basis(p).reshape(-1, 1), X.action[j])
            rels.append(left - right)
    W = np.concatenate(rels, axis=1) if rels else qzeros(amb, 0)
    Q = quotient(W, amb)
    act = np.stack([qdot(Q.proj, qdot(np.kron(L, qeye(m)), Q.section)) for L in Bp.left_matrices()]) \
        if Q.dim else qzeros(nBp, 0, 0)
    unit = Q.proj @ np.kron(Bp.unit.reshape(-1, 1), qeye(m))
    return Pullback(FDModule(Bp, act), unit)


def _map_from_generators(src: FDModule, dst: FDModule, gens, images) -> np.ndarray:
    G = np.concatenate([qdot(a, gens) for a in src.action], axis=1)
    H = np.concatenate([qdot(b, images) for b in dst.action], axis=1)
    if rank(G) != src.dim:
        raise ValidationError("generators do not span the module")
    sol = solve_linear(G.T, H.T)
    if sol.particular is None:
        raise ValidationError("no module map with the prescribed values")
    phi = sol.particular.T
    if any(nonzero_indices(qdot(phi, a) - qdot(b, phi)) for a, b in zip(src.action, dst.action)):
        raise ValidationError("prescribed values are not equivariant")
    return phi


# ---------------------------------------------------------------------------
# fiber squares

@dataclass
class FiberSquare:
    """S3 --p--> S1, S3 --q--> S2, S1 --i--> S0 <--j-- S2 with S3 = S1 x_S0 S2."""

    p: AlgebraHom
    q: AlgebraHom
    i: AlgebraHom
    j: AlgebraHom
    name: str = ""

    def __post_init__(self):
        if not (self.p.source == self.q.source and self.p.target == self.i.source
                and self.q.target == self.j.source and self.i.target == self.j.target):
            raise InputError("maps do not form a square")
        if nonzero_indices(self.i.matrix @ self.p.matrix - self.j.matrix @ self.q.matrix):
            raise ValidationError("square does not commute")
        pq = np.concatenate([self.p.matrix, self.q.matrix], axis=0)
        fib = kernel_basis(np.concatenate([self.i.matrix, -self.j.matrix], axis=1))
        if rank(pq) != self.p.source.dim or rank(pq) != fib.shape[1]:
            raise ValidationError("S3 is not the fiber product of S1 and S2 over S0")

    def over(self, A: FinDimAlgebra) -> "FiberSquare":
        return FiberSquare(self.p.tensor_left(A), self.q.tensor_left(A),
                           self.i.tensor_left(A), self.j.tensor_left(A), self.name)


class FiberObject(NamedTuple):
    """(X, Y, phi) with phi: i^* X -> j^* Y an isomorphism."""

    X: FDModule
    Y: FDModule
    phi: np.ndarray


def functor_F(sq: FiberSquare, M: FDModule) -> FiberObject:
    PX, PY = pullback(sq.p, M), pullback(sq.q, M)
    Zi, Zj = pullback(sq.i, PX.module), pullback(sq.j, PY.module)
    # both sides are the pullback of M along i p = j q; match the images of M
    phi = _map_from_generators(Zi.module, Zj.module, Zi.unit @ PX.unit, Zj.unit @ PY.unit)
    if rank(phi) != Zi.module.dim or Zi.module.dim != Zj.module.dim:
        raise ValidationError("canonical comparison map is not invertible")
    return FiberObject(PX.module, PY.module, phi)


class FiberProduct(NamedTuple):
    module: FDModule
    basis: np.ndarray      # columns in X + Y spanning X x_Z Y


def functor_G(sq: FiberSquare, obj: FiberObject) -> FiberProduct:
    X, Y, phi = obj
    Zi, Zj = pullback(sq.i, X), pullback(sq.j, Y)
    to_z_y = inverse(phi) @ Zj.unit
    K = kernel_basis(np.concatenate([Zi.unit, -to_z_y], axis=1))
    S3 = sq.p.source
    acts = []
    for t in range(S3.dim):
        a = X.rho(sq.p.matrix[:, t])
        b = Y.rho(sq.q.matrix[:, t])
        blk = qzeros(X.dim + Y.dim, X.dim + Y.dim)
        blk[:X.dim, :X.dim] = a
        blk[X.dim:, X.dim:] = b
        acts.append(restrict(K, blk) if K.shape[1] else qzeros(0, 0))
    return FiberProduct(FDModule(S3, np.stack(acts)), K)


def unit_map(sq: FiberSquare, M: FDModule) -> tuple:
    """Matrix of M -> G F(M) together with dim G F(M)."""
    obj = functor_F(sq, M)
    G = functor_G(sq, obj)
    PX, PY = pullback(sq.p, M), pullback(sq.q, M)
    v = np.concatenate([PX.unit, PY.unit], axis=0)
    return coordinates(G.basis, v), G.module.dim


def counit_maps(sq: FiberSquare, obj: FiberObject) -> tuple:
    """Components p^* G(obj) -> X and q^* G(obj) -> Y."""
    G = functor_G(sq, obj)
    X, Y = obj.X, obj.Y
    out = []
    for f, target, rows in ((sq.p, X, slice(0, X.dim)), (sq.q, Y, slice(X.dim, X.dim + Y.dim))):
        P = pullback(f, G.module)
        proj = G.basis[rows, :]
        out.append(_map_from_generators(P.module, target, P.unit, proj))
    return tuple(out)


def is_iso(M) -> bool:
    return M.shape[0] == M.shape[1] and rank(M) == M.shape[0]


def check_square(sq: FiberSquare, M: FDModule, rng=None) -> dict:
    """Unit at M and counit at a re-coordinatized F(M), both tested for bijectivity."""
    u, _ = unit_map(sq, M)
    obj = functor_F(sq, M)
    if rng is not None:
        obj = transport(sq, obj, random_invertible(obj.X.dim, rng),
                        random_invertible(obj.Y.dim, rng))
    cx, cy = counit_maps(sq, obj)
    return {"unit": is_iso(u), "counit_X": is_iso(cx), "counit_Y": is_iso(cy),
            "dims": [M.dim, obj.X.dim, obj.Y.dim]}


def random_invertible(n: int, rng) -> np.ndarray:
    """Product of random unit lower and upper triangular integer matrices."""
    L, U = qeye(n), qeye(n)
    for r in range(n):
        for c in range(r):
            L[r, c] = Fraction(int(rng.integers(-2, 3)))
            U[c, r] = Fraction(int(rng.integers(-2, 3)))
    return L @ U


def transport(sq: FiberSquare, obj: FiberObject, PX, PY) -> FiberObject:
    """The isomorphic object with X, Y re-expressed in the bases given by PX, PY."""
    X2, Y2 = obj.X.change_basis(PX), obj.Y.change_basis(PY)
    Zi, Zj = pullback(sq.i, obj.X), pullback(sq.j, obj.Y)
    Zi2, Zj2 = pullback(sq.i, X2), pullback(sq.j, Y2)
    gi = _map_from_generators(Zi2.module, Zi.module, Zi2.unit, Zi.unit @ PX)
    gj = _map_from_generators(Zj2.module, Zj.module, Zj2.unit, Zj.unit @ PY)
    return FiberObject(X2, Y2, inverse(gj) @ obj.phi @ gi)


# ---------------------------------------------------------------------------
# the concrete squares

def _hom(src, dst, cols):
    return AlgebraHom(src, dst, qmat(cols).T)


def goodness_square() -> FiberSquare:
    """D = Q x_T (D (x) D) with q(eps) = e1 e2, p(eps) = 0 and T = Q[e1,e2]/m^2."""
    Q, D, T = field_q(), dual_numbers(), square_zero_plane()
    DD = base_change(D, D)    # basis 1, e2, e1, e1e2
    p = _hom(D, Q, [[1], [0]])
    q = _hom(D, DD, [[1, 0, 0, 0], [0, 0, 0, 1]])
    i = _hom(Q, T, [[1, 0, 0]])
    j = _hom(DD, T, [[1, 0, 0], [0, 0, 1], [0, 1, 0], [0, 0, 0]])
    return FiberSquare(p, q, i, j, "goodness")


def condition_e_square() -> FiberSquare:
    """T = D x_Q D with p(e1) = eps, p(e2) = 0 and symmetrically for q."""
    Q, D, T = field_q(), dual_numbers(), square_zero_plane()
    p = _hom(T, D, [[1, 0], [0, 1], [0, 0]])
    q = _hom(T, D, [[1, 0], [0, 0], [0, 1]])
    i = _hom(D, Q, [[1], [0]])
    return FiberSquare(p, q, i, i, "condition-E")


def coker_functor(X: FDModule, A: FinDimAlgebra) -> FDModule:
    """f^* for f: A[eps] -> A, eps -> 0: the A-module coker d_X."""
    D = dual_numbers()
    B = base_change(A, D)
    if X.algebra != B:
        raise DimensionError("module must be over A (x) Q[eps]/eps^2")
    d = X.action[1]       # e_0 (x) eps
    acts = X.action[0::2]   # e_i (x) 1
    Q = quotient(d, X.dim)
    return FDModule(A, np.stack([Q.proj @ a @ Q.section for a in acts]) if Q.dim
                    else qzeros(A.dim, 0, 0))
