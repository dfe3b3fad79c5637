"""Skeletal 2-groups.

A skeletal 2-group is stored as a finite group ``pi0`` (multiplication table,
identity at index 0), a finite abelian group ``pi1`` whose elements are
indexed row-major in their invariant-factor coordinates, an action table
``action[g][a]`` and a normalized associator ``alpha[g, h, k]`` (an element
index of pi1).  Every morphism is an endomorphism and is identified with a pi1
element via ``u -> u (x) id``; tensoring on the right therefore twists labels
by the action.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import NamedTuple, Optional, Sequence

import numpy as np

from . import coherence as C
from .errors import InputError, ValidationError
from .exactlin import FinAbGroup, cokernel, imat, integer_kernel


class FiniteGroup:
    """A finite group given by its multiplication table; 0 is the identity."""

    def __init__(self, table):
        T = np.asarray(table, dtype=np.int64)
        if T.ndim != 2 or T.shape[0] != T.shape[1] or T.shape[0] == 0:
            raise InputError("group table must be a non-empty square array")
        n = T.shape[0]
        if T.min() < 0 or T.max() >= n:
            raise InputError("group table entries out of range")
        self.table = T
        self.n = n
        self._validate()
        self.inv = np.array([int(np.where(T[g] == 0)[0][0]) for g in range(n)])

    def _validate(self):
        T, n = self.table, self.n
        idx = np.arange(n)
        if not (np.array_equal(T[0], idx) and np.array_equal(T[:, 0], idx)):
            raise InputError("index 0 must be the identity of the table")
        for g in range(n):
            if sorted(T[g]) != list(range(n)) or sorted(T[:, g]) != list(range(n)):
                raise InputError("table is not a Latin square")
        # (gh)k == g(hk) for all triples at once
        left = T[T[:, :, None], idx[None, None, :]]
        right = T[idx[:, None, None], T[None, :, :]]
        if not np.array_equal(left, right):
            bad = np.argwhere(left != right)[0]
            raise InputError(f"table is not associative at {tuple(int(b) for b in bad)}")

    def mul(self, g, h) -> int:
        return int(self.table[g, h])

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def order_of(self, g) -> int:
        k, x = 1, g
        while x != 0:
            x = self.table[x, g]
            k += 1
        return k

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        i = np.arange(n)
        return cls((i[:, None] + i[None, :]) % n)

    @classmethod
    def from_elements(cls, elems, mul, identity) -> "FiniteGroup":
        elems = list(elems)
        elems.remove(identity)
        elems = [identity] + elems
        index = {e: i for i, e in enumerate(elems)}
        return cls([[index[mul(a, b)] for b in elems] for a in elems])

    @classmethod
    def symmetric(cls, k: int) -> "FiniteGroup":
        """Permutations of range(k) in lexicographic order, composed as (pq)(i) = p(q(i))."""
        from itertools import permutations
        perms = list(permutations(range(k)))
        return cls.from_elements(perms, lambda p, q: tuple(p[q[i]] for i in range(k)),
                                 tuple(range(k)))

    @classmethod
    def direct_product(cls, A: "FiniteGroup", B: "FiniteGroup") -> "FiniteGroup":
        n, m = A.n, B.n
        T = np.empty((n * m, n * m), dtype=np.int64)
        for a1, b1, a2, b2 in product(range(n), range(m), range(n), range(m)):
            T[a1 * m + b1, a2 * m + b2] = A.table[a1, a2] * m + B.table[b1, b2]
        return cls(T)


def abelian_invariants_from_table(G: FiniteGroup) -> FinAbGroup:
    """Invariant factors of an abelian table group, matched by order statistics."""
    if not G.is_abelian():
        raise ValueError("group is not abelian")
    n = G.n
    orders = [G.order_of(g) for g in range(n)]

    def count(k):
        return sum(1 for o in orders if k % o == 0)

    def chains(m, prev):
        if m == 1:
            yield ()
            return
        for d in range(2, m + 1):
            if m % d == 0 and (prev is None or d % prev == 0):
                for rest in chains(m // d, d):
                    yield (d,) + rest

    divisors = [k for k in range(1, n + 1) if n % k == 0]
    from math import gcd
    for ch in chains(n, None):
        if all(count(k) == np.prod([gcd(k, d) for d in ch]) for k in divisors):
            return FinAbGroup(ch)
    raise AssertionError("no invariant factors match")


class Morphism2G(NamedTuple):
    source: int
    target: int
    label: int


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


class Skeletal2Group:
    def __init__(self, pi0, pi1: FinAbGroup, action=None, alpha=None, check=True):
        self.pi0 = pi0 if isinstance(pi0, FiniteGroup) else FiniteGroup(pi0)
        if not pi1.is_finite:
            raise InputError("pi1 must be finite")
        self.pi1 = pi1
        n, m = self.pi0.n, pi1.order
        self.n, self.m = n, m
        elems = pi1.elements()
        self.add_table = np.array([[pi1.index(pi1.add(a, b)) for b in elems] for a in elems],
                                  dtype=np.int64).reshape(m, m)
        self.neg_table = np.array([pi1.index(pi1.neg(a)) for a in elems], dtype=np.int64)
        if action is None:
            action = np.tile(np.arange(m), (n, 1))
        self.action = np.asarray(action, dtype=np.int64).reshape(n, m) if m else \
            np.zeros((n, 0), dtype=np.int64)
        if alpha is None:
            alpha = np.zeros((n, n, n), dtype=np.int64)
        self.alpha = np.asarray(alpha, dtype=np.int64)
        if self.alpha.shape != (n, n, n):
            raise InputError(f"alpha must have shape {(n, n, n)}")
        if check:
            self._validate_tables()

    # -- construction helpers -------------------------------------------------
    @classmethod
    def from_values(cls, pi0, pi1: FinAbGroup, action=None, alpha_values: Optional[dict] = None,
                    check=True):
        """Build from a sparse ``{(g, h, k): element}`` map; elements may be
        coordinate tuples or indices."""
        G0 = pi0 if isinstance(pi0, FiniteGroup) else FiniteGroup(pi0)
        n = G0.n
        alpha = np.zeros((n, n, n), dtype=np.int64)
        for key, v in (alpha_values or {}).items():
            alpha[tuple(key)] = to_index(pi1, v)
        return cls(G0, pi1, action, alpha, check=check)

    def _validate_tables(self):
        n, m, A = self.n, self.m, self.action
        if A.min(initial=0) < 0 or A.max(initial=0) >= max(m, 1):
            raise InputError("action entries out of range")
        if not np.array_equal(A[0], np.arange(m)):
            raise InputError("identity of pi0 must act trivially")
        for g in range(n):
            if not np.array_equal(A[g][self.add_table], self.add_table[A[g][:, None], A[g][None, :]]):
                raise InputError(f"action of {g} is not additive")
            if sorted(A[g]) != list(range(m)):
                raise InputError(f"action of {g} is not bijective")
            for h in range(n):
                if not np.array_equal(A[self.pi0.mul(g, h)], A[g][A[h]]):
                    raise InputError(f"action does not respect the product at {(g, h)}")
        al = self.alpha
        if al.min(initial=0) < 0 or al.max(initial=0) >= max(m, 1):
            raise InputError("alpha entries out of range")
        if np.any(al[0]) or np.any(al[:, 0]) or np.any(al[:, :, 0]):
            raise InputError("alpha is not normalized")

    # -- pi1 arithmetic on indices ----------------------------------------------
    def add_idx(self, a, b) -> int:
        return int(self.add_table[a, b])

    def neg_idx(self, a) -> int:
        return int(self.neg_table[a])

    def act_idx(self, g, a) -> int:
        return int(self.action[g, a])

    def alpha_idx(self, g, h, k) -> int:
        return int(self.alpha[g, h, k])

    def inv0(self, g) -> int:
        return int(self.pi0.inv[g])

    def element(self, idx) -> tuple:
        return self.pi1.element(idx)

    def _term_value(self, t) -> int:
        kind = t[0]
        if kind == "v":
            return t[2]
        if kind == "I":
            return 0
        if kind == "s":
            return self.inv0(self._term_value(t[1]))
        return self.pi0.mul(self._term_value(t[1]), self._term_value(t[2]))

    # -- monoidal structure -------------------------------------------------------
    def tensor_obj(self, x, y) -> int:
        return self.pi0.mul(x, y)

    def tensor_mor(self, a: Morphism2G, b: Morphism2G) -> Morphism2G:
        if a.source != a.target or b.source != b.target:
            raise InputError("skeletal morphisms are endomorphisms")
        label = self.add_idx(a.label, self.act_idx(a.source, b.label))
        return Morphism2G(self.tensor_obj(a.source, b.source),
                          self.tensor_obj(a.target, b.target), label)

    def cocycle_residual(self) -> np.ndarray:
        """``g.a(h,k,l) - a(gh,k,l) + a(g,hk,l) - a(g,h,kl) + a(g,h,k)`` on all quadruples."""
        n, T, al, add, neg = self.n, self.pi0.table, self.alpha, self.add_table, self.neg_table
        g, h, k, l = np.meshgrid(*(np.arange(n),) * 4, indexing="ij")
        t1 = self.action[g, al[h, k, l]]
        t2 = neg[al[T[g, h], k, l]]
        t3 = al[g, T[h, k], l]
        t4 = neg[al[g, h, T[k, l]]]
        t5 = al[g, h, k]
        return add[add[add[add[t1, t2], t3], t4], t5]

    def check_pentagon(self) -> ValidationReport:
        res = self.cocycle_residual()
        bad = [tuple(int(i) for i in q) for q in np.argwhere(res != 0)]
        return ValidationReport(not bad, bad)

    def require_valid(self):
        rep = self.check_pentagon()
        if not rep.ok:
            raise ValidationError("associator violates the pentagon", rep.violations[0])

    # -- inverses and commutators ---------------------------------------------
    def sigma(self, x) -> tuple:
        """``(sigma x, e_x, i_x)``; e_x is fixed to 0 and i_x is evaluated."""
        return self.inv0(x), 0, int(_formulas()["coev"].evaluate(self, {"x": x}))

    def zigzags(self, x) -> tuple[int, int]:
        """Labels of the two triangle composites for the quadruple at x."""
        f = _formulas()
        return (int(f["zig1"].evaluate(self, {"x": x})),
                int(f["zig2"].evaluate(self, {"x": x})))

    def comm(self, x, y) -> "CommData":
        obj = self._term_value(comm_term(C.letter("x", x), C.letter("y", y)))
        s_label = int(_formulas()["s"].evaluate(self, {"x": x, "y": y}))
        unit_label = None
        if x == 0 or y == 0:
            # the identity letter is replaced by the unit object, then reduced
            X = C.I if x == 0 else C.letter("x", x)
            Y = C.I if y == 0 else C.letter("y", y)
            unit_label = C.reduce_to_unit(self, comm_term(X, Y)).label
        return CommData(obj, s_label, unit_label)

    def check_cor_for_i(self, x, y) -> bool:
        """s_{y,x} transported by sigma after s_{x,y} equals the e-isomorphism."""
        return int(_formulas()["cor"].evaluate(self, {"x": x, "y": y})) == 0

    def tricomm(self, x, y, z) -> "TricommData":
        vals = {"x": x, "y": y, "z": z}
        f = _formulas()
        X, Y, Z = (C.letter(n, vals[n]) for n in "xyz")
        obj = self._term_value(C.word(*tricomm_factors(X, Y, Z)))
        labels = {s: int(f["tri:" + s].evaluate(self, vals)) for s in C.STRATEGIES}
        if len(set(labels.values())) != 1:
            raise C.CoherenceError(f"canonical isomorphism depends on the route: {labels}")
        self_iso = int(f["tri_self"].evaluate(self, vals))
        return TricommData(obj, labels[C.STRATEGIES[0]], labels, self_iso)

    def coherence_report(self) -> dict:
        """Every coherence check on all objects, pairs and triples (vectorized)."""
        n, f = self.n, _formulas()
        x = np.arange(n)
        zig = [int(g) for g in x if f["zig1"].evaluate(self, {"x": g}) != 0
               or f["zig2"].evaluate(self, {"x": g}) != 0]
        gx, gy = np.meshgrid(x, x, indexing="ij")
        cor = f["cor"].evaluate(self, {"x": gx, "y": gy})
        tx, ty, tz = np.meshgrid(x, x, x, indexing="ij")
        vals = {"x": tx, "y": ty, "z": tz}
        routes = [np.broadcast_to(f["tri:" + s].evaluate(self, vals), tx.shape)
                  for s in C.STRATEGIES]
        dep = np.zeros(tx.shape, dtype=bool)
        for r in routes[1:]:
            dep |= r != routes[0]
        X, Y, Z = (C.letter(nm, None) for nm in "xyz")
        obj = np.broadcast_to(C.term_value_grid(self, C.word(*tricomm_factors(X, Y, Z)), vals),
                              tx.shape)
        selfiso = np.broadcast_to(f["tri_self"].evaluate(self, vals), tx.shape)

        def where(mask):
            return [tuple(int(i) for i in w) for w in np.argwhere(mask)]

        return {"zigzag": zig,
                "cor_for_i": where(np.broadcast_to(cor, gx.shape) != 0),
                "tricomm_path": where(dep),
                "tricomm_object": where(obj != 0),
                "tri_identity": where(selfiso != 0)}

    # direct evaluation on this group, without the compiled formulas
    def direct_labels(self, x, y, z) -> dict:
        X, Y, Z = (C.letter(nm, v) for nm, v in zip("xyz", (x, y, z)))
        return _build_paths(self, X, Y, Z)


def _build_paths(G, X, Y, Z) -> dict:
    """All the composites the coherence checks compare, as labels over G."""
    out = {}
    out["coev"] = C.Path(G, C.ten(X, C.sig(X))).coev().label
    p = C.Path(G, X)
    p.apply("runit_inv").apply("ev_inv", (1,), X).apply("assoc_inv")
    p.coev((0,)).apply("lunit")
    q = C.Path(G, C.sig(X))
    q.apply("runit_inv").coev_inv((1,), X).apply("assoc_inv")
    q.apply("ev", (0,)).apply("lunit")
    assert p.term == X and q.term == C.sig(X)
    out["zig1"], out["zig2"] = p.label, q.label
    s = s_path(G, X, Y)
    out["s"] = s.label
    s.splice(s_path(G, Y, X), (0,))
    e = C.Path(G, comm_term(X, Y)).dbl()
    assert s.term == e.term
    out["cor"] = G.add_idx(s.label, G.neg_idx(e.label))
    P1, P2, P3 = tricomm_factors(X, Y, Z)
    term = C.word(P1, P2, P3)
    for strat in C.STRATEGIES:
        out["tri:" + strat] = C.reduce_to_unit(G, term, strat).label
    # (XY)X -> IX -> X  versus  (XY)X -> X(YX) -> XI -> X
    XY = C.ten(P1, C.ten(P2, P3))
    YX = C.ten(C.ten(P2, P3), P1)
    a = C.Path(G, C.ten(XY, P1)).splice(C.reduce_to_unit(G, XY), (0,)).apply("lunit")
    b = C.Path(G, C.ten(XY, P1)).apply("assoc")
    b.splice(C.reduce_to_unit(G, YX), (1,)).apply("runit")
    out["tri_self"] = G.add_idx(b.label, G.neg_idx(a.label))
    return out


@lru_cache(maxsize=None)
def _formulas() -> dict:
    F = C.FormalGroup()
    X, Y, Z = (C.letter(n, None) for n in "xyz")
    return {k: C.Formula(v) for k, v in _build_paths(F, X, Y, Z).items()}


def s_path(G, X, Y) -> C.Path:
    """(x,y) -> ss(x,y) -> s(ss(y) ss(x) s(y) s(x)) <- s((y,x))."""
    Cxy = comm_term(X, Y)
    p = C.Path(G, Cxy).dbl()
    inner = C.Path(G, C.sig(Cxy))
    inner.sigma_tensor().sigma_tensor((1,)).sigma_tensor((1, 1))
    inner.apply("assoc_inv").apply("assoc_inv")
    p.splice(inner, (0,))
    raise_letters = C.Path(G, comm_term(Y, X)).dbl((0, 0, 0)).dbl((0, 0, 1))
    p.splice(raise_letters.inverse(), (0,))
    assert p.term == C.sig(comm_term(Y, X))
    return p


class CommData(NamedTuple):
    obj: int
    s_label: int
    unit_label: Optional[int]


class TricommData(NamedTuple):
    obj: int
    label: int
    route_labels: dict
    self_iso: int


def comm_term(x, y):
    """((x y) s(x)) s(y)."""
    return C.word(x, y, C.sig(x), C.sig(y))


def conj_term(x, y):
    """(x y) s(x), the conjugate of y by x."""
    return C.word(x, y, C.sig(x))


def tricomm_factors(x, y, z):
    return (comm_term(comm_term(x, y), conj_term(y, z)),
            comm_term(comm_term(y, z), conj_term(z, x)),
            comm_term(comm_term(z, x), conj_term(x, y)))


# ---------------------------------------------------------------------------
# element conversion

def to_index(pi1: FinAbGroup, v) -> int:
    if isinstance(v, (list, tuple)):
        if len(v) != len(pi1.invariant_factors):
            raise InputError(f"element {v} has the wrong number of coordinates")
        return pi1.index(v)
    v = int(v)
    if len(pi1.invariant_factors) == 1:
        return v % pi1.invariant_factors[0]
    if not 0 <= v < pi1.order:
        raise InputError(f"element index {v} out of range")
    return v


def cochain_coboundary(G: Skeletal2Group, beta) -> np.ndarray:
    """(d beta)(g,h,k) = g.beta(h,k) - beta(gh,k) + beta(g,hk) - beta(g,h)."""
    n, T, add, neg = G.n, G.pi0.table, G.add_table, G.neg_table
    beta = np.asarray(beta, dtype=np.int64)
    g, h, k = np.meshgrid(*(np.arange(n),) * 3, indexing="ij")
    t1 = G.action[g, beta[h, k]]
    t2 = neg[beta[T[g, h], k]]
    t3 = beta[g, T[h, k]]
    t4 = neg[beta[g, h]]
    return add[add[add[t1, t2], t3], t4]


# ---------------------------------------------------------------------------
# homomorphisms and kernels

@dataclass
class Hom2G:
    """A monoidal functor between skeletal 2-groups.

    ``f1`` is an integer matrix on invariant-factor coordinates; ``gamma[x, y]``
    is the label of F(xy) -> F(x)F(y).
    """

    f0: Sequence[int]
    f1: np.ndarray
    gamma: np.ndarray

    def f1_idx(self, G: Skeletal2Group, H: Skeletal2Group, a: int) -> int:
        v = G.pi1.element(a)
        w = [sum(int(self.f1[i, j]) * v[j] for j in range(len(v))) for i in range(self.f1.shape[0])]
        return H.pi1.index(H.pi1.reduce(w))


def validate_hom(F: Hom2G, G: Skeletal2Group, H: Skeletal2Group) -> None:
    f0 = [int(v) for v in F.f0]
    if len(f0) != G.n or any(not 0 <= v < H.n for v in f0):
        raise InputError("f0 has the wrong length or range")
    for g, h in product(range(G.n), repeat=2):
        if f0[G.pi0.mul(g, h)] != H.pi0.mul(f0[g], f0[h]):
            raise ValidationError("f0 is not a homomorphism", (g, h))
    F1 = np.asarray(F.f1, dtype=object)
    r, r2 = len(G.pi1.invariant_factors), len(H.pi1.invariant_factors)
    if F1.shape != (r2, r):
        raise InputError(f"f1 must be a {r2}x{r} matrix")
    for j, d in enumerate(G.pi1.invariant_factors):
        col = [int(F1[i, j]) * d for i in range(r2)]
        if any(H.pi1.reduce(col)):
            raise ValidationError("f1 is not well defined on the generator", j)
    f1 = [F.f1_idx(G, H, a) for a in range(G.m)]
    for g, a in product(range(G.n), range(G.m)):
        if f1[G.act_idx(g, a)] != H.act_idx(f0[g], f1[a]):
            raise ValidationError("f1 is not equivariant", (g, a))
    gamma = np.asarray(F.gamma, dtype=np.int64)
    if gamma.shape != (G.n, G.n) or np.any(gamma[0]) or np.any(gamma[:, 0]):
        raise InputError("gamma must be a normalized n x n table")
    dg = cochain_coboundary(_pullback_frame(G, H, f0), gamma)
    for g, h, k in product(range(G.n), repeat=3):
        want = H.add_idx(H.alpha_idx(f0[g], f0[h], f0[k]), H.neg_idx(f1[G.alpha_idx(g, h, k)]))
        if dg[g, h, k] != want:
            raise ValidationError("gamma does not satisfy the monoidal coherence", (g, h, k))


def _pullback_frame(G: Skeletal2Group, H: Skeletal2Group, f0) -> Skeletal2Group:
    """pi0 of G acting on pi1 of H through f0 (used to take coboundaries)."""
    action = H.action[np.asarray(f0)]
    return Skeletal2Group(G.pi0, H.pi1, action, None, check=False)


class Kernel2G(NamedTuple):
    pi0: FiniteGroup
    pi0_elements: list    # (x, coker coordinates) per table index
    pi1: FinAbGroup
    ker_f0: list
    coker_f1: FinAbGroup


def kernel(F: Hom2G, G: Skeletal2Group, H: Skeletal2Group, check=True) -> Kernel2G:
    """pi0 and pi1 of the kernel: pairs (x, iota: F(x) ~ I) up to isomorphism."""
    if check:
        validate_hom(F, G, H)
    f0 = [int(v) for v in F.f0]
    ker0 = [x for x in range(G.n) if f0[x] == 0]
    # coker f1: Z^r2 / (image of generators + relations of H.pi1)
    dH = H.pi1.invariant_factors
    r, r2 = len(G.pi1.invariant_factors), len(dH)
    F1 = np.asarray(F.f1, dtype=object).reshape(r2, r)
    rel = [[int(F1[i, j]) for i in range(r2)] for j in range(r)]
    rel += [[d if i == k else 0 for i in range(r2)] for k, d in enumerate(dH)]
    Q = cokernel(imat(rel) if rel else np.empty((0, r2), dtype=object), r2)
    if not Q.is_finite:
        raise AssertionError("cokernel of a map between finite groups is finite")
    # ker f1 = {v in Z^r : F1 v in D_H Z^r2} / D_G Z^r
    dG = G.pi1.invariant_factors
    M = np.empty((r2, r + r2), dtype=object)
    for i in range(r2):
        for j in range(r):
            M[i, j] = int(F1[i, j])
        for j in range(r2):
            M[i, r + j] = -dH[i] if i == j else 0
    L = integer_kernel(M)[:r, :] if r else np.empty((0, 0), dtype=object)
    K1 = _lattice_quotient(L, dG)
    # pi0 of the kernel
    elems = [(x, q) for x in ker0 for q in Q.elements()]
    index = {e: i for i, e in enumerate(elems)}
    gamma = np.asarray(F.gamma, dtype=np.int64)

    def proj(a_idx):
        return Q.project(H.pi1.element(a_idx))

    table = [[index[(G.pi0.mul(x, y), Q.add(Q.add(p, q), proj(gamma[x, y])))]
              for (y, q) in elems] for (x, p) in elems]
    return Kernel2G(FiniteGroup(table), elems, K1, ker0, Q)


def _lattice_quotient(L, d) -> FinAbGroup:
    """``L / (d_1 Z + ... + d_r Z)`` for a lattice L (columns) containing the relations."""
    r = L.shape[0]
    k = L.shape[1] if L.ndim == 2 else 0
    if k == 0:
        return FinAbGroup(())
    from .exactlin import qmat, solve_linear
    Lq = qmat(L)
    rows = []
    for i, di in enumerate(d):
        e = [0] * r
        e[i] = di
        sol = solve_linear(Lq, [e[j] for j in range(r)]).particular
        assert sol is not None and all(v.denominator == 1 for v in sol)
        rows.append([int(v) for v in sol])
    return cokernel(imat(rows), k) if rows else cokernel(np.empty((0, k), dtype=object), k)
