"""Independent reference implementations used only by the tests.

Nothing here imports the routines it is meant to check.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product
from math import gcd


# ---------------------------------------------------------------------------
# integer matrices: invariant factors from determinantal divisors

def _det(M):
    n = len(M)
    if n == 0:
        return 1
    # Laplace expansion is enough at the sizes used here, but use fractions
    A = [[Fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return int(det)


def invariant_factors_oracle(M, ncols=None):
    """Invariant factors (1s dropped, 0 for free summands) of Z^cols / rowspan(M).

    d_k = D_k / D_{k-1} with D_k the gcd of all k x k minors.
    """
    rows = len(M)
    cols = len(M[0]) if rows else ncols
    D = [1]
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                g = gcd(g, _det([[M[r][c] for c in cs] for r in rs]))
        if g == 0:
            break
        D.append(g)
    factors = [D[k] // D[k - 1] for k in range(1, len(D))]
    factors = [f for f in factors if f != 1]
    return tuple(factors + [0] * (cols - (len(D) - 1)))


# ---------------------------------------------------------------------------
# 3-cocycles by direct evaluation

def cocycle_violations(table, order, action, alpha):
    """All (g,h,k,l) where the 3-cocycle condition fails; pi1 = Z/order (cyclic)."""
    n = len(table)
    m = order
    out = []
    for g, h, k, l in product(range(n), repeat=4):
        v = (action[g][alpha[h][k][l]] - alpha[table[g][h]][k][l] + alpha[g][table[h][k]][l]
             - alpha[g][h][table[k][l]] + alpha[g][h][k]) % m
        if v:
            out.append((g, h, k, l))
    return out


# ---------------------------------------------------------------------------
# general L-infinity relation with Koszul signs

def _chi(degs, order):
    """Sign of x_order[0] ^ ... relative to x_0 ^ x_1 ^ ... in the graded exterior algebra."""
    perm = list(order)
    sign = 1
    # bubble sort perm into increasing order, tracking each adjacent swap
    for i in range(len(perm)):
        for j in range(len(perm) - 1 - i):
            if perm[j] > perm[j + 1]:
                a, b = degs[perm[j]], degs[perm[j + 1]]
                sign *= -1 if (a * b) % 2 == 0 else 1
                perm[j], perm[j + 1] = perm[j + 1], perm[j]
    return sign


class GradedBrackets:
    """Brackets on homogeneous basis elements (deg, index), deg in {0, -1}.

    Raw data comes in as nested lists; only canonical argument orders are
    read and everything else is produced by graded antisymmetry.  Brackets are
    rescaled by (-1)^(n(n-1)/2) before entering the relation.
    """

    def __init__(self, n0, n1, l1, l2_00, l2_0m, l3):
        self.n0, self.n1 = n0, n1
        self.raw = (l1, l2_00, l2_0m, l3)

    def basis(self):
        return [(0, i) for i in range(self.n0)] + [(-1, a) for a in range(self.n1)]

    def _canonical(self, args):
        """Sort args (degree 0 first, then index) and return (sign, sorted)."""
        key = lambda t: (-t[1][0], t[1][1])
        order = [i for i, _ in sorted(enumerate(args), key=key)]
        degs = [a[0] for a in args]
        return _chi(degs, order), [args[i] for i in order]

    def bracket(self, args) -> dict:
        n = len(args)
        sign, s = self._canonical(args)
        l1, l2_00, l2_0m, l3 = self.raw
        out = {}
        if n == 1:
            (d, a), = s
            if d == -1:
                for i in range(self.n0):
                    if l1[i][a]:
                        out[(0, i)] = Fraction(l1[i][a])
        elif n == 2:
            (d1, i), (d2, j) = s
            if d1 == 0 and d2 == 0:
                for k in range(self.n0):
                    if l2_00[i][j][k]:
                        out[(0, k)] = Fraction(l2_00[i][j][k])
            elif d1 == 0 and d2 == -1:
                for b in range(self.n1):
                    if l2_0m[i][j][b]:
                        out[(-1, b)] = Fraction(l2_0m[i][j][b])
        elif n == 3:
            if all(d == 0 for d, _ in s):
                i, j, k = (t[1] for t in s)
                for b in range(self.n1):
                    if l3[i][j][k][b]:
                        out[(-1, b)] = Fraction(l3[i][j][k][b])
        twist = -1 if (n * (n - 1) // 2) % 2 else 1
        return {key: sign * twist * v for key, v in out.items()}

    def bracket_linear(self, first: dict, rest) -> dict:
        out = {}
        for b, c in first.items():
            for key, v in self.bracket([b] + list(rest)).items():
                out[key] = out.get(key, 0) + c * v
        return out

    def relation(self, xs) -> dict:
        """Left side of the n-ary relation on basis elements xs."""
        n = len(xs)
        degs = [x[0] for x in xs]
        total = {}
        for i in range(1, n + 1):
            j = n + 1 - i
            for first in combinations(range(n), i):
                rest = [k for k in range(n) if k not in first]
                order = list(first) + rest
                sign = _chi(degs, order) * (-1) ** (i * (j - 1))
                inner = self.bracket([xs[k] for k in first])
                if not inner:
                    continue
                outer = self.bracket_linear(inner, [xs[k] for k in rest])
                for key, v in outer.items():
                    total[key] = total.get(key, 0) + sign * v
        return {k: v for k, v in total.items() if v != 0}


def linf_violations(n0, n1, l1, l2_00, l2_0m, l3, arity):
    """Basis tuples on which the arity-n relation fails."""
    B = GradedBrackets(n0, n1, l1, l2_00, l2_0m, l3)
    bad = []
    for xs in product(B.basis(), repeat=arity):
        r = B.relation(list(xs))
        if r:
            bad.append((xs, r))
    return bad


def linf_relation_tensor(n0, n1, l1, l2_00, l2_0m, l3, arity=4):
    """Relation values on all-degree-0 basis tuples, as {(i,j,k,l): {b: coeff}}."""
    B = GradedBrackets(n0, n1, l1, l2_00, l2_0m, l3)
    out = {}
    for idx in product(range(n0), repeat=arity):
        r = B.relation([(0, i) for i in idx])
        out[idx] = {k[1]: v for k, v in r.items()}
    return out


# ---------------------------------------------------------------------------
# linear algebra over Q by plain Gaussian elimination on lists

def rank_oracle(rows) -> int:
    A = [[Fraction(x) for x in r] for r in rows]
    if not A:
        return 0
    r = 0
    cols = len(A[0])
    for c in range(cols):
        p = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c] / A[r][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        r += 1
        if r == len(A):
            break
    return r


def hochschild_h1_oracle(mult, n) -> int:
    """dim H^1 of the Hochschild cochain complex A -> Hom(A,A) -> Hom(A (x) A, A).

    Cochains are enumerated one coordinate at a time; no Kronecker products.
    """
    def prod_(a, b):
        out = [Fraction(0)] * n
        for i in range(n):
            if a[i]:
                for j in range(n):
                    if b[j]:
                        for k in range(n):
                            out[k] += a[i] * b[j] * mult[i][j][k]
        return out

    basis = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    # delta^0 a : x -> x a - a x ; as a vector of Hom(A,A) coordinates f[x][k]
    d0_rows = []
    for a in basis:
        row = []
        for x in basis:
            xa, ax = prod_(x, a), prod_(a, x)
            row.extend(xa[k] - ax[k] for k in range(n))
        d0_rows.append(row)
    # delta^1 f (x,y) = x f(y) - f(xy) + f(x) y ; build matrix column by column
    d1_cols = []
    for p in range(n):
        for q in range(n):
            # f = E_{pq}: f(e_p) = e_q
            def f(v):
                out = [Fraction(0)] * n
                out[q] = v[p]
                return out
            col = []
            for x in basis:
                for y in basis:
                    a = prod_(x, f(y))
                    b = f(prod_(x, y))
                    c = prod_(f(x), y)
                    col.extend(a[k] - b[k] + c[k] for k in range(n))
            d1_cols.append(col)
    d1_rows = [list(r) for r in zip(*d1_cols)]
    z1 = n * n - rank_oracle(d1_rows)
    b1 = rank_oracle(d0_rows)
    return z1 - b1


# ---------------------------------------------------------------------------
# dual-number commutator as one big matrix over A (x) Q[e1, e2]/(e1^2, e2^2)

def _mm(X, Y):
    return [[sum(X[i][k] * Y[k][j] for k in range(len(Y))) for j in range(len(Y[0]))]
            for i in range(len(X))]


def dual_commutator_oracle(D, Dp):
    """(1 + e1 D)(1 + e2 D')(1 - e1 D)(1 - e2 D') as a 4n x 4n matrix.

    The scalar basis is 1, e1, e2, e1e2 and the index of (r, i) is r*n + i.
    Returns the block sending the 1-component to the e1e2-component, plus
    the residual of every other block against the identity.
    """
    n = len(D)
    # e1: 1 -> e1, e2 -> e1e2 ; e2: 1 -> e2, e1 -> e1e2  (columns are sources)
    E1 = {(1, 0), (3, 2)}
    E2 = {(2, 0), (3, 1)}

    def op(E, X, sign):
        M = [[Fraction(int(a == b)) for b in range(4 * n)] for a in range(4 * n)]
        for (r, s) in E:
            for i in range(n):
                for j in range(n):
                    M[r * n + i][s * n + j] += sign * Fraction(X[i][j])
        return M

    P = _mm(_mm(_mm(op(E1, D, 1), op(E2, Dp, 1)), op(E1, D, -1)), op(E2, Dp, -1))
    block = [[P[3 * n + i][j] for j in range(n)] for i in range(n)]
    rest = [P[a][b] - int(a == b) for a in range(4 * n) for b in range(4 * n)
            if not (a >= 3 * n and b < n)]
    return block, rest
