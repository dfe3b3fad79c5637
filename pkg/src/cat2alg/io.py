"""JSON readers and writers.

Rationals are written as integers or ``"p/q"`` strings; floats are rejected.
Sparse tensors are dictionaries keyed by ``"(i,j)->k"`` style strings.
"""

from __future__ import annotations

import json
import os
import re
from fractions import Fraction

import numpy as np

from .errors import DimensionError, InputError
from .exactlin import FinAbGroup, imat, qarray, qmat, qzeros, to_fraction, to_int
from .hochschild.algebra import FDModule, FinDimAlgebra
from .linf2 import L2Algebra
from .picard import Complex2
from .skewsym import PseudoL2Data
from .twogroup import FiniteGroup, Hom2G, Skeletal2Group


def max_dim() -> int:
    raw = os.environ.get("CAT2ALG_MAX_DIM", "64")
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"CAT2ALG_MAX_DIM={raw!r} is not an integer")


def check_dim(what: str, n: int) -> int:
    cap = max_dim()
    if n > cap:
        raise DimensionError(f"{what} = {n} exceeds CAT2ALG_MAX_DIM = {cap}")
    return n


def load(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})")


def _need(data: dict, key: str):
    if not isinstance(data, dict) or key not in data:
        raise InputError(f"missing field {key!r}")
    return data[key]


# ---------------------------------------------------------------------------
# output

def to_json_value(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, np.ndarray):
        return [to_json_value(v) for v in x.tolist()] if x.ndim else to_json_value(x.item())
    if isinstance(x, dict):
        return {str(k): to_json_value(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_json_value(v) for v in x]
    if isinstance(x, FinAbGroup):
        return {"invariant_factors": list(x.invariant_factors), "text": str(x)}
    return x


# ---------------------------------------------------------------------------
# sparse tensor keys

_KEY = re.compile(r"^\s*\(\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\)\s*(?:->\s*(\d+))?\s*$")


def parse_key(key: str, arity: int, has_out: bool) -> tuple:
    m = _KEY.match(key)
    if not m:
        raise InputError(f"malformed key {key!r}")
    idx = tuple(int(v) for v in m.group(1).split(","))
    if len(idx) != arity or (m.group(2) is None) == has_out:
        raise InputError(f"key {key!r} should look like "
                         + ("(" + ",".join("i" * arity) + ")" + ("->k" if has_out else "")))
    return idx + ((int(m.group(2)),) if has_out else ())


def sparse_tensor(data, shape, what: str) -> np.ndarray:
    """Dense tensor from ``{"(i,j)->k": value}``; a nested list is also accepted."""
    if data is None:
        return qzeros(*shape)
    if isinstance(data, list):
        T = qarray(data)
        if T.shape != tuple(shape):
            raise DimensionError(f"{what} has shape {T.shape}, expected {tuple(shape)}")
        return T
    if not isinstance(data, dict):
        raise InputError(f"{what} must be a dictionary or nested list")
    T = qzeros(*shape)
    for key, v in data.items():
        idx = parse_key(key, len(shape) - 1, True)
        if any(not 0 <= i < n for i, n in zip(idx, shape)):
            raise DimensionError(f"{what}: index {key!r} out of range")
        T[idx] = to_fraction(v)
    return T


def dump_sparse(T) -> dict:
    out = {}
    for idx in np.ndindex(T.shape):
        if T[idx] != 0:
            out["(" + ",".join(str(i) for i in idx[:-1]) + f")->{idx[-1]}"] = to_json_value(T[idx])
    return out


def _matrix(data, rows, cols, what) -> np.ndarray:
    if rows * cols == 0:
        return qzeros(rows, cols)
    M = qmat(data)
    if M.shape != (rows, cols):
        raise DimensionError(f"{what} has shape {M.shape}, expected {(rows, cols)}")
    return M


# ---------------------------------------------------------------------------
# 2-groups

def read_2group(data: dict) -> Skeletal2Group:
    table = _need(data, "pi0_table")
    check_dim("|pi0|", len(table))
    factors = data.get("pi1_invariant_factors", [])
    pi1 = FinAbGroup(tuple(to_int(d) for d in factors))
    if not pi1.is_finite:
        raise InputError("pi1 must be finite")
    check_dim("|pi1|", pi1.order)
    G0 = FiniteGroup(table)
    alpha = {}
    for key, v in (data.get("alpha") or {}).items():
        idx = parse_key(key, 3, False)
        if any(not 0 <= i < G0.n for i in idx):
            raise DimensionError(f"alpha index {key!r} out of range")
        alpha[idx] = tuple(v) if isinstance(v, list) else (v,)
    return Skeletal2Group.from_values(G0, pi1, data.get("action"), alpha)


def write_2group(G: Skeletal2Group) -> dict:
    alpha = {f"({g},{h},{k})": list(G.element(int(G.alpha[g, h, k])))
             for g, h, k in np.ndindex(G.alpha.shape) if G.alpha[g, h, k]}
    return {"pi0_table": G.pi0.table.tolist(),
            "pi1_invariant_factors": list(G.pi1.invariant_factors),
            "action": G.action.tolist(), "alpha": alpha}


def read_hom(data: dict, G: Skeletal2Group, H: Skeletal2Group) -> Hom2G:
    r, r2 = len(G.pi1.invariant_factors), len(H.pi1.invariant_factors)
    f1 = data.get("f1", [[0] * r for _ in range(r2)])
    F1 = imat(f1) if r * r2 else np.zeros((r2, r), dtype=object)
    gamma = data.get("gamma") or [[0] * G.n for _ in range(G.n)]
    return Hom2G(list(_need(data, "f0")), F1, np.asarray(gamma, dtype=np.int64))


# ---------------------------------------------------------------------------
# complexes

def read_complex(data: dict) -> Complex2:
    ring = data.get("ring", "Z")
    d = _need(data, "d")
    n0 = data.get("n0", len(d))
    n1 = data.get("n1", len(d[0]) if d else 0)
    check_dim("dim K^0", n0)
    check_dim("dim K^-1", n1)
    D = np.asarray(d, dtype=object).reshape(n0, n1) if n0 * n1 else np.empty((n0, n1), dtype=object)
    if ring == "Q":
        if data.get("K_minus1_relations") or data.get("K0_relations"):
            raise InputError("relations only make sense over Z")
        return Complex2("Q", qmat(D.tolist()) if D.size else qzeros(n0, n1))
    return Complex2(ring, D, data.get("K_minus1_relations"), data.get("K0_relations"))


# ---------------------------------------------------------------------------
# L-infinity data

def _dims(data) -> tuple[int, int]:
    n0, n1 = to_int(_need(data, "n0")), to_int(_need(data, "n1"))
    check_dim("n0", n0)
    check_dim("n1", n1)
    return n0, n1


def _antisym3(data, n0, n1):
    """Fill l3 from strictly increasing keys by total antisymmetry; other keys are raw."""
    from itertools import permutations
    from .linf2 import _perm_sign
    out = qzeros(n0, n0, n0, n1)
    for key, v in (data or {}).items():
        i, j, k, a = parse_key(key, 3, True)
        if not (max(i, j, k) < n0 and a < n1):
            raise DimensionError(f"l3 index {key!r} out of range")
        if i < j < k:
            for p in permutations(range(3)):
                idx = tuple((i, j, k)[t] for t in p)
                out[idx + (a,)] = _perm_sign(p) * to_fraction(v)
        else:
            out[i, j, k, a] = to_fraction(v)
    return out


def read_l2(data: dict) -> L2Algebra:
    n0, n1 = _dims(data)
    l1 = _matrix(data.get("l1", []), n0, n1, "l1")
    T = sparse_tensor(data.get("l2_00"), (n0, n0, n0), "l2_00")
    M = sparse_tensor(data.get("l2_0m"), (n0, n1, n1), "l2_0m")
    l3 = data.get("l3")
    J = sparse_tensor(l3, (n0, n0, n0, n1), "l3") if isinstance(l3, list) else \
        _antisym3(l3, n0, n1)
    return L2Algebra(l1, T, M, J)


def write_l2(L: L2Algebra) -> dict:
    return {"n0": L.n0, "n1": L.n1, "l1": to_json_value(L.l1),
            "l2_00": dump_sparse(L.l2_00), "l2_0m": dump_sparse(L.l2_0m), "l3": dump_sparse(L.l3)}


def read_pseudo(data: dict) -> PseudoL2Data:
    n0, n1 = _dims(data)
    ring = data.get("ring", "Q")
    return PseudoL2Data(_matrix(data.get("d", []), n0, n1, "d"),
                        sparse_tensor(data.get("lt2_00"), (n0, n0, n0), "lt2_00"),
                        sparse_tensor(data.get("lt2_0m"), (n0, n1, n1), "lt2_0m"),
                        sparse_tensor(data.get("lt2_m0"), (n1, n0, n1), "lt2_m0"),
                        sparse_tensor(data.get("s"), (n0, n0, n1), "s"),
                        sparse_tensor(data.get("lt3"), (n0, n0, n0, n1), "lt3"), ring)


def write_pseudo(P: PseudoL2Data) -> dict:
    return {"n0": P.n0, "n1": P.n1, "d": to_json_value(P.d),
            "lt2_00": dump_sparse(P.lt2_00), "lt2_0m": dump_sparse(P.lt2_0m),
            "lt2_m0": dump_sparse(P.lt2_m0), "s": dump_sparse(P.s), "lt3": dump_sparse(P.lt3)}


# ---------------------------------------------------------------------------
# algebras and modules

def read_algebra(data: dict) -> FinDimAlgebra:
    n = to_int(_need(data, "dim"))
    check_dim("algebra dim", n)
    mult = sparse_tensor(_need(data, "mult"), (n, n, n), "mult")
    unit = data.get("unit", [1] + [0] * (n - 1))
    return FinDimAlgebra(mult, unit, data.get("name", ""))


def write_algebra(A: FinDimAlgebra) -> dict:
    out = {"dim": A.dim, "mult": to_json_value(A.mult), "unit": to_json_value(A.unit)}
    if A.name:
        out["name"] = A.name
    return out


def read_module(data: dict, B: FinDimAlgebra) -> FDModule:
    m = to_int(_need(data, "dim"))
    check_dim("module dim", m)
    act = _need(data, "action")
    T = qarray(act) if m else qzeros(B.dim, 0, 0)
    if T.shape != (B.dim, m, m):
        raise DimensionError(f"module action has shape {T.shape}, expected {(B.dim, m, m)}")
    return FDModule(B, T)


def write_module(X: FDModule) -> dict:
    return {"dim": X.dim, "action": to_json_value(X.action)}


def read_derivation(data, n: int) -> np.ndarray:
    return _matrix(data, n, n, "derivation")
