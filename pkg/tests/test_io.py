import json
from fractions import Fraction

import numpy as np
import pytest

from cat2alg import io
from cat2alg.corpus import random_l2, random_symmetric, random_twisted_2group, sl2_string
from cat2alg.errors import DimensionError, InputError
from cat2alg.hochschild.algebra import FDModule, matrix_algebra, truncated_poly
from cat2alg.skewsym import perturb


def test_parse_key():
    assert io.parse_key("(0, 2)->1", 2, True) == (0, 2, 1)
    assert io.parse_key("(1,1,1)", 3, False) == (1, 1, 1)
    for bad in ("(0,1)", "0,1->2", "(0,1,2)->1"):
        with pytest.raises(InputError):
            io.parse_key(bad, 2, True)


def test_sparse_tensor_forms_agree():
    T = io.sparse_tensor({"(0,1)->1": "1/2", "(1,0)->1": -1}, (2, 2, 2), "T")
    assert T[0, 1, 1] == Fraction(1, 2) and T[1, 0, 1] == -1
    dense = io.sparse_tensor(T.tolist(), (2, 2, 2), "T")
    assert (dense == T).all()
    with pytest.raises(DimensionError):
        io.sparse_tensor({"(0,5)->1": 1}, (2, 2, 2), "T")


def test_floats_rejected():
    with pytest.raises(InputError):
        io.sparse_tensor({"(0,1)->1": 0.5}, (2, 2, 2), "T")


def test_json_values():
    assert io.to_json_value(Fraction(3, 4)) == "3/4"
    assert io.to_json_value(Fraction(4, 2)) == 2
    assert io.to_json_value(np.array([Fraction(1, 2), 1], dtype=object)) == ["1/2", 1]


def test_load_errors(tmp_path):
    with pytest.raises(InputError):
        io.load(str(tmp_path / "missing.json"))
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(InputError):
        io.load(str(p))


def test_max_dim(monkeypatch):
    monkeypatch.setenv("CAT2ALG_MAX_DIM", "3")
    with pytest.raises(DimensionError):
        io.read_algebra(io.write_algebra(matrix_algebra(2)))
    monkeypatch.setenv("CAT2ALG_MAX_DIM", "lots")
    with pytest.raises(InputError):
        io.max_dim()


def _through_json(obj):
    return json.loads(json.dumps(obj))


def test_2group_roundtrip():
    G = random_twisted_2group(np.random.default_rng(4))
    H = io.read_2group(_through_json(io.write_2group(G)))
    assert (H.alpha == G.alpha).all() and (H.action == G.action).all()
    assert (H.pi0.table == G.pi0.table).all()


def test_l2_roundtrip():
    L = random_l2(np.random.default_rng(9))
    M = io.read_l2(_through_json(io.write_l2(L)))
    assert all((a == b).all() for a, b in zip(L.tensors(), M.tensors()))


def test_l3_ordered_keys_extend_antisymmetrically():
    L = sl2_string()
    data = io.write_l2(L)
    data["l3"] = {k: v for k, v in data["l3"].items()
                  if (lambda t: t[0] < t[1] < t[2])(io.parse_key(k, 3, True))}
    assert (io.read_l2(data).l3 == L.l3).all()


def test_pseudo_roundtrip():
    rng = np.random.default_rng(2)
    L = random_l2(rng)
    P = perturb(L, random_symmetric(rng, L.n0, L.n1))
    Q = io.read_pseudo(_through_json(io.write_pseudo(P)))
    for name in ("d", "lt2_00", "lt2_0m", "lt2_m0", "s", "lt3"):
        assert (getattr(P, name) == getattr(Q, name)).all()


def test_algebra_and_module_roundtrip():
    A = truncated_poly(3)
    B = io.read_algebra(_through_json(io.write_algebra(A)))
    assert B == A
    X = FDModule.free(A)
    Y = io.read_module(_through_json(io.write_module(X)), A)
    assert (Y.action == X.action).all()
    with pytest.raises(DimensionError):
        io.read_module({"dim": 2, "action": X.action.tolist()}, A)


def test_complex_reader():
    K = io.read_complex({"ring": "Z", "d": [[2]], "K_minus1_relations": [[4]],
                         "K0_relations": [[4]]})
    assert K.n0 == K.n1 == 1
    with pytest.raises(InputError):
        io.read_complex({"ring": "Q", "d": [[1]], "K0_relations": [[2]]})
