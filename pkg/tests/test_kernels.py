import random

import pytest

from polyssp import _pykernels, kernels
from polyssp.algebra import IntMatrix, mat_pow

try:
    from polyssp import _ckernels
except ImportError:  # extension not built
    _ckernels = None

needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")


def _instance(rng, X, k):
    ts = [rng.randint(-2, 2) for _ in range(k)]
    mats = [[list(r) for r in mat_pow(X, t).entries] for t in ts]
    vecs = [[rng.randint(-3, 3) for _ in range(X.n)] for _ in range(k)]
    t, v = 0, [0] * X.n
    for i in range(k):
        if rng.random() < 0.5:
            t += ts[i]
            v = [sum(a * b for a, b in zip(row, v)) + c for row, c in zip(mats[i], vecs[i])]
    if rng.random() < 0.3:
        v[0] += 1
    return ts, mats, vecs, t, v


def test_backend_selection(monkeypatch):
    assert kernels.get_backend("python") is _pykernels
    with pytest.raises(ValueError):
        kernels.get_backend("gpu")
    monkeypatch.setenv("POLYSSP_PURE", "1")
    assert kernels.get_backend() is _pykernels


def test_python_brute_is_lex_first():
    vecs = [[1, 0], [0, 1], [1, 1]]
    eye = [[1, 0], [0, 1]]
    found, eps, _ = _pykernels.brute_dfs([0] * 3, [eye] * 3, vecs, 0, [1, 1])
    assert found and eps == [0, 0, 1]
    found, eps, _ = _pykernels.mitm_bottom(vecs, 2, [1, 1])
    assert found and eps == [0, 0, 1]


@needs_ext
def test_backends_agree():
    X = IntMatrix.from_rows([[2, 1], [1, 1]])
    rng = random.Random(0)
    for _ in range(300):
        k = rng.randint(0, 10)
        ts, mats, vecs, t, v = _instance(rng, X, k)
        assert _pykernels.brute_dfs(ts, mats, vecs, t, v) == _ckernels.brute_dfs(ts, mats, vecs, t, v)
        split = (k + 1) // 2
        assert _pykernels.mitm_bottom(vecs, split, v) == _ckernels.mitm_bottom(vecs, split, v)


@needs_ext
def test_compiled_overflow_raises():
    eye = [[1, 0], [0, 1]]
    big = [[2**62, 0], [2**62, 0]]
    with pytest.raises(OverflowError):
        _ckernels.brute_dfs([0, 0], [eye, eye], big, 0, [1, 0])
    with pytest.raises(OverflowError):
        _ckernels.mitm_bottom(big + big, 2, [1, 0])
    with pytest.raises(OverflowError):
        _ckernels.mitm_bottom([[2**70, 0]], 1, [0, 0])


def test_overflow_falls_back_to_exact_ints():
    from polyssp.reduction import gen_zoe, reduce_zoe, solve_ssp

    X0 = IntMatrix.from_rows([[2, 1], [1, 1]])
    inst = reduce_zoe(gen_zoe(18, "planted", 0.5, 0), X0)
    for strategy in ("brute", "mitm"):
        r = solve_ssp(inst, strategy)
        assert r.positive and inst.check(r.witness)
        assert r.stats["backend"] == "python"
