import math

import numpy as np
import pytest

from polyssp.algebra import IntMatrix, IntVector, mat_pow, spectral_report
from polyssp.distortion import (
    NoDistortionError,
    build_plan,
    distortion_table,
    gap_analytic,
    gap_minimal,
    pick_star_basis,
    table_csv,
)
from polyssp.groups import FElement

X3 = IntMatrix.from_rows([[1, 1, 0], [1, 2, 1], [0, 1, 2]])


def test_pick_star_basis_examples(X0):
    assert pick_star_basis(X0, 3) == 0
    assert pick_star_basis(IntMatrix.identity(3), 4) == 0
    assert pick_star_basis(X0, 1) == 0


def test_gap_minimal_examples(X0):
    assert gap_minimal(X0, 2, 1) == 1
    assert gap_minimal(X0, 2, 2) == 1
    for lam in (1, 2, 5, 8):
        for k in range(1, 8):
            assert gap_minimal(X0, lam, k) <= gap_analytic(X0, lam, k)


def test_gap_analytic_examples(X0, U):
    c = gap_analytic(X0, 2, 1)
    assert c >= 1
    n = [mat_pow(X0, k).column(0).norm_sq for k in range(1, 1 + c + 1)]
    assert 4 * n[0] < max(mat_pow(X0, 1 + c).column(j).norm_sq for j in range(2))
    c1 = gap_analytic(X0, 1, 1)
    assert c1 >= 1
    with pytest.raises(NoDistortionError):
        gap_analytic(U, 2, 1)
    with pytest.raises(NoDistortionError):
        gap_minimal(IntMatrix.from_rows([[-1]]), 2, 1)


def test_build_plan_examples(X0, F0):
    plan = build_plan(X0, 2, 3, "minimal")
    assert plan.indices == (1, 2, 3)
    assert plan.norm_sq == (5, 34, 233)
    assert plan.to_json()["star"] == [1, 1, 1]
    for mode in ("minimal", "analytic"):
        single = build_plan(X0, 1, 1, mode)
        assert [str(w) for w in single.witnesses] == ["x^-1 e1 x"]
    for w, img in zip(plan.witnesses, plan.images()):
        assert F0.evaluate(w) == FElement(0, img)


@pytest.mark.parametrize("X", [IntMatrix.from_rows([[2, 1], [1, 1]]), X3])
@pytest.mark.parametrize("lam", [1, 3, 8])
def test_chain_and_bounds(X, lam):
    alpha = spectral_report(X).alpha
    for mode in ("minimal", "analytic"):
        plan = build_plan(X, lam, 6, mode)
        assert plan.indices[0] == 1
        for a, b in zip(plan.norm_sq, plan.norm_sq[1:]):
            assert lam * lam * a < b
        assert lam ** (2 * 5) * plan.norm_sq[0] < plan.norm_sq[-1]
        for n, nsq in zip(plan.indices, plan.norm_sq):
            assert math.log(X.n * nsq) >= 2 * n * math.log(alpha) - 1e-6
        for w, n, j in zip(plan.witnesses, plan.indices, plan.star):
            assert w == plan.group.word(f"x^-{n} e{j + 1} x^{n}")
            assert plan.group.evaluate(w).t == 0


def test_mode_dominance(X0):
    for lam in (2, 4, 8):
        mn = build_plan(X0, lam, 8, "minimal").indices
        an = build_plan(X0, lam, 8, "analytic").indices
        assert all(a <= b for a, b in zip(mn, an))


def test_analytic_quadratic_growth(X0):
    idx = build_plan(X0, 8, 12, "analytic").indices
    a, b, c = np.polyfit([1, 2, 3], idx[:3], 2)
    for i, n in enumerate(idx, start=1):
        assert n <= a * i * i + b * i + c + 1e-9
    for w, n in zip(build_plan(X0, 8, 12, "analytic").witnesses, idx):
        assert w.length == 1 + 2 * n


def test_plan_rejects_quasi_unipotent(U):
    with pytest.raises(NoDistortionError):
        build_plan(U, 2, 3)
    with pytest.raises(ValueError):
        build_plan(IntMatrix.from_rows([[2, 1], [1, 1]]), 2, 0)


def test_distortion_table_examples(X0, U):
    assert [r[2] for r in distortion_table(X0, 3)] == [5, 34, 233]
    assert [r[2] for r in distortion_table(IntMatrix.identity(2), 2)] == [1, 1]
    rows = distortion_table(U, 3)
    assert [r[2] for r in rows] == [2, 5, 10]
    assert [r[1] for r in rows] == [2, 2, 2]
    csv = table_csv(distortion_table(X0, 3))
    assert csv.splitlines()[0] == "k,j_star,norm_sq,log_norm,k_log_alpha"
    assert csv.splitlines()[1].startswith("1,1,5,")


def test_unipotent_growth_exact(U):
    for k in range(41):
        assert mat_pow(U, k).column(1) == IntVector([k, 1])
        assert mat_pow(U, k).column(1).norm_sq == k * k + 1


def test_plan_json_big_norms(X0):
    plan = build_plan(X0, 8, 12, "analytic")
    obj = plan.to_json()
    assert isinstance(obj["norm_sq"][-1], str)
    assert int(obj["norm_sq"][-1]) == plan.norm_sq[-1]
