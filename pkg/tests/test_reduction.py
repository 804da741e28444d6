import itertools
import random

import pytest

from polyssp.algebra import IntMatrix
from polyssp.groups import FGroup, HeisenbergGroup, group_from_json
from polyssp.distortion import NoDistortionError
from polyssp.reduction import (
    GuardError,
    SolveResult,
    SspInstance,
    ZoeInstance,
    build_padded_instance,
    coefficients,
    gen_bottom_ssp,
    gen_zoe,
    heisenberg_reduction,
    padding_bound,
    random_ssp,
    reduce_zoe,
    reduce_zoe_with_plan,
    solve_ssp,
    solve_zoe_brute,
    verify_equivalence,
)
from polyssp.words import Alphabet, Word


def all_matrices(k):
    for bits in itertools.product((0, 1), repeat=k * k):
        yield [list(bits[r * k : (r + 1) * k]) for r in range(k)]


def test_reduce_examples(X0):
    inst = reduce_zoe([[1]], X0)
    assert [str(w) for w in inst.items] == ["x^-1 e1 x"]
    assert str(inst.target) == "x^-1 e1 x"

    inst, plan = reduce_zoe_with_plan([[1, 0], [0, 1]], X0)
    w1, w2 = plan.witnesses
    assert inst.items == (w1, w2)
    assert inst.target == w1 + w2

    inst = reduce_zoe([[1, 1], [1, 1]], X0)
    assert inst.items == (w1 + w2, w1 + w2)
    assert inst.target == w1 + w2


def test_reduce_rejects_quasi_unipotent(U):
    with pytest.raises(NoDistortionError):
        reduce_zoe([[1]], U)


def test_zoe_instance_validation():
    with pytest.raises(ValueError):
        ZoeInstance.from_rows([[2]])
    with pytest.raises(ValueError):
        ZoeInstance.from_rows([[1, 0]])
    with pytest.raises(ValueError):
        ZoeInstance.from_json({"k": 2})


def test_solve_zoe_examples():
    r = solve_zoe_brute([[1, 0], [0, 1]])
    assert r.positive and r.witness == (1, 1)
    assert not solve_zoe_brute([[1, 0], [0, 0]]).positive
    r = solve_zoe_brute([[1, 1], [0, 1]])
    assert r.positive and r.witness == (0, 1)


def test_zoe_guard():
    with pytest.raises(GuardError):
        solve_zoe_brute([[0] * 26 for _ in range(26)])


def test_solve_ssp_examples(X0, F0):
    inst = reduce_zoe([[1, 1], [1, 1]], X0)
    r = solve_ssp(inst, "brute")
    assert r.positive and r.witness == (0, 1)
    assert solve_ssp(inst, "mitm").positive

    empty = SspInstance(F0, (), Word.empty(F0.alphabet))
    for strategy in ("brute", "mitm"):
        r = solve_ssp(empty, strategy)
        assert r.positive and r.witness == ()

    neg = SspInstance(F0, (F0.word("e1"),), F0.word("e2"))
    assert not solve_ssp(neg, "brute").positive
    assert not solve_ssp(neg, "mitm").positive


def test_ssp_guards_and_alphabet(F0):
    e1 = F0.word("e1")
    with pytest.raises(GuardError):
        solve_ssp(SspInstance(F0, (e1,) * 31, e1), "brute")
    with pytest.raises(GuardError):
        solve_ssp(SspInstance(F0, (e1,) * 51, e1), "mitm")
    with pytest.raises(ValueError):
        SspInstance(F0, (Word.parse("a", Alphabet(("a",))),), e1)


def test_reduction_equivalence_exhaustive(X0):
    count = 0
    for k in (1, 2, 3):
        for A in all_matrices(k):
            assert solve_zoe_brute(A).positive == solve_ssp(reduce_zoe(A, X0), "brute").positive
            count += 1
    assert count == 2 + 16 + 512


def test_verify_equivalence_examples(X0):
    r = verify_equivalence([[1, 0], [0, 1]], X0)
    assert r["verdicts_agree"] and r["zoe_positive"] and r["ssp_positive"]
    assert r["coefficients"] == [0, 0]
    r = verify_equivalence([[1, 0], [0, 0]], X0)
    assert r["verdicts_agree"] and not r["zoe_positive"] and not r["ssp_positive"]
    assert all(verify_equivalence(A, X0)["verdicts_agree"] for A in all_matrices(2))


def test_coefficient_range_for_failing_eps(X0):
    for k in (2, 3):
        for A in all_matrices(k):
            inst = reduce_zoe(A, X0)
            for eps in itertools.product((0, 1), repeat=k):
                c = coefficients(A, eps)
                assert all(-1 <= x <= k - 1 for x in c)
                assert inst.check(eps) == (not any(c))


def test_reduction_instance_size(X0):
    rng = random.Random(0)
    for k in range(1, 7):
        A = gen_zoe(k, "random", rng.random(), rng.randrange(1000))
        inst, plan = reduce_zoe_with_plan(A, X0)
        wlen = [1 + 2 * n for n in plan.indices]
        # row j of A says how many items contain w_j; the target has each once
        expected = sum(wlen[j] * (sum(A.A[j]) + 1) for j in range(k))
        assert inst.total_length == expected
        assert inst.total_length <= (k + 1) * k * wlen[-1]


def test_solver_agreement_random(X0):
    X3 = IntMatrix.from_rows([[1, 1, 0], [1, 2, 1], [0, 1, 2]])
    for seed in range(200):
        X = X0 if seed % 2 else X3
        k = 1 + seed % 12
        inst = random_ssp(X, k, seed) if seed % 3 else gen_bottom_ssp(X, k, seed)
        b, m = solve_ssp(inst, "brute"), solve_ssp(inst, "mitm")
        assert b.positive == m.positive
        for r in (b, m):
            if r.positive:
                assert inst.check(r.witness)
        if b.positive:
            assert b.witness == min(
                e for e in itertools.product((0, 1), repeat=k) if inst.check(e)
            )


def test_stats_json_omits_timing(X0):
    inst = gen_bottom_ssp(X0, 8, 3)
    r = solve_ssp(inst, "brute")
    assert r.stats["nodes"] >= 1
    assert set(r.to_json()["stats"]) == {"nodes", "strategy"}
    assert "seconds" in r.to_json(timing=True)["stats"]


def test_padding_example_heisenberg():
    H = HeisenbergGroup(("f1", "f2"))
    base = SspInstance(H, (H.word("f2"), H.word("f1")), H.word("f1 f2"))
    assert not solve_ssp(base, "brute").positive
    padded = build_padded_instance(base, [H.word("f1^-1 f2^-1 f1 f2")], 1)
    assert padded.k == 4
    r = solve_ssp(padded, "brute")
    assert r.positive and r.witness == (1, 1, 1, 0)
    assert solve_ssp(padded, "mitm").positive


def test_padding_identity_correctors(X0, F0):
    empty = Word.empty(F0.alphabet)
    for seed in range(100):
        base = gen_bottom_ssp(X0, 5, seed)
        padded = build_padded_instance(base, [empty, empty], 2)
        assert padded.k == 5 + 2 * 2 * 2
        assert solve_ssp(base).positive == solve_ssp(padded).positive


def test_padding_abelian_commutators_stay_negative(X0, F0):
    h = F0.word("e1^-1 e2^-1 e1 e2")
    kept = 0
    for seed in range(60):
        base = gen_bottom_ssp(X0, 5, seed)
        if solve_ssp(base).positive:
            continue
        assert not solve_ssp(build_padded_instance(base, [h], 2)).positive
        kept += 1
    assert kept > 10


def test_padding_bound_modes():
    assert padding_bound(1, 2) == 0
    assert padding_bound(3, 2) == 1
    assert padding_bound(3, 2, uniform_C=0.5) == 5
    assert padding_bound(3, 3, taus=[(3, 2, 1)]) >= 1
    with pytest.raises(GuardError):
        padding_bound(6, 2)


def test_heisenberg_demo_all_small():
    helped = 0
    for k in (1, 2, 3):
        for A in all_matrices(k):
            base, padded = heisenberg_reduction(A)
            zoe = solve_zoe_brute(A).positive
            assert solve_ssp(padded, "brute").positive == zoe
            assert solve_ssp(padded, "mitm").positive == zoe
            if not zoe:
                assert not solve_ssp(base).positive
            elif not solve_ssp(base).positive:
                helped += 1
    assert helped > 0


def test_gen_zoe_determinism_and_planted():
    assert gen_zoe(5, "planted", 0.4, 9) == gen_zoe(5, "planted", 0.4, 9)
    assert gen_zoe(5, "random", 0.4, 9) == gen_zoe(5, "random", 0.4, 9)
    for seed in range(50):
        assert solve_zoe_brute(gen_zoe(4, "planted", 0.5, seed)).positive
    Z = gen_zoe(3, "random", 0.0, 1)
    assert Z.A == ((0, 0, 0),) * 3
    assert not solve_zoe_brute(Z).positive
    with pytest.raises(ValueError):
        gen_zoe(3, "planted", 0.0, 1)
    with pytest.raises(ValueError):
        gen_zoe(3, "random", 1.5, 1)


def test_sampled_mitm_k6(X0):
    for mode in ("random", "planted"):
        for seed in range(20):
            A = gen_zoe(6, mode, 0.5, seed)
            assert solve_ssp(reduce_zoe(A, X0), "mitm").positive == solve_zoe_brute(A).positive


def test_ssp_json_round_trip(X0):
    inst = reduce_zoe(gen_zoe(4, "planted", 0.5, 2), X0)
    obj = inst.to_json()
    back = SspInstance.from_json(obj)
    assert back == inst
    assert back.to_json() == obj
    base, padded = heisenberg_reduction([[1, 1], [0, 1]])
    assert SspInstance.from_json(padded.to_json()) == padded
    with pytest.raises(ValueError):
        SspInstance.from_json({"items": []})


def test_solve_result_json():
    r = SolveResult(True, (0, 1), {"nodes": 3, "strategy": "brute", "seconds": 0.1, "backend": "python"})
    assert r.to_json() == {"positive": True, "witness": [0, 1], "stats": {"nodes": 3, "strategy": "brute"}}
