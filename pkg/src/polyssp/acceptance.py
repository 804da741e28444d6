"""The acceptance checks, shared by the test suite and ``polyssp selftest``.

Each check returns a :class:`Check`; a check never raises for a failed
condition, it reports it.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass
from typing import Callable

from .algebra import IntMatrix, column_norms_sq, is_quasi_unipotent, mat_pow, norm_bound_p, random_unimodular, spectral_radius
from .distortion import build_plan
from .groups import FGroup, HeisenbergGroup
from .nilpotent import collect, hall_basis, heisenberg_coordinates, heisenberg_eval, permutation_correction
from .reduction import (
    SspInstance,
    build_padded_instance,
    gen_bottom_ssp,
    gen_zoe,
    reduce_zoe,
    solve_ssp,
    solve_zoe_brute,
)
from .words import Alphabet, Word

X0 = IntMatrix.from_rows([[2, 1], [1, 1]])
U = IntMatrix.from_rows([[1, 1], [0, 1]])
SWAP = IntMatrix.from_rows([[0, 1], [1, 0]])


@dataclass
class Check:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.2f}s)"


def random_word(rng: random.Random, alphabet: Alphabet, length: int) -> Word:
    return Word(tuple((rng.randrange(len(alphabet)), rng.choice((1, -1))) for _ in range(length)), alphabet)


def check_exhaustive_reduction() -> tuple[bool, str]:
    count = bad = 0
    for k in (1, 2, 3):
        for bits in itertools.product((0, 1), repeat=k * k):
            A = [list(bits[r * k : (r + 1) * k]) for r in range(k)]
            count += 1
            if solve_zoe_brute(A).positive != solve_ssp(reduce_zoe(A, X0), "brute").positive:
                bad += 1
    return bad == 0, f"{count - bad}/{count} matrices agree"


def check_sampled_reduction() -> tuple[bool, str]:
    bad = positives = 0
    cases = [("random", s) for s in range(50)] + [("planted", s) for s in range(50)]
    for mode, seed in cases:
        A = gen_zoe(6, mode, 0.5, seed)
        zoe = solve_zoe_brute(A).positive
        positives += zoe
        if solve_ssp(reduce_zoe(A, X0), "mitm").positive != zoe:
            bad += 1
    return bad == 0, f"{len(cases) - bad}/{len(cases)} agree, {positives} positive"


def check_growth_chain() -> tuple[bool, str]:
    plan = build_plan(X0, 8, 8)
    ok = all(64 * a < b for a, b in zip(plan.norm_sq, plan.norm_sq[1:]))
    return ok, f"indices {list(plan.indices)}"


def check_sandwich() -> tuple[bool, str]:
    rng = random.Random(2024)
    mats = [X0]
    while len(mats) < 3:
        M = random_unimodular(3, rng)
        if not is_quasi_unipotent(M):
            mats.append(M)
    worst = 0
    for M in mats:
        alpha, _ = spectral_radius(M)
        for k in range(1, 31):
            m = max(column_norms_sq(M, k))
            # compare in logs: the norms exceed float range for the 3x3 cases
            lower = math.log(M.n * m) - 2 * k * math.log(alpha)
            upper = math.log(norm_bound_p(M, k)) + k * math.log(alpha) - 0.5 * math.log(m)
            if lower < -1e-6 or upper < -1e-6:
                worst += 1
    return worst == 0, f"{3 * 30 - worst}/90 (matrix, k) pairs inside the sandwich"


def check_collection_oracle() -> tuple[bool, str]:
    rng = random.Random(5)
    alphabet = Alphabet(("x1", "x2"))
    bad = 0
    for _ in range(1000):
        w = random_word(rng, alphabet, rng.randint(0, 60))
        if heisenberg_coordinates(collect(2, 2, w)) != heisenberg_eval(w):
            bad += 1
    return bad == 0, f"{1000 - bad}/1000 words match"


def _max_ratios(rng: random.Random, length: int, samples: int = 200) -> dict[int, float]:
    basis = hall_basis(2, 3)
    alphabet = basis.generator_alphabet
    best = {d: 0.0 for d in range(1, 4)}
    for _ in range(samples):
        ev = collect(2, 3, random_word(rng, alphabet, length))
        for d in best:
            m = max(abs(a) for a in ev.by_weight(d))
            best[d] = max(best[d], m / length**d)
    return best


def check_exponent_shape() -> tuple[bool, str]:
    rng = random.Random(11)
    C = _max_ratios(rng, 10)
    worst = 0.0
    for length in (20, 40, 80):
        ratios = _max_ratios(rng, length)
        worst = max(worst, max(ratios[d] / C[d] for d in C if C[d] > 0))
    return worst <= 4.0, f"max ratio / C = {worst:.3f} (limit 4)"


def check_permutation_correction() -> tuple[bool, str]:
    rng = random.Random(3)
    H = HeisenbergGroup(("f1", "f2"))
    cases = bad = 0
    for k in (2, 3):
        basis = hall_basis(k, 2)
        for tau in itertools.permutations(range(1, k + 1)):
            for eps in itertools.product((0, 1), repeat=k):
                alphas = permutation_correction(k, 2, eps, tau).alphas
                for _ in range(10):
                    f = [random_word(rng, H.alphabet, rng.randint(1, 6)) for _ in range(k)]
                    lhs = Word.concat((f[t - 1] for t in tau if eps[t - 1]), H.alphabet)
                    rhs = Word.concat((f[i] for i in range(k) if eps[i]), H.alphabet)
                    for e, a in zip(basis.elements, alphas):
                        if a:
                            rhs = rhs + e.word(f) ** a
                    cases += 1
                    bad += H.evaluate(lhs) != H.evaluate(rhs)
    return bad == 0, f"{cases - bad}/{cases} specializations agree"


def check_spectral() -> tuple[bool, str]:
    alpha, _ = spectral_radius(X0)
    err = abs(alpha - (3 + math.sqrt(5)) / 2)
    flags = (is_quasi_unipotent(U), is_quasi_unipotent(SWAP), is_quasi_unipotent(X0))
    return err <= 1e-9 and flags == (True, True, False), f"|alpha - (3+sqrt5)/2| = {err:.1e}, qu flags {flags}"


def check_unipotent_growth() -> tuple[bool, str]:
    bad = [k for k in range(41) if mat_pow(U, k).column(1).norm_sq != k * k + 1]
    return not bad, f"failures at k = {bad}" if bad else "k = 0..40 exact"


def check_padding() -> tuple[bool, str]:
    H = HeisenbergGroup(("f1", "f2"))
    base = SspInstance(H, (H.word("f2"), H.word("f1")), H.word("f1 f2"))
    padded = build_padded_instance(base, [H.word("f1^-1 f2^-1 f1 f2")], 1)
    res = solve_ssp(padded, "brute")
    heis_ok = res.positive and res.witness == (1, 1, 1, 0)
    G = FGroup(X0)
    identity = Word.empty(G.alphabet)
    kept = 0
    for seed in range(100):
        b = gen_bottom_ssp(X0, 6, seed)
        p = build_padded_instance(b, [identity, identity], 2)
        kept += solve_ssp(b, "brute").positive == solve_ssp(p, "brute").positive
    return heis_ok and kept == 100, f"heisenberg witness {res.witness}, {kept}/100 bases keep verdict"


def check_word_problem_speed() -> tuple[bool, str]:
    G = FGroup(X0)
    w = random_word(random.Random(1), G.alphabet, 100_000)
    start = time.perf_counter()
    G.evaluate(w)
    dt = time.perf_counter() - start
    return dt < 2.0, f"length 1e5 evaluated in {dt:.3f}s"


CRITERIA: list[tuple[int, str, Callable[[], tuple[bool, str]]]] = [
    (1, "reduction equivalence, exhaustive k<=3", check_exhaustive_reduction),
    (2, "reduction equivalence, sampled k=6 (mitm)", check_sampled_reduction),
    (3, "growth chain lambda=8, count=8", check_growth_chain),
    (4, "norm sandwich k=1..30", check_sandwich),
    (5, "collection vs Heisenberg oracle", check_collection_oracle),
    (6, "exponent bound shape r=2 c=3", check_exponent_shape),
    (7, "permutation correction k in {2,3}", check_permutation_correction),
    (8, "spectral radius and quasi-unipotence", check_spectral),
    (9, "unipotent polynomial growth", check_unipotent_growth),
    (10, "padded instance mechanics", check_padding),
    (11, "word problem at length 1e5", check_word_problem_speed),
]


def run_check(number: int) -> Check:
    for num, name, fn in CRITERIA:
        if num == number:
            start = time.perf_counter()
            try:
                passed, detail = fn()
            except Exception as exc:  # a crash is a failure, reported not raised
                passed, detail = False, f"error: {type(exc).__name__}: {exc}"
            return Check(num, name, passed, detail, time.perf_counter() - start)
    raise KeyError(number)


def run_all() -> list[Check]:
    return [run_check(num) for num, _, _ in CRITERIA]
