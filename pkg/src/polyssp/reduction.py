"""ZOE to subset-sum reduction, solvers, padding and instance generators.

A zero-one matrix ``A`` becomes the subset-sum instance with items
``g_i = w_1^{a_1i} ... w_k^{a_ki}`` and target ``g = w_1 ... w_k`` over the
distortion witnesses ``w_j`` of an exponentially distorted action.  The
product ``prod g_i^{eps_i}`` evaluates to ``sum_j (A eps)_j X^{n_j} e*_j``,
and the growth chain forces every coefficient ``(A eps)_j - 1`` to vanish.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field
from typing import Any, Literal, Optional, Sequence

from . import kernels
from .algebra import IntMatrix, IntVector, mat_pow
from .distortion import DistortionPlan, build_plan
from .groups import DirectProduct, FGroup, FreeAbelianGroup, Group, HeisenbergGroup, group_from_json
from .nilpotent import enumerate_iterated_commutators, permutation_correction, reorder_correction
from .words import Word, WordError

Strategy = Literal["brute", "mitm"]

ZOE_GUARD = 25
BRUTE_GUARD = 30
MITM_GUARD = 50


class GuardError(ValueError):
    """Instance too large for exhaustive enumeration."""


# --------------------------------------------------------------------------
# instances


@dataclass(frozen=True)
class ZoeInstance:
    k: int
    A: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        A = tuple(tuple(int(x) for x in row) for row in self.A)
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if len(A) != self.k or any(len(row) != self.k for row in A):
            raise ValueError(f"A must be {self.k}x{self.k}")
        if any(x not in (0, 1) for row in A for x in row):
            raise ValueError("A must be a zero-one matrix")
        object.__setattr__(self, "A", A)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "ZoeInstance":
        return cls(len(rows), tuple(tuple(r) for r in rows))

    def apply(self, x: Sequence[int]) -> list[int]:
        return [sum(a * e for a, e in zip(row, x)) for row in self.A]

    def to_json(self) -> dict:
        return {"k": self.k, "A": [list(r) for r in self.A]}

    @classmethod
    def from_json(cls, obj: dict) -> "ZoeInstance":
        try:
            return cls(int(obj["k"]), tuple(tuple(r) for r in obj["A"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed ZOE instance: {exc!r}") from None


def _as_zoe(A) -> ZoeInstance:
    return A if isinstance(A, ZoeInstance) else ZoeInstance.from_rows(A)


@dataclass(frozen=True)
class SspInstance:
    group: Group
    items: tuple[Word, ...]
    target: Word

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        for w in self.items + (self.target,):
            self.group.check_word(w)

    @property
    def k(self) -> int:
        return len(self.items)

    @property
    def total_length(self) -> int:
        return sum(w.length for w in self.items) + self.target.length

    def product(self, eps: Sequence[int]) -> Word:
        return Word.concat((w for w, e in zip(self.items, eps) if e), self.group.alphabet)

    def check(self, eps: Sequence[int]) -> bool:
        if len(eps) != self.k:
            return False
        G = self.group
        return G.evaluate(self.product(eps)) == G.evaluate(self.target)

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "items": [str(w) for w in self.items],
            "target": str(self.target),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SspInstance":
        try:
            G = group_from_json(obj["group"])
            items = tuple(G.word(s) for s in obj["items"])
            target = G.word(obj["target"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed SSP instance: {exc!r}") from None
        return cls(G, items, target)


@dataclass
class SolveResult:
    positive: bool
    witness: Optional[tuple[int, ...]]
    stats: dict = field(default_factory=dict)

    def to_json(self, timing: bool = False) -> dict:
        stats = {k: v for k, v in self.stats.items() if timing or k not in ("seconds", "backend")}
        return {
            "positive": self.positive,
            "witness": list(self.witness) if self.witness is not None else None,
            "stats": stats,
        }


# --------------------------------------------------------------------------
# ZOE


def solve_zoe_brute(A) -> SolveResult:
    """First ``x`` in lex order with ``A x = 1``."""
    A = _as_zoe(A)
    if A.k > ZOE_GUARD:
        raise GuardError(f"k = {A.k} exceeds the ZOE brute-force guard {ZOE_GUARD}")
    start = time.perf_counter()
    nodes = 0
    ones = [1] * A.k
    for x in itertools.product((0, 1), repeat=A.k):
        nodes += 1
        if A.apply(x) == ones:
            return SolveResult(True, x, _stats(nodes, "zoe-brute", start))
    return SolveResult(False, None, _stats(nodes, "zoe-brute", start))


def _stats(nodes: int, strategy: str, start: float, backend: str = "python") -> dict:
    return {
        "nodes": nodes,
        "strategy": strategy,
        "backend": backend,
        "seconds": time.perf_counter() - start,
    }


def reduce_zoe(A, X: IntMatrix, lam: Optional[int] = None, mode: str = "minimal") -> SspInstance:
    """SSP instance over ``Z x|_X Z^n`` that is positive iff ``A`` is."""
    inst, _ = reduce_zoe_with_plan(A, X, lam, mode)
    return inst


def reduce_zoe_with_plan(A, X: IntMatrix, lam=None, mode="minimal") -> tuple[SspInstance, DistortionPlan]:
    A = _as_zoe(A)
    k = A.k
    plan = build_plan(X, k if lam is None else lam, k, mode)
    G = plan.group
    w = plan.witnesses
    items = [Word.concat((w[j] for j in range(k) if A.A[j][i]), G.alphabet) for i in range(k)]
    target = Word.concat(w, G.alphabet)
    inst = SspInstance(G, tuple(items), target)
    bound = (k + 1) * k * (1 + 2 * plan.indices[-1])
    if inst.total_length > bound:
        raise AssertionError(f"reduced instance has length {inst.total_length} > {bound}")
    return inst, plan


def coefficients(A, eps: Sequence[int]) -> list[int]:
    """``-1 + sum_i a_ji eps_i`` for each row ``j``."""
    return [a - 1 for a in _as_zoe(A).apply(eps)]


def verify_equivalence(A, X: IntMatrix, lam: Optional[int] = None) -> dict:
    A = _as_zoe(A)
    zoe = solve_zoe_brute(A)
    inst, plan = reduce_zoe_with_plan(A, X, lam)
    ssp = solve_ssp(inst, "brute")
    report: dict[str, Any] = {
        "k": A.k,
        "zoe_positive": zoe.positive,
        "zoe_witness": list(zoe.witness) if zoe.witness else None,
        "ssp_positive": ssp.positive,
        "ssp_witness": list(ssp.witness) if ssp.witness is not None else None,
        "verdicts_agree": zoe.positive == ssp.positive,
        "coefficients": None,
    }
    if ssp.positive:
        coeffs = coefficients(A, ssp.witness)
        # sum_j c_j X^{n_j} e*_j must vanish exactly
        total = [0] * X.n
        for c, v in zip(coeffs, plan.images()):
            total = [t + c * x for t, x in zip(total, v)]
        lhs = inst.group.evaluate(inst.product(ssp.witness))
        rhs = inst.group.evaluate(inst.target)
        if any(coeffs) or any(total) or lhs != rhs:
            raise AssertionError(f"coefficient reconstruction failed: {coeffs}")
        report["coefficients"] = coeffs
    return report


# --------------------------------------------------------------------------
# SSP solvers


def _lex_masks_product(G: Group, elems: Sequence) -> list:
    """Products over every subset, mask order equal to lex order of eps."""
    h = len(elems)
    prods = [G.identity] * (1 << h)
    for mask in range(1, 1 << h):
        low = mask & -mask
        prods[mask] = G.mul(prods[mask ^ low], elems[h - low.bit_length()])
    return prods


def _mask_eps(mask: int, h: int) -> list[int]:
    return [(mask >> (h - 1 - i)) & 1 for i in range(h)]


def _brute_generic(G: Group, elems: Sequence, target) -> tuple[bool, Optional[list[int]], int]:
    k = len(elems)
    eps = [0] * k
    nodes = 0

    def dfs(i, acc):
        nonlocal nodes
        nodes += 1
        if i == k:
            return acc == target
        eps[i] = 0
        if dfs(i + 1, acc):
            return True
        eps[i] = 1
        if dfs(i + 1, G.mul(acc, elems[i])):
            return True
        eps[i] = 0
        return False

    found = dfs(0, G.identity)
    return found, (list(eps) if found else None), nodes


def _mitm_generic(G: Group, elems: Sequence, target) -> tuple[bool, Optional[list[int]], int]:
    k = len(elems)
    split = (k + 1) // 2
    h1, h2 = split, k - split
    table: dict = {}
    for mask, s in enumerate(_lex_masks_product(G, elems[split:])):
        table.setdefault(s, mask)
    nodes = 1 << h2
    for pmask, p in enumerate(_lex_masks_product(G, elems[:split])):
        nodes += 1
        smask = table.get(G.mul(G.inv(p), target))
        if smask is not None:
            return True, _mask_eps(pmask, h1) + _mask_eps(smask, h2), nodes
    return False, None, nodes


def _run_kernel(name: str, *args):
    """Compiled kernel first; exact Python ints when int64 overflows."""
    try:
        return getattr(kernels, name)(*args), kernels.BACKEND
    except OverflowError:
        from . import _pykernels

        return getattr(_pykernels, name)(*args), _pykernels.BACKEND


def solve_ssp(inst: SspInstance, strategy: Strategy = "brute") -> SolveResult:
    """Decide ``target = prod g_i^{eps_i}``; brute returns the lex-first witness."""
    k = inst.k
    if strategy == "brute":
        if k > BRUTE_GUARD:
            raise GuardError(f"k = {k} exceeds the brute-force guard {BRUTE_GUARD}")
    elif strategy == "mitm":
        if k > MITM_GUARD:
            raise GuardError(f"k = {k} exceeds the meet-in-the-middle guard {MITM_GUARD}")
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    G = inst.group
    start = time.perf_counter()
    elems = [G.evaluate(w) for w in inst.items]
    target = G.evaluate(inst.target)
    backend = "python"

    if isinstance(G, FGroup):
        ts = [e.t for e in elems]
        vecs = [list(e.v) for e in elems]
        if strategy == "brute":
            mats = [[list(r) for r in mat_pow(G.X, t).entries] for t in ts]
            (found, eps, nodes), backend = _run_kernel(
                "brute_dfs", ts, mats, vecs, target.t, list(target.v)
            )
        elif not any(ts):
            if target.t:
                found, eps, nodes = False, None, 0
            else:
                (found, eps, nodes), backend = _run_kernel(
                    "mitm_bottom", vecs, (k + 1) // 2, list(target.v)
                )
        else:
            found, eps, nodes = _mitm_generic(G, elems, target)
    elif strategy == "brute":
        found, eps, nodes = _brute_generic(G, elems, target)
    else:
        found, eps, nodes = _mitm_generic(G, elems, target)

    stats = _stats(nodes, strategy, start, backend)
    if found:
        eps = tuple(int(e) for e in eps)
        if not inst.check(eps):
            raise AssertionError(f"solver witness {eps} does not verify")
        return SolveResult(True, eps, stats)
    return SolveResult(False, None, stats)


# --------------------------------------------------------------------------
# padding


def build_padded_instance(base: SspInstance, correctors: Sequence[Word], bound: int) -> SspInstance:
    """Append ``bound`` copies of each ``h`` then ``bound`` copies of ``h^-1``, per corrector."""
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    items = list(base.items)
    for h in correctors:
        base.group.check_word(h)
        items += [h] * bound + [h.inverse()] * bound
    return SspInstance(base.group, tuple(items), base.target)


def padding_bound(
    k: int,
    c: int,
    taus: Optional[Sequence[Sequence[int]]] = None,
    uniform_C: Optional[float] = None,
) -> int:
    """Largest ``|alpha_i|`` a reordering correction can need.

    Exact mode takes the maximum over ``permutation_correction`` for the given
    permutations (all of ``S_k`` by default) and every ``eps``; uniform mode is
    ``ceil(C * k^c)``.
    """
    if uniform_C is not None:
        return math.ceil(uniform_C * k**c)
    if k < 2:
        return 0
    if taus is None:
        if k > 5:
            raise GuardError("exact padding bound over all of S_k needs k <= 5")
        taus = [tuple(p) for p in itertools.permutations(range(1, k + 1))]
    best = 0
    for tau in taus:
        for eps in itertools.product((0, 1), repeat=k):
            alphas = permutation_correction(k, c, eps, tau).alphas
            best = max(best, max((abs(a) for a in alphas), default=0))
    return best


# --------------------------------------------------------------------------
# Z x Heisenberg demonstration


def heisenberg_group() -> DirectProduct:
    return DirectProduct([FreeAbelianGroup(["z"]), HeisenbergGroup(["f1", "f2"])])


def heisenberg_witnesses(G: DirectProduct, k: int) -> list[Word]:
    """``W_i = z^{(k+1)^(i-1)} f1 f2^i``: a chain in ``z``, non-commuting in H."""
    return [G.word(f"z^{(k + 1) ** i} f1 f2^{i + 1}") for i in range(k)]


def heisenberg_reduction(A, bound: Optional[int] = None) -> tuple[SspInstance, SspInstance]:
    """Base and padded instances over ``Z x H`` built from ``A``.

    Modulo the centre of H the ``z``-coordinate carries the ZOE chain, so the
    padded instance is positive iff ``A`` is.  The base instance can fail on a
    positive ``A`` because the lifted witnesses do not commute; the correctors
    ``[W_i, W_j]`` repeated ``bound`` times absorb the reordering.
    """
    A = _as_zoe(A)
    k = A.k
    G = heisenberg_group()
    W = heisenberg_witnesses(G, k)
    items = [Word.concat((W[j] for j in range(k) if A.A[j][i]), G.alphabet) for i in range(k)]
    base = SspInstance(G, tuple(items), Word.concat(W, G.alphabet))
    if bound is None:
        bound = max(
            (max(map(abs, reorder_correction(k, 2, tau).alphas)) for tau in itertools.permutations(range(1, k + 1))),
            default=0,
        )
    correctors = enumerate_iterated_commutators(W, 2)
    return base, build_padded_instance(base, correctors, bound)


# --------------------------------------------------------------------------
# generators


def gen_zoe(k: int, mode: str = "random", density: float = 0.5, seed: int = 0) -> ZoeInstance:
    """Random or planted ZOE instance; deterministic per arguments."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if not 0.0 <= density <= 1.0:
        raise ValueError("density must be in [0, 1]")
    rng = random.Random(seed)
    if mode == "random":
        rows = [[int(rng.random() < density) for _ in range(k)] for _ in range(k)]
        return ZoeInstance.from_rows(rows)
    if mode != "planted":
        raise ValueError(f"unknown mode {mode!r}")
    for _ in range(1000):
        x = [int(rng.random() < density) for _ in range(k)]
        if any(x):
            break
    else:
        raise ValueError(f"planted generator found no nonzero hidden vector at density {density}")
    support = [i for i in range(k) if x[i]]
    rows = []
    for _ in range(k):
        hit = rng.choice(support)
        rows.append([int(i == hit) if x[i] else int(rng.random() < density) for i in range(k)])
    A = ZoeInstance.from_rows(rows)
    assert A.apply(x) == [1] * k
    return A


def gen_bottom_ssp(X: IntMatrix, k: int, seed: int = 0, spread: int = 2) -> SspInstance:
    """Random instance whose items lie in the abelian bottom ``Z^n``.

    Half the time the target is a planted subset sum.
    """
    rng = random.Random(seed)
    G = FGroup(X)
    vecs = [[rng.randint(-spread, spread) for _ in range(X.n)] for _ in range(k)]
    if rng.random() < 0.5:
        tv = [sum(v[j] for v in vecs if rng.random() < 0.5) for j in range(X.n)]
    else:
        tv = [rng.randint(-spread * k, spread * k) for _ in range(X.n)]

    def word(v):
        return Word(tuple((j + 1, e) for j, e in enumerate(v) if e), G.alphabet)

    return SspInstance(G, tuple(word(v) for v in vecs), word(tv))


def random_ssp(X: IntMatrix, k: int, seed: int = 0, max_t: int = 2, spread: int = 3) -> SspInstance:
    """Random items ``x^t v`` with mixed ``t``; the target is a planted product half the time."""
    rng = random.Random(seed)
    G = FGroup(X)

    def word(t, v):
        letters = [(j + 1, e) for j, e in enumerate(v) if e]
        if t:
            letters.append((0, t))
        return Word(tuple(letters), G.alphabet)

    items = [word(rng.randint(-max_t, max_t), [rng.randint(-spread, spread) for _ in range(X.n)]) for _ in range(k)]
    if rng.random() < 0.5:
        target = Word.concat((w for w in items if rng.random() < 0.5), G.alphabet)
    else:
        target = word(rng.randint(-max_t, max_t), [rng.randint(-spread, spread) for _ in range(X.n)])
    return SspInstance(G, tuple(items), target)
