"""Exponentially distorted witnesses in ``F = Z x|_X Z^n``.

For an action ``X`` with spectral radius ``alpha > 1`` the words
``x^-n e* x^n`` have length ``1 + 2n`` but evaluate to ``X^n e*``, whose norm
grows like ``alpha^n``.  A plan picks indices ``n_1 = 1 < n_2 < ...`` so that
``lambda * ||X^{n_i} e*|| < ||X^{n_{i+1}} e*||``, verified on exact integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from .algebra import (
    INT64_MAX,
    IntMatrix,
    IntVector,
    column_norms_sq,
    is_quasi_unipotent,
    mat_pow,
    norm_bound_p,
    spectral_report,
)
from .groups import FGroup
from .words import Word

Mode = Literal["minimal", "analytic"]


class NoDistortionError(ValueError):
    """The action is quasi-unipotent, so Z^n is at most polynomially distorted."""


def _require_distortion(X: IntMatrix) -> float:
    if X.n == 1 or is_quasi_unipotent(X):
        raise NoDistortionError(f"X = {X} is quasi-unipotent; no exponential distortion")
    return spectral_report(X).alpha


def pick_star_basis(X: IntMatrix, k: int) -> int:
    """0-based ``j`` maximising ``||X^k e_j||^2``; ties go to the lowest index."""
    norms = column_norms_sq(X, k)
    return max(range(X.n), key=lambda j: (norms[j], -j))


def star_norm_sq(X: IntMatrix, k: int) -> int:
    return max(column_norms_sq(X, k))


def gap_minimal(X: IntMatrix, lam: int, k: int) -> int:
    """Smallest ``c >= 1`` with ``lam^2 ||X^k e*_k||^2 < ||X^{k+c} e*_{k+c}||^2``."""
    _require_distortion(X)
    base = lam * lam * star_norm_sq(X, k)
    c = 1
    while star_norm_sq(X, k + c) <= base:
        c += 1
    return c


def gap_analytic(X: IntMatrix, lam: int, k: int) -> int:
    """``ceil(log_a p(k)) + ceil(log_a lam) + ceil(log_a sqrt n) + 1``, then repaired.

    The float constant is bumped until the chain inequality holds exactly.
    """
    alpha = _require_distortion(X)
    log_a = math.log(alpha)

    c = (
        math.ceil(math.log(norm_bound_p(X, k)) / log_a)
        + math.ceil(math.log(lam) / log_a)
        + math.ceil(0.5 * math.log(X.n) / log_a)
        + 1
    )
    c = max(c, 1)
    base = lam * lam * star_norm_sq(X, k)
    while star_norm_sq(X, k + c) <= base:
        c += 1
    return c


@dataclass(frozen=True)
class DistortionPlan:
    group: FGroup
    lam: int
    indices: tuple[int, ...]
    star: tuple[int, ...]
    witnesses: tuple[Word, ...]
    norm_sq: tuple[int, ...]
    mode: str = "minimal"

    @property
    def count(self) -> int:
        return len(self.indices)

    def images(self) -> list[IntVector]:
        """``X^{n_i} e*_{n_i}`` for each witness."""
        return [mat_pow(self.group.X, n).column(j) for n, j in zip(self.indices, self.star)]

    def check_chain(self) -> bool:
        lam2 = self.lam * self.lam
        return all(lam2 * a < b for a, b in zip(self.norm_sq, self.norm_sq[1:]))

    def to_json(self) -> dict:
        return {
            "lambda": self.lam,
            "mode": self.mode,
            "indices": list(self.indices),
            "star": [j + 1 for j in self.star],
            "norm_sq": [v if v <= INT64_MAX else str(v) for v in self.norm_sq],
            "witnesses": [str(w) for w in self.witnesses],
        }


def witness_word(G: FGroup, n: int, j: int) -> Word:
    """``x^-n e_j x^n`` (``j`` 0-based)."""
    return Word(((0, -n), (j + 1, 1), (0, n)), G.alphabet)


def build_plan(X: IntMatrix, lam: int, count: int, mode: Mode = "minimal") -> DistortionPlan:
    if count < 1:
        raise ValueError("count must be at least 1")
    if lam < 1:
        raise ValueError("lambda must be at least 1")
    if mode not in ("minimal", "analytic"):
        raise ValueError(f"unknown mode {mode!r}")
    _require_distortion(X)
    G = FGroup(X)
    gap = gap_minimal if mode == "minimal" else gap_analytic
    indices = [1]
    while len(indices) < count:
        indices.append(indices[-1] + gap(X, lam, indices[-1]))
    star = tuple(pick_star_basis(X, n) for n in indices)
    plan = DistortionPlan(
        group=G,
        lam=lam,
        indices=tuple(indices),
        star=star,
        witnesses=tuple(witness_word(G, n, j) for n, j in zip(indices, star)),
        norm_sq=tuple(star_norm_sq(X, n) for n in indices),
        mode=mode,
    )
    if not plan.check_chain():
        raise AssertionError("distortion chain failed exact verification")
    if mode == "analytic":
        assert all(w.length == 1 + 2 * n for w, n in zip(plan.witnesses, plan.indices))
    return plan


def distortion_table(X: IntMatrix, kmax: int) -> list[tuple[int, int, int, float, float]]:
    """Rows ``(k, j_star (1-based), norm_sq, ln ||X^k e*||, k ln alpha)`` for k = 1..kmax."""
    if kmax < 1:
        raise ValueError("kmax must be at least 1")
    alpha = spectral_report(X).alpha
    rows = []
    for k in range(1, kmax + 1):
        j = pick_star_basis(X, k)
        nsq = column_norms_sq(X, k)[j]
        rows.append((k, j + 1, nsq, 0.5 * math.log(nsq), k * math.log(alpha)))
    return rows


def table_csv(rows) -> str:
    lines = ["k,j_star,norm_sq,log_norm,k_log_alpha"]
    lines += [f"{k},{j},{n},{ln:.12g},{ka:.12g}" for k, j, n, ln, ka in rows]
    return "\n".join(lines) + "\n"
