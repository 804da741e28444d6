"""Timing of the compiled and pure-Python subset-sum kernels on seeded instances."""

from __future__ import annotations

import time
from typing import Iterable

from . import _pykernels
from .algebra import IntMatrix
from .kernels import get_backend
from .reduction import gen_bottom_ssp, gen_zoe, reduce_zoe

HEADER = "family,k,seed,solver,backend,verdict,nodes,seconds"


def _bottom_vectors(inst) -> tuple[list[list[int]], list[int]]:
    G = inst.group
    vecs = []
    for w in inst.items:
        e = G.evaluate(w)
        assert e.t == 0
        vecs.append(list(e.v))
    return vecs, list(G.evaluate(inst.target).v)


def _backends() -> list:
    out = [_pykernels]
    try:
        out.insert(0, get_backend("compiled"))
    except ImportError:
        pass
    return out


def bench_rows(
    X: IntMatrix,
    ks: Iterable[int] = (10, 14, 18),
    seeds: Iterable[int] = (0, 1),
    families: Iterable[str] = ("bottom", "negative", "reduction"),
) -> list[tuple]:
    rows = []
    for family in families:
        for k in ks:
            for seed in seeds:
                if family == "reduction":
                    inst = reduce_zoe(gen_zoe(k, "planted", 0.5, seed), X)
                else:
                    inst = gen_bottom_ssp(X, k, seed)
                vecs, target = _bottom_vectors(inst)
                if family == "negative":
                    # out of reach of every subset: full enumeration
                    target = [sum(abs(v[j]) for v in vecs) + 1 for j in range(len(target))]
                n = len(target)
                eye = [[int(r == c) for c in range(n)] for r in range(n)]
                for mod in _backends():
                    for solver in ("brute", "mitm"):
                        start = time.perf_counter()
                        try:
                            if solver == "brute":
                                found, _, nodes = mod.brute_dfs([0] * k, [eye] * k, vecs, 0, target)
                            else:
                                found, _, nodes = mod.mitm_bottom(vecs, (k + 1) // 2, target)
                        except OverflowError:
                            rows.append((family, k, seed, solver, mod.BACKEND, "overflow", "", ""))
                            continue
                        dt = time.perf_counter() - start
                        verdict = "positive" if found else "negative"
                        rows.append((family, k, seed, solver, mod.BACKEND, verdict, nodes, f"{dt:.6f}"))
    return rows


def bench_csv(rows) -> str:
    return "\n".join([HEADER] + [",".join(str(x) for x in r) for r in rows]) + "\n"
