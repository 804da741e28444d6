"""Pure-Python subset-sum kernels; reference twin of ``_ckernels.pyx``.

Both backends take plain lists, enumerate assignments in lexicographic order
of ``eps`` and report identical witnesses and node counts.
"""

from __future__ import annotations

import sys

BACKEND = "python"

sys.setrecursionlimit(max(sys.getrecursionlimit(), 10_000))


def brute_dfs(ts, mats, vecs, target_t, target_v):
    """First ``eps`` (lex order) with ``prod_i (t_i, v_i)^eps_i = target`` in Z x| Z^n.

    ``mats[i]`` is ``X^{t_i}``; the product rule is
    ``(t, v)(t_i, v_i) = (t + t_i, X^{t_i} v + v_i)``.
    Returns ``(found, witness or None, nodes)``.
    """
    k = len(ts)
    n = len(target_v)
    target_v = list(target_v)
    ident = [all(m[r][c] == (r == c) for r in range(n) for c in range(n)) for m in mats]
    eps = [0] * k
    nodes = 0

    def dfs(i, t, v):
        nonlocal nodes
        nodes += 1
        if i == k:
            return t == target_t and v == target_v
        eps[i] = 0
        if dfs(i + 1, t, v):
            return True
        eps[i] = 1
        if ident[i]:
            w = [a + b for a, b in zip(v, vecs[i])]
        else:
            w = [sum(a * b for a, b in zip(row, v)) + c for row, c in zip(mats[i], vecs[i])]
        if dfs(i + 1, t + ts[i], w):
            return True
        eps[i] = 0
        return False

    found = dfs(0, 0, [0] * n)
    return found, (list(eps) if found else None), nodes


def _subset_sums(vecs, n):
    """Sums of every subset, indexed so that the mask order is lex order of eps."""
    h = len(vecs)
    sums = [(0,) * n] * (1 << h)
    for mask in range(1, 1 << h):
        low = mask & -mask
        bit = low.bit_length() - 1
        prev = sums[mask ^ low]
        v = vecs[h - 1 - bit]
        sums[mask] = tuple(a + b for a, b in zip(prev, v))
    return sums


def _mask_to_eps(mask, h):
    return [(mask >> (h - 1 - i)) & 1 for i in range(h)]


def mitm_bottom(vecs, split, target_v):
    """Meet in the middle for items in the abelian bottom subgroup Z^n.

    Suffix sums go into a table keyed by value (first mask wins); prefixes
    are scanned in lex order, so the witness is the lexicographic minimum.
    """
    k = len(vecs)
    n = len(target_v)
    h1, h2 = split, k - split
    table: dict = {}
    for mask, s in enumerate(_subset_sums(vecs[split:], n)):
        table.setdefault(s, mask)
    nodes = 1 << h2
    prefix = _subset_sums(vecs[:split], n)
    target_v = tuple(target_v)
    for pmask in range(1 << h1):
        nodes += 1
        need = tuple(a - b for a, b in zip(target_v, prefix[pmask]))
        smask = table.get(need)
        if smask is not None:
            return True, _mask_to_eps(pmask, h1) + _mask_to_eps(smask, h2), nodes
    return False, None, nodes
