"""Free nilpotent groups N(r, c): Hall basis, collection, permutation correction.

Elements of N(r, c) are written in Malcev coordinates over a Hall basis of
basic commutators, ``w = y_1^a_1 ... y_m^a_m``, ordered by weight.  The
collector moves every occurrence of ``y_p`` to the left, one basis index at a
time, using ``t^b s^a = s^a t^b [t^b, s^a]``; the correction
``[t^b, s^a]`` only involves basis elements of weight ``>= w(s) + w(t)`` and
its coordinates are integer polynomials in ``a, b``.  Those polynomials are
interpolated once per pair from the Magnus embedding of N(r, c) into the
truncated free algebra ``Z<X_1..X_r> / (degree > c)``, which is exact and
doubles as an independent oracle.

Commutator convention: ``[a, b] = a^-1 b^-1 a b``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .groups import Group
from .words import Alphabet, Word, WordError, commutator

MAX_RANK = 6
MAX_CLASS = 4


class CollectionLimitError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class BasicCommutator:
    index: int
    weight: int
    name: str
    generator: Optional[int] = None
    left: Optional["BasicCommutator"] = None
    right: Optional["BasicCommutator"] = None

    def __repr__(self) -> str:
        return self.name

    def word(self, images: Sequence[Word]) -> Word:
        """The commutator expression with generator i replaced by ``images[i]``."""
        if self.generator is not None:
            return images[self.generator]
        return commutator(self.left.word(images), self.right.word(images))


def witt_number(r: int, n: int) -> int:
    """Number of basic commutators of weight n on r generators."""

    def mobius(d: int) -> int:
        result, p = 1, 2
        while p * p <= d:
            if d % p == 0:
                d //= p
                if d % p == 0:
                    return 0
                result = -result
            p += 1
        return -result if d > 1 else result

    return sum(mobius(d) * r ** (n // d) for d in range(1, n + 1) if n % d == 0) // n


@dataclass(frozen=True, eq=False)
class HallBasis:
    r: int
    c: int
    elements: tuple[BasicCommutator, ...]
    generator_names: tuple[str, ...]

    @property
    def m(self) -> int:
        return len(self.elements)

    @property
    def names(self) -> list[str]:
        return [e.name for e in self.elements]

    @property
    def alphabet(self) -> Alphabet:
        """Alphabet whose letters are the basis elements (for correction words)."""
        return Alphabet(tuple(self.names))

    @property
    def generator_alphabet(self) -> Alphabet:
        return Alphabet(self.generator_names)

    def weight_range(self, d: int) -> range:
        idx = [e.index for e in self.elements if e.weight == d]
        return range(idx[0], idx[-1] + 1) if idx else range(0)


@lru_cache(maxsize=64)
def hall_basis(r: int, c: int, names: Optional[tuple[str, ...]] = None) -> HallBasis:
    """Hall basis of N(r, c) in weight-lexicographic order.

    Basic commutators ``[u, v]`` satisfy ``u < v`` and, when ``u = [u', u'']``,
    ``u'' >= v``, for the Hall order in which heavier elements come first and
    same-weight elements keep their listing order (``x1 < x2 < ...``).
    """
    if r < 1 or c < 1:
        raise ValueError("rank and class must be positive")
    names = tuple(names) if names else tuple(f"x{i + 1}" for i in range(r))
    if len(names) != r:
        raise ValueError("need one name per generator")
    elements: list[BasicCommutator] = [
        BasicCommutator(i, 1, names[i], generator=i) for i in range(r)
    ]
    pos = {e.index: e.index for e in elements}

    def less(u: BasicCommutator, v: BasicCommutator) -> bool:
        return (-u.weight, pos[u.index]) < (-v.weight, pos[v.index])

    for n in range(2, c + 1):
        new = []
        for u in elements:
            for v in elements:
                if u.weight + v.weight != n or not less(u, v):
                    continue
                if u.generator is None and less(u.right, v):
                    continue
                new.append((u, v))
        for u, v in new:
            bc = BasicCommutator(len(elements), n, f"[{u.name},{v.name}]", left=u, right=v)
            pos[bc.index] = bc.index
            elements.append(bc)
    return HallBasis(r, c, tuple(elements), names)


# --------------------------------------------------------------------------
# Magnus embedding into the truncated free associative algebra


def gbinom(n: int, k: int) -> int:
    """Binomial coefficient valid for negative ``n``."""
    if k < 0:
        return 0
    num = 1
    for t in range(k):
        num *= n - t
    return num // math.factorial(k)


class MagnusAlgebra:
    """``Z<X_1..X_r>`` modulo words of length ``> c``; elements are dicts word -> int."""

    def __init__(self, r: int, c: int):
        self.r, self.c = r, c
        self.one = {(): 1}

    def mul(self, a: dict, b: dict) -> dict:
        c = self.c
        out: dict = {}
        for wa, ca in a.items():
            room = c - len(wa)
            for wb, cb in b.items():
                if len(wb) <= room:
                    key = wa + wb
                    out[key] = out.get(key, 0) + ca * cb
        return {k: v for k, v in out.items() if v}

    def gen_power(self, i: int, e: int) -> dict:
        """``(1 + X_i)^e`` for any integer e."""
        out = {}
        for d in range(self.c + 1):
            coef = gbinom(e, d)
            if coef:
                out[(i,) * d] = coef
        return out

    def inverse(self, a: dict) -> dict:
        nil = {k: -v for k, v in a.items() if k}
        out, term = dict(self.one), dict(self.one)
        for _ in range(self.c):
            term = self.mul(term, nil)
            if not term:
                break
            for k, v in term.items():
                out[k] = out.get(k, 0) + v
        return {k: v for k, v in out.items() if v}

    def power(self, a: dict, e: int) -> dict:
        if e < 0:
            a, e = self.inverse(a), -e
        result = dict(self.one)
        while e:
            if e & 1:
                result = self.mul(result, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return result

    def word_image(self, letters: Iterable[tuple[int, int]]) -> dict:
        out = dict(self.one)
        for g, e in letters:
            out = self.mul(out, self.gen_power(g, e))
        return out


def _invert_square(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    """Gauss-Jordan inverse over the rationals."""
    n = len(rows)
    a = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next(i for i in range(col, n) if a[i][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        lead = a[col][col]
        a[col] = [x / lead for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [r[n:] for r in a]


# --------------------------------------------------------------------------
# collection


Syllable = tuple[int, int]


class Collector:
    """Collection engine for N(r, c) over ``hall_basis(r, c)``."""

    def __init__(self, r: int, c: int, names: Optional[tuple[str, ...]] = None):
        if r > MAX_RANK or c > MAX_CLASS:
            raise CollectionLimitError(
                f"N({r},{c}) is beyond desk scale (rank <= {MAX_RANK}, class <= {MAX_CLASS})"
            )
        self.basis = hall_basis(r, c, names)
        self.r, self.c = r, c
        self.algebra = MagnusAlgebra(r, c)
        self.weights = [e.weight for e in self.basis.elements]
        self.central_start = self.basis.weight_range(c).start
        self._images: list[dict] = []
        for e in self.basis.elements:
            if e.generator is not None:
                img = self.algebra.gen_power(e.generator, 1)
            else:
                L, R = self._images[e.left.index], self._images[e.right.index]
                A = self.algebra
                img = A.mul(A.mul(A.inverse(L), A.inverse(R)), A.mul(L, R))
            self._images.append(img)
        self._pivots: dict[int, tuple] = {}
        self._swap: dict[tuple[int, int], tuple] = {}

    # -- Magnus route -------------------------------------------------------

    def _pivot_system(self, d: int):
        cached = self._pivots.get(d)
        if cached is not None:
            return cached
        idxs = list(self.basis.weight_range(d))
        chosen: list[tuple] = []
        rows: list[list[Fraction]] = []
        echelon: list[tuple[int, list[Fraction]]] = []
        if idxs:
            words = sorted({w for i in idxs for w in self._images[i] if len(w) == d})
            for w in words:
                row = [Fraction(self._images[i].get(w, 0)) for i in idxs]
                red = list(row)
                for col, prow in echelon:
                    if red[col]:
                        f = red[col] / prow[col]
                        red = [x - f * y for x, y in zip(red, prow)]
                lead = next((j for j, x in enumerate(red) if x), None)
                if lead is None:
                    continue
                echelon.append((lead, red))
                chosen.append(w)
                rows.append(row)
                if len(chosen) == len(idxs):
                    break
            if len(chosen) != len(idxs):
                raise AssertionError(f"weight-{d} leading terms are not independent")
        system = (idxs, chosen, _invert_square(rows) if rows else [])
        self._pivots[d] = system
        return system

    def magnus(self, letters: Iterable[Syllable]) -> dict:
        """Magnus image of a word given as generator syllables."""
        return self.algebra.word_image(letters)

    def coordinates_from_magnus(self, image: dict) -> list[int]:
        A = self.algebra
        alphas = [0] * self.basis.m
        cur = image
        for d in range(1, self.c + 1):
            idxs, words, inv = self._pivot_system(d)
            if not idxs:
                continue
            rhs = [cur.get(w, 0) for w in words]
            for idx, row in zip(idxs, inv):
                val = sum(x * y for x, y in zip(row, rhs))
                if val.denominator != 1:
                    raise AssertionError("non-integral Malcev coordinate")
                alphas[idx] = int(val)
            if d < self.c:
                prod = A.one
                for idx in idxs:
                    if alphas[idx]:
                        prod = A.mul(prod, A.power(self._images[idx], alphas[idx]))
                cur = A.mul(A.inverse(prod), cur)
        return alphas

    def collect_magnus(self, letters: Iterable[Syllable]) -> list[int]:
        """Malcev coordinates through the Magnus embedding (independent of collection)."""
        return self.coordinates_from_magnus(self.magnus(letters))

    def image_of(self, alphas: Sequence[int]) -> dict:
        A = self.algebra
        out = A.one
        for idx, a in enumerate(alphas):
            if a:
                out = A.mul(out, A.power(self._images[idx], a))
        return out

    # -- swap polynomials ---------------------------------------------------

    def _commutator_coords(self, t: int, b: int, s: int, a: int) -> list[int]:
        A = self.algebra
        tb = A.power(self._images[t], b)
        sa = A.power(self._images[s], a)
        img = A.mul(A.mul(A.inverse(tb), A.inverse(sa)), A.mul(tb, sa))
        return self.coordinates_from_magnus(img)

    def _swap_table(self, t: int, s: int) -> tuple:
        key = (t, s)
        table = self._swap.get(key)
        if table is not None:
            return table
        ws, wt = self.weights[s], self.weights[t]
        if ws + wt > self.c or s == t:
            self._swap[key] = ()
            return ()
        Da, Db = (self.c - wt) // ws, (self.c - ws) // wt
        grid = {
            (a, b): self._commutator_coords(t, b, s, a)
            for a in range(Da + 1)
            for b in range(Db + 1)
        }
        table = []
        for k in range(self.basis.m):
            terms = []
            for i in range(Da + 1):
                for j in range(Db + 1):
                    coef = sum(
                        (-1) ** (i - p + j - q) * math.comb(i, p) * math.comb(j, q) * grid[(p, q)][k]
                        for p in range(i + 1)
                        for q in range(j + 1)
                    )
                    if coef:
                        terms.append((i, j, coef))
            if terms:
                table.append((k, tuple(terms)))
        table = tuple(table)
        for a, b in ((-2, 3), (Da + 2, -1), (-3, -Db - 2), (Da + 3, Db + 2)):
            if _eval_swap(table, a, b, self.basis.m) != self._commutator_coords(t, b, s, a):
                raise AssertionError(f"swap polynomial for ({t}, {s}) failed verification")
        self._swap[key] = table
        return table

    def commutator_power(self, t: int, b: int, s: int, a: int) -> list[Syllable]:
        """Normal form of ``[y_t^b, y_s^a]`` as (basis index, exponent) syllables."""
        table = self._swap_table(t, s)
        out = []
        for k, terms in table:
            v = sum(coef * gbinom(a, i) * gbinom(b, j) for i, j, coef in terms)
            if v:
                out.append((k, v))
        return out

    # -- collection ---------------------------------------------------------

    def collect_syllables(self, syllables: Iterable[Syllable]) -> list[int]:
        """Collect a word given as (basis index, exponent) syllables.

        Index ``p = 0, 1, ...``: every occurrence of ``y_p`` is pushed left
        past the uncollected syllables (all of larger index); each pass
        sweeps right to left so that ``y_p^E`` accumulates as it travels.
        Weight-c syllables are central and are tallied directly.
        """
        alphas = [0] * self.basis.m
        central = self.central_start
        word: list[Syllable] = []
        for i, e in syllables:
            if not e:
                continue
            if i >= central:
                alphas[i] += e
            elif word and word[-1][0] == i:
                word[-1] = (i, word[-1][1] + e)
                if not word[-1][1]:
                    word.pop()
            else:
                word.append((i, e))
        for p in range(central):
            if not word:
                break
            E = 0
            rev: list[Syllable] = []
            for t, b in reversed(word):
                if t == p:
                    E += b
                    continue
                if E:
                    for k, v in reversed(self.commutator_power(t, b, p, E)):
                        if k >= central:
                            alphas[k] += v
                        else:
                            rev.append((k, v))
                rev.append((t, b))
            alphas[p] += E
            word = []
            for i, e in reversed(rev):
                if word and word[-1][0] == i:
                    word[-1] = (i, word[-1][1] + e)
                    if not word[-1][1]:
                        word.pop()
                else:
                    word.append((i, e))
        if word:
            raise AssertionError("collection left uncollected syllables")
        return alphas

    def collect(self, w: Word) -> "ExponentVector":
        if len(w.alphabet) != self.r:
            raise WordError(f"word has {len(w.alphabet)} generators, N({self.r},{self.c}) has {self.r}")
        return ExponentVector(self.basis, tuple(self.collect_syllables(w.letters)))

    def multiply(self, a: Sequence[int], b: Sequence[int]) -> list[int]:
        syl = [(i, e) for i, e in enumerate(a) if e] + [(i, e) for i, e in enumerate(b) if e]
        return self.collect_syllables(syl)

    def inverse(self, a: Sequence[int]) -> list[int]:
        return self.collect_syllables([(i, -e) for i, e in reversed(list(enumerate(a))) if e])


def _eval_swap(table: tuple, a: int, b: int, m: int) -> list[int]:
    out = [0] * m
    for k, terms in table:
        out[k] = sum(coef * gbinom(a, i) * gbinom(b, j) for i, j, coef in terms)
    return out


@lru_cache(maxsize=64)
def collector(r: int, c: int, names: Optional[tuple[str, ...]] = None) -> Collector:
    return Collector(r, c, names)


# --------------------------------------------------------------------------
# public operations


@dataclass(frozen=True)
class ExponentVector:
    basis: HallBasis
    alphas: tuple[int, ...]

    def __post_init__(self):
        if len(self.alphas) != self.basis.m:
            raise ValueError(f"expected {self.basis.m} exponents, got {len(self.alphas)}")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExponentVector)
            and other.basis.r == self.basis.r
            and other.basis.c == self.basis.c
            and other.alphas == self.alphas
        )

    def __hash__(self) -> int:
        return hash((self.basis.r, self.basis.c, self.alphas))

    def by_weight(self, d: int) -> tuple[int, ...]:
        rng = self.basis.weight_range(d)
        return self.alphas[rng.start : rng.stop]

    def basis_word(self) -> Word:
        """``y_1^a_1 ... y_m^a_m`` as a word over the basis alphabet."""
        return Word(tuple((i, a) for i, a in enumerate(self.alphas) if a), self.basis.alphabet)

    def normal_word(self) -> Word:
        """The normal form spelled out in the generators (commutators expanded)."""
        gens = self.basis.generator_alphabet
        images = [Word(((i, 1),), gens) for i in range(self.basis.r)]
        return Word.concat((e.word(images) ** a for e, a in zip(self.basis.elements, self.alphas) if a), gens)

    def to_json(self) -> dict:
        return {"basis": self.basis.names, "alphas": list(self.alphas)}

    @classmethod
    def from_json(cls, obj: dict, r: int, c: int) -> "ExponentVector":
        basis = hall_basis(r, c)
        if list(obj["basis"]) != basis.names:
            raise ValueError("basis in JSON does not match hall_basis(r, c)")
        return cls(basis, tuple(int(a) for a in obj["alphas"]))


def collect(r: int, c: int, w: Word) -> ExponentVector:
    """Malcev coordinates of ``w`` in N(r, c)."""
    return collector(r, c).collect(w)


def _as_index(basis: HallBasis, x) -> int:
    if isinstance(x, BasicCommutator):
        return x.index
    if isinstance(x, str):
        return basis.names.index(x)
    return int(x)


def swap_rewrite(basis: HallBasis, s, t, s_exp: int = 1, t_exp: int = 1) -> Word:
    """Word ``u`` over basis letters with ``t^b s^a = s^a t^b u`` in N(r, c).

    ``u`` is the normal form of ``[t^b, s^a]``; every letter has weight at
    least ``w(s) + w(t)`` and ``u`` is empty once that exceeds the class.
    """
    col = collector(basis.r, basis.c, basis.generator_names)
    si, ti = _as_index(basis, s), _as_index(basis, t)
    return Word(tuple(col.commutator_power(ti, t_exp, si, s_exp)), basis.alphabet)


def swap_constant(r: int, c: int) -> int:
    """Longest ``u`` over all ``t^{+-1} s^{+-1}`` swaps: the measured C_0."""
    col = collector(r, c)
    best = 0
    m = col.basis.m
    for s in range(m):
        for t in range(m):
            for a in (1, -1):
                for b in (1, -1):
                    best = max(best, sum(abs(v) for _, v in col.commutator_power(t, b, s, a)))
    return best


def heisenberg_eval(w: Word) -> tuple[int, int, int]:
    """Image of a word over two generators in the integer Heisenberg group."""
    if len(w.alphabet) != 2:
        raise WordError("heisenberg_eval needs a word over exactly two generators")
    from .groups import HeisenbergGroup

    return HeisenbergGroup(w.alphabet.names).evaluate(w)


def heisenberg_coordinates(ev: ExponentVector) -> tuple[int, int, int]:
    """Translate N(2,2) coordinates of ``x1^a x2^b [x1,x2]^g`` to ``(a, b, ab + g)``."""
    if (ev.basis.r, ev.basis.c) != (2, 2):
        raise ValueError("translation is defined for N(2,2) only")
    a, b, g = ev.alphas
    return (a, b, a * b + g)


def _check_permutation(k: int, tau: Sequence[int]) -> tuple[int, ...]:
    tau = tuple(int(t) for t in tau)
    if sorted(tau) != list(range(1, k + 1)):
        raise ValueError(f"{tau} is not a permutation of 1..{k}")
    return tau


def permutation_correction(k: int, c: int, eps: Sequence[int], tau: Sequence[int]) -> ExponentVector:
    """Exponents with ``x_t1^e_t1 ... x_tk^e_tk = x_1^e_1 ... x_k^e_k * prod h_i^a_i``.

    The weight-one entries are zero; entries of weight ``2..c`` are the
    correction over the Hall commutators ``h_i``.  By freeness the identity
    survives any specialization into a group of class at most ``c``.
    """
    if len(eps) != k or any(e not in (0, 1) for e in eps):
        raise ValueError("eps must be a 0/1 vector of length k")
    tau = _check_permutation(k, tau)
    col = collector(k, c)
    ordered = [(i, 1) for i in range(k) if eps[i]]
    permuted = [(t - 1, 1) for t in tau if eps[t - 1]]
    alphas = col.collect_syllables([(i, -e) for i, e in reversed(ordered)] + permuted)
    if any(alphas[:k]):
        raise AssertionError("weight-one part of a permutation correction must vanish")
    return ExponentVector(col.basis, tuple(alphas))


def reorder_correction(k: int, c: int, tau: Sequence[int]) -> ExponentVector:
    """Exponents with ``x_t1 ... x_tk * prod h_i^a_i = x_1 ... x_k``."""
    tau = _check_permutation(k, tau)
    col = collector(k, c)
    syl = [(t - 1, -1) for t in reversed(tau)] + [(i, 1) for i in range(k)]
    return ExponentVector(col.basis, tuple(col.collect_syllables(syl)))


def enumerate_iterated_commutators(ws: Sequence[Word], c: int) -> list[Word]:
    """Words of the weight ``2..c`` Hall commutators with ``x_i -> ws[i]``."""
    if c < 2:
        raise ValueError("class must be at least 2")
    k = len(ws)
    if k < 2:
        return []
    basis = hall_basis(k, c)
    return [e.word(list(ws)) for e in basis.elements if e.weight >= 2]


class NilpotentGroup(Group):
    """N(r, c) as a group object; elements are Malcev coordinate tuples."""

    def __init__(self, r: int, c: int, names: Optional[Sequence[str]] = None):
        self.col = collector(r, c, tuple(names) if names else None)
        self.r, self.c = r, c
        self.alphabet = self.col.basis.generator_alphabet
        self.identity = (0,) * self.col.basis.m

    def __eq__(self, other) -> bool:
        return isinstance(other, NilpotentGroup) and (other.r, other.c, other.alphabet) == (
            self.r,
            self.c,
            self.alphabet,
        )

    def __hash__(self) -> int:
        return hash(("N", self.r, self.c, self.alphabet))

    def mul(self, a, b):
        return tuple(self.col.multiply(a, b))

    def inv(self, a):
        return tuple(self.col.inverse(a))

    def generator(self, i: int):
        return tuple(int(j == i) for j in range(self.col.basis.m))

    def power(self, a, e: int):
        if sum(1 for x in a if x) == 1:
            return tuple(e * x for x in a)
        return super().power(a, e)

    def evaluate(self, w: Word):
        self.check_word(w)
        return tuple(self.col.collect_syllables(w.letters))

    def to_json(self) -> dict:
        return {"kind": "nilpotent", "r": self.r, "c": self.c, "names": list(self.alphabet.names)}
