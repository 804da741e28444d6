"""Groups with canonical normal forms, so elements can be compared and hashed.

The main one is :class:`FGroup`, the semidirect product ``Z x|_X Z^n`` with
elements ``x^t . v``; the small Heisenberg, free abelian and direct product
groups exist for the padding demonstrations and as test oracles.
"""

from __future__ import annotations

from typing import Any, Hashable, NamedTuple, Sequence

from .algebra import AlgebraError, IntMatrix, IntVector, mat_pow
from .words import Alphabet, Word, WordError


class GroupError(ValueError):
    pass


class Group:
    """Finitely generated group given by generator images in a normal form.

    Subclasses provide ``alphabet``, ``identity``, ``mul``, ``inv`` and
    ``generator``; elements must be hashable canonical values.
    """

    alphabet: Alphabet
    identity: Hashable

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def generator(self, i: int):
        raise NotImplementedError

    def power(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        result = self.identity
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def check_word(self, w: Word) -> None:
        if w.alphabet != self.alphabet:
            raise WordError(
                f"word over {list(w.alphabet.names)} used in a group over {list(self.alphabet.names)}"
            )

    def evaluate(self, w: Word):
        self.check_word(w)
        result = self.identity
        for g, e in w.letters:
            result = self.mul(result, self.power(self.generator(g), e))
        return result

    def word_problem(self, w: Word) -> bool:
        """True iff ``w`` represents the identity."""
        return self.evaluate(w) == self.identity

    def word(self, text: str) -> Word:
        return Word.parse(text, self.alphabet)

    def to_json(self) -> dict:
        raise NotImplementedError


# --------------------------------------------------------------------------
# F = Z x|_X Z^n


class FElement(NamedTuple):
    """The element ``x^t . v`` of ``Z x|_X Z^n``."""

    t: int
    v: IntVector

    def to_json(self) -> dict:
        return {"t": self.t, "v": list(self.v)}


class FGroup(Group):
    """``Z x|_X Z^n`` with generators ``x, e1, ..., en``.

    Multiplication is ``(t_a, v_a)(t_b, v_b) = (t_a + t_b, X^{t_b} v_a + v_b)``,
    so conjugation ``x^-k e x^k`` evaluates to ``X^k e``.
    """

    def __init__(self, X: IntMatrix):
        if X.det_abs != 1:
            raise AlgebraError(f"action matrix must be unimodular, |det| = {X.det_abs}")
        self.X = X
        self.n = X.n
        self.alphabet = Alphabet(("x",) + tuple(f"e{j + 1}" for j in range(X.n)))
        self.identity = FElement(0, IntVector.zero(X.n))

    def __repr__(self) -> str:
        return f"FGroup(X={self.X})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FGroup) and other.X == self.X

    def __hash__(self) -> int:
        return hash(("F", self.X))

    def action(self, k: int) -> IntMatrix:
        return mat_pow(self.X, k)

    def element(self, t: int, v: Sequence[int]) -> FElement:
        if len(v) != self.n:
            raise AlgebraError(f"vector of length {len(v)} in a group of rank {self.n}")
        return FElement(int(t), IntVector(v))

    def mul(self, a: FElement, b: FElement) -> FElement:
        if len(a.v) != self.n or len(b.v) != self.n:
            raise AlgebraError("dimension mismatch")
        va = self.action(b.t).apply(a.v) if b.t else a.v
        return FElement(a.t + b.t, IntVector(x + y for x, y in zip(va, b.v)))

    def inv(self, a: FElement) -> FElement:
        w = self.action(-a.t).apply(a.v) if a.t else a.v
        return FElement(-a.t, IntVector(-x for x in w))

    def generator(self, i: int) -> FElement:
        if i == 0:
            return FElement(1, IntVector.zero(self.n))
        return FElement(0, IntVector.basis(self.n, i - 1))

    def power(self, a: FElement, e: int) -> FElement:
        if a.t == 0:
            return FElement(0, IntVector(e * x for x in a.v))
        return super().power(a, e)

    def evaluate(self, w: Word) -> FElement:
        """Left-to-right fold; x-letters multiply the running vector by ``X^e``."""
        self.check_word(w)
        n = self.n
        t = 0
        v = [0] * n
        powers: dict[int, tuple] = {}
        for g, e in w.letters:
            if g == 0:
                rows = powers.get(e)
                if rows is None:
                    rows = powers[e] = self.action(e).entries
                v = [sum(a * b for a, b in zip(row, v)) for row in rows]
                t += e
            else:
                v[g - 1] += e
        return FElement(t, IntVector(v))

    def to_json(self) -> dict:
        return {"n": self.n, "X": self.X.to_json()["entries"]}


def f_mul(G: FGroup, a: FElement, b: FElement) -> FElement:
    return G.mul(a, b)


def f_inv(G: FGroup, a: FElement) -> FElement:
    return G.inv(a)


def evaluate(G: Group, w: Word):
    return G.evaluate(w)


def word_problem(G: Group, w: Word) -> bool:
    return G.word_problem(w)


# --------------------------------------------------------------------------
# small nilpotent and abelian groups


class HeisenbergGroup(Group):
    """3x3 upper unitriangular integer matrices, coordinates ``(a, b, z)``.

    Generators map to ``(1, 0, 0)`` and ``(0, 1, 0)``; the product rule is
    ``z = z1 + z2 + a1 * b2``.  Isomorphic to the free nilpotent group N(2,2).
    """

    def __init__(self, names: Sequence[str] = ("x1", "x2")):
        self.alphabet = Alphabet(tuple(names))
        if len(self.alphabet) != 2:
            raise GroupError("Heisenberg group has exactly two generators")
        self.identity = (0, 0, 0)

    def __eq__(self, other) -> bool:
        return isinstance(other, HeisenbergGroup) and other.alphabet == self.alphabet

    def __hash__(self) -> int:
        return hash(("H", self.alphabet))

    def mul(self, p, q):
        return (p[0] + q[0], p[1] + q[1], p[2] + q[2] + p[0] * q[1])

    def inv(self, p):
        return (-p[0], -p[1], p[0] * p[1] - p[2])

    def generator(self, i: int):
        return ((1, 0, 0), (0, 1, 0))[i]

    def power(self, p, e: int):
        a, b, z = p
        return (e * a, e * b, e * z + a * b * e * (e - 1) // 2)

    def to_json(self) -> dict:
        return {"kind": "heisenberg", "names": list(self.alphabet.names)}


class FreeAbelianGroup(Group):
    def __init__(self, names: Sequence[str]):
        self.alphabet = Alphabet(tuple(names))
        self.identity = (0,) * len(self.alphabet)

    def __eq__(self, other) -> bool:
        return isinstance(other, FreeAbelianGroup) and other.alphabet == self.alphabet

    def __hash__(self) -> int:
        return hash(("Z", self.alphabet))

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def generator(self, i: int):
        return tuple(int(j == i) for j in range(len(self.alphabet)))

    def power(self, a, e: int):
        return tuple(e * x for x in a)

    def to_json(self) -> dict:
        return {"kind": "abelian", "names": list(self.alphabet.names)}


class DirectProduct(Group):
    """Direct product; the alphabet is the concatenation of the factors' alphabets."""

    def __init__(self, factors: Sequence[Group]):
        self.factors = tuple(factors)
        if not self.factors:
            raise GroupError("direct product needs at least one factor")
        self.alphabet = Alphabet(tuple(s for f in self.factors for s in f.alphabet.names))
        self.identity = tuple(f.identity for f in self.factors)
        self._owner = [(k, i) for k, f in enumerate(self.factors) for i in range(len(f.alphabet))]

    def __eq__(self, other) -> bool:
        return isinstance(other, DirectProduct) and other.factors == self.factors

    def __hash__(self) -> int:
        return hash(("P", self.factors))

    def mul(self, a, b):
        return tuple(f.mul(x, y) for f, x, y in zip(self.factors, a, b))

    def inv(self, a):
        return tuple(f.inv(x) for f, x in zip(self.factors, a))

    def generator(self, i: int):
        k, j = self._owner[i]
        return tuple(f.generator(j) if m == k else f.identity for m, f in enumerate(self.factors))

    def power(self, a, e: int):
        return tuple(f.power(x, e) for f, x in zip(self.factors, a))

    def to_json(self) -> dict:
        return {"kind": "product", "factors": [f.to_json() for f in self.factors]}


def group_from_json(obj: dict[str, Any]) -> Group:
    """Inverse of ``Group.to_json``; a bare ``{"n", "X"}`` object is an FGroup."""
    kind = obj.get("kind", "F")
    try:
        if kind == "F":
            X = IntMatrix.from_rows([[int(x) for x in r] for r in obj["X"]])
            if "n" in obj and int(obj["n"]) != X.n:
                raise GroupError(f"declared n={obj['n']} but X is {X.n}x{X.n}")
            return FGroup(X)
        if kind == "heisenberg":
            return HeisenbergGroup(obj.get("names", ("x1", "x2")))
        if kind == "abelian":
            return FreeAbelianGroup(obj["names"])
        if kind == "product":
            return DirectProduct([group_from_json(f) for f in obj["factors"]])
        if kind == "nilpotent":
            from .nilpotent import NilpotentGroup

            return NilpotentGroup(int(obj["r"]), int(obj["c"]), obj.get("names"))
    except (KeyError, TypeError) as exc:
        raise GroupError(f"malformed group descriptor: {exc!r}") from None
    raise GroupError(f"unknown group kind {kind!r}")
