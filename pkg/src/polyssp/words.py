"""Free words over a named generator alphabet.

A word keeps its letters exactly as written: ``(generator index, exponent)``
pairs with nonzero exponents.  ``length`` counts letters before merging;
``normalized()`` merges adjacent letters on the same generator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class WordError(ValueError):
    pass


@dataclass(frozen=True)
class Alphabet:
    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        if not names:
            raise WordError("alphabet must be nonempty")
        if len(set(names)) != len(names):
            raise WordError(f"duplicate generator names in {names}")
        for name in names:
            if not name or any(ch.isspace() for ch in name) or "^" in name:
                raise WordError(f"invalid generator name {name!r}")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(names)})

    def __len__(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise WordError(f"unknown generator {name!r}; alphabet is {list(self.names)}") from None

    def word(self, text: str) -> "Word":
        return Word.parse(text, self)

    def letter(self, name: str, exp: int = 1) -> "Word":
        return Word(((self.index(name), exp),), self) if exp else Word((), self)


@dataclass(frozen=True)
class Word:
    letters: tuple[tuple[int, int], ...]
    alphabet: Alphabet

    def __post_init__(self):
        letters = tuple((int(g), int(e)) for g, e in self.letters)
        for g, e in letters:
            if not 0 <= g < len(self.alphabet):
                raise WordError(f"generator index {g} out of range")
            if e == 0:
                raise WordError("zero exponent in word letter")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def empty(cls, alphabet: Alphabet) -> "Word":
        return cls((), alphabet)

    @classmethod
    def parse(cls, text: str, alphabet: Alphabet) -> "Word":
        """Parse ``"x^-3 e2 x^3"``: whitespace separated ``name`` or ``name^int`` tokens."""
        letters = []
        for token in text.split():
            name, caret, exp = token.rpartition("^")
            if not caret:
                name, exp = token, "1"
            try:
                e = int(exp)
            except ValueError:
                raise WordError(f"bad exponent in token {token!r}") from None
            if e:
                letters.append((alphabet.index(name), e))
        return cls(tuple(letters), alphabet)

    @classmethod
    def concat(cls, words: Iterable["Word"], alphabet: Alphabet) -> "Word":
        letters: list[tuple[int, int]] = []
        for w in words:
            if w.alphabet != alphabet:
                raise WordError("cannot concatenate words over different alphabets")
            letters.extend(w.letters)
        return cls(tuple(letters), alphabet)

    def __str__(self) -> str:
        names = self.alphabet.names
        return " ".join(names[g] if e == 1 else f"{names[g]}^{e}" for g, e in self.letters)

    def __add__(self, other: "Word") -> "Word":
        if other.alphabet != self.alphabet:
            raise WordError("cannot concatenate words over different alphabets")
        return Word(self.letters + other.letters, self.alphabet)

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return self.inverse() ** (-k)
        return Word(self.letters * k, self.alphabet)

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def length(self) -> int:
        """Word length ``sum |exponent|`` of the letters as written."""
        return sum(abs(e) for _, e in self.letters)

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)), self.alphabet)

    def normalized(self) -> "Word":
        """Merge adjacent letters on the same generator, dropping cancelled ones."""
        out: list[list[int]] = []
        for g, e in self.letters:
            if out and out[-1][0] == g:
                out[-1][1] += e
                if out[-1][1] == 0:
                    out.pop()
            else:
                out.append([g, e])
        return Word(tuple((g, e) for g, e in out), self.alphabet)

    def substitute(self, images: Sequence["Word"]) -> "Word":
        """Replace generator i by ``images[i]`` (all images over one alphabet)."""
        if len(images) != len(self.alphabet):
            raise WordError("need one image per generator")
        target = images[0].alphabet
        return Word.concat((images[g] ** e for g, e in self.letters), target)


def commutator(u: Word, v: Word) -> Word:
    """``[u, v] = u^-1 v^-1 u v``."""
    return u.inverse() + v.inverse() + u + v
