import random

import pytest

from polyssp.algebra import AlgebraError, IntMatrix, IntVector
from polyssp.groups import (
    DirectProduct,
    FElement,
    FGroup,
    FreeAbelianGroup,
    HeisenbergGroup,
    evaluate,
    f_inv,
    f_mul,
    group_from_json,
    word_problem,
)
from polyssp.words import Alphabet, Word, WordError, commutator

from conftest import random_word


def el(t, v):
    return FElement(t, IntVector(v))


def test_parse_and_print():
    a = Alphabet(("x", "e1", "e2"))
    w = Word.parse("x^-3 e2 x^3", a)
    assert w.letters == ((0, -3), (2, 1), (0, 3))
    assert str(w) == "x^-3 e2 x^3"
    assert w.length == 7
    assert Word.parse("", a) == Word.empty(a)


def test_parse_errors():
    a = Alphabet(("x", "e1"))
    with pytest.raises(WordError):
        Word.parse("y", a)
    with pytest.raises(WordError):
        Word.parse("x^z", a)
    with pytest.raises(ValueError):
        Alphabet(("x", "x"))


def test_normalization_and_lengths():
    a = Alphabet(("x", "e1"))
    w = Word.parse("x x^2 e1 e1^-1 x^-3", a)
    assert w.length == 8
    assert w.normalized() == Word.empty(a)
    v = Word.parse("x x e1", a)
    assert str(v.normalized()) == "x^2 e1"
    assert v.normalized().length == v.length


def test_round_trip_normalized():
    rng = random.Random(0)
    a = Alphabet(("x", "e1", "e2"))
    for _ in range(100):
        w = random_word(rng, a, 12, 4).normalized()
        assert Word.parse(str(w), a) == w


def test_f_mul_examples(F0):
    x, e1 = el(1, [0, 0]), el(0, [1, 0])
    assert f_mul(F0, x, e1) == el(1, [1, 0])
    assert f_mul(F0, e1, x) == el(1, [2, 1])
    assert f_mul(F0, e1, F0.identity) == e1


def test_f_inv_examples(F0):
    assert f_inv(F0, F0.identity) == F0.identity
    assert f_inv(F0, el(1, [0, 0])) == el(-1, [0, 0])
    assert f_inv(F0, el(0, [2, 1])) == el(0, [-2, -1])


def test_evaluate_examples(F0):
    assert evaluate(F0, F0.word("x^-1 e1 x")) == el(0, [2, 1])
    assert evaluate(F0, F0.word("")) == F0.identity
    assert evaluate(F0, F0.word("x e1 x^-1")) == el(0, [1, -1])


def test_word_problem_examples(F0):
    assert word_problem(F0, F0.word("e1 e2 e1^-1 e2^-1"))
    assert not word_problem(F0, F0.word("x^-1 e1 x e1^-1"))
    assert word_problem(F0, F0.word("x^3 x^-3"))


def test_dimension_mismatch(F0):
    with pytest.raises(AlgebraError):
        f_mul(F0, el(0, [1, 0, 0]), F0.identity)
    with pytest.raises(AlgebraError):
        FGroup(IntMatrix.from_rows([[2, 0], [0, 1]]))


def test_wrong_alphabet(F0):
    other = Alphabet(("x1", "x2"))
    with pytest.raises(WordError):
        F0.evaluate(Word.parse("x1", other))


def test_homomorphism_500_pairs(F0):
    rng = random.Random(1)
    for _ in range(500):
        u = random_word(rng, F0.alphabet, rng.randint(0, 15), 3)
        v = random_word(rng, F0.alphabet, rng.randint(0, 15), 3)
        assert F0.evaluate(u + v) == f_mul(F0, F0.evaluate(u), F0.evaluate(v))


def test_fold_matches_generic(F0):
    rng = random.Random(2)
    G3 = FGroup(IntMatrix.from_rows([[1, 1, 0], [1, 2, 1], [0, 1, 2]]))
    for G in (F0, G3):
        for _ in range(100):
            w = random_word(rng, G.alphabet, 20, 3)
            generic = G.identity
            for g, e in w.letters:
                generic = G.mul(generic, G.power(G.generator(g), e))
            assert G.evaluate(w) == generic


def test_inverse_words(F0):
    rng = random.Random(3)
    for _ in range(200):
        w = random_word(rng, F0.alphabet, 20, 3)
        assert word_problem(F0, w + w.inverse())
        assert F0.evaluate(w.inverse()) == f_inv(F0, F0.evaluate(w))


def test_associativity(F0):
    rng = random.Random(4)
    for _ in range(200):
        a, b, c = (F0.evaluate(random_word(rng, F0.alphabet, 8, 3)) for _ in range(3))
        assert f_mul(F0, f_mul(F0, a, b), c) == f_mul(F0, a, f_mul(F0, b, c))


def _bits(e: FElement) -> int:
    return max([abs(x).bit_length() for x in e.v] + [1])


def test_entry_growth_linear(F0):
    rng = random.Random(5)
    c = max(_bits(F0.evaluate(random_word(rng, F0.alphabet, L))) / L for L in range(1, 40) for _ in range(20))
    c = max(c, 2.0)
    for _ in range(5):
        w = random_word(rng, F0.alphabet, 10_000)
        assert _bits(F0.evaluate(w)) <= c * w.length + c


def test_heisenberg_group_matches_matrices():
    H = HeisenbergGroup()

    def mat(p):
        a, b, z = p
        return IntMatrix.from_rows([[1, a, z], [0, 1, b], [0, 0, 1]])

    rng = random.Random(6)
    for _ in range(100):
        w = random_word(rng, H.alphabet, 12, 3)
        M = IntMatrix.identity(3)
        for g, e in w.letters:
            gen = mat(H.generator(g))
            for _ in range(abs(e)):
                M = M @ (gen if e > 0 else IntMatrix.from_rows([[1, -gen.entries[0][1], 0], [0, 1, -gen.entries[1][2]], [0, 0, 1]]))
        assert mat(H.evaluate(w)) == M


def test_heisenberg_commutator_central():
    H = HeisenbergGroup(("f1", "f2"))
    c = commutator(H.word("f1"), H.word("f2"))
    assert H.evaluate(c) == (0, 0, 1)


def test_group_json_round_trip(F0):
    groups = [
        F0,
        HeisenbergGroup(("f1", "f2")),
        FreeAbelianGroup(("z",)),
        DirectProduct([FreeAbelianGroup(("z",)), HeisenbergGroup(("f1", "f2"))]),
    ]
    for G in groups:
        assert group_from_json(G.to_json()) == G
    with pytest.raises(ValueError):
        group_from_json({"kind": "free"})
    with pytest.raises(ValueError):
        group_from_json({"n": 3, "X": [[2, 1], [1, 1]]})
