import pytest
from hypothesis import given, strategies as st

from conftest import AB, LMT, XY, raw_words, words
from gtcert.words import (
    Alphabet,
    AlphabetMismatch,
    UnknownGenerator,
    Word,
    WordSyntaxError,
    commutator,
    conjugate,
    exponent_sum,
    inverse,
    multiply,
    parse_word,
    reduce,
)

a, b = AB.gens()
x, y = XY.gens()


def w(text, al=AB):
    return parse_word(text, al)


def test_reduce_examples():
    assert reduce(XY, [("x", 1), ("x", -1)]).is_identity()
    assert reduce(AB, [("a", 2), ("a", 3), ("b", -1)]) == w("a^5 b^-1")
    assert reduce(AB, [("a", 1), ("b", 1), ("b", -1), ("a", -1)]).is_identity()


def test_multiply_examples():
    assert (w("a b") * w("b^-1 a^-1")).is_identity()
    assert multiply(w("a b"), w("b a b")) == w("a b^2 a b")
    assert AB.identity * w("a b") == w("a b")


def test_inverse_examples():
    assert inverse(w("a b")) == w("b^-1 a^-1")
    assert inverse(AB.identity).is_identity()
    assert inverse(w("b a^-1 b a^-2")) == w("a^2 b^-1 a b^-1")


def test_conjugate_examples():
    assert conjugate(x, y) == parse_word("y^-1 x y", XY)
    assert conjugate(w("a b"), AB.identity) == w("a b")
    assert conjugate(a, b**-2) == w("b^2 a b^-2")
    assert x ^ y == conjugate(x, y)


def test_commutator_examples():
    assert commutator(a, a).is_identity()
    l, m, _ = LMT.gens()
    assert commutator(l, m) == parse_word("l m l^-1 m^-1", LMT)
    assert commutator(w("a b^2"), w("b a")).exponent_vector() == [0, 0]


def test_exponent_sum_examples():
    assert exponent_sum(w("a b^2 a b"), "b") == 3
    assert exponent_sum(AB.identity, "b") == 0
    assert exponent_sum(w("b a b a b^2 a b"), "b") == 5
    with pytest.raises(UnknownGenerator):
        exponent_sum(a, "z")


def test_alphabet_is_structural():
    assert Alphabet(("a", "b")) == AB
    assert Word(Alphabet(("a", "b")), ((0, 1),)) == a
    with pytest.raises(AlphabetMismatch):
        a * x
    with pytest.raises(ValueError):
        Alphabet(("a", "a"))
    with pytest.raises(ValueError):
        Alphabet(("1a",))


def test_word_rejects_unreduced_syllables():
    with pytest.raises(ValueError):
        Word(AB, ((0, 1), (0, 2)))
    with pytest.raises(ValueError):
        Word(AB, ((0, 0),))
    with pytest.raises(UnknownGenerator):
        Word(AB, ((5, 1),))


def test_huge_exponents_stay_compact():
    big = a ** (10**30) * b
    assert big.syllables == ((0, 10**30), (1, 1))
    assert big.length == 10**30 + 1
    assert (w("a b a^-1") ** (10**12)).syllables == ((0, 1), (1, 10**12), (0, -1))


def test_letter_slicing():
    u = w("a^3 b^-2 a")
    assert u.prefix(4) == w("a^3 b^-1")
    assert u.suffix(4) == w("b^-1 a")
    assert u.subword(2, 5) == w("a b^-2")


def test_parse_groups_and_errors():
    assert w("(a b)^2 1 (b)^-1") == w("a b a")
    assert w("a^ -2") == w("a^-2")
    with pytest.raises(WordSyntaxError) as e:
        w("a c")
    assert (e.value.line, e.value.column) == (1, 3)
    with pytest.raises(WordSyntaxError):
        w("(a b")
    with pytest.raises(WordSyntaxError):
        w("a b)")
    with pytest.raises(WordSyntaxError):
        w("a^0")
    with pytest.raises(WordSyntaxError):
        w("^2")


@given(raw_words(AB))
def test_reduce_idempotent(raw):
    r = reduce(AB, raw)
    assert reduce(AB, r.syllables) == r


@given(words(AB), words(AB), words(AB))
def test_multiply_associative(u, v, t):
    assert (u * v) * t == u * (v * t)


@given(words(AB))
def test_inverse_cancels(u):
    assert (u * u.inverse()).is_identity()
    assert (u.inverse() * u).is_identity()


@given(words(AB), words(AB), words(AB))
def test_conjugation_is_a_homomorphism(u, v, c):
    assert conjugate(u * v, c) == conjugate(u, c) * conjugate(v, c)


@given(words(AB), words(AB))
def test_exponent_sum_conjugation_invariant(u, c):
    for g in ("a", "b"):
        assert exponent_sum(conjugate(u, c), g) == exponent_sum(u, g)


@given(words(AB), st.integers(-5, 5))
def test_power_matches_repeated_product(u, n):
    rep = AB.identity
    for _ in range(abs(n)):
        rep = rep * (u if n > 0 else u.inverse())
    assert u**n == rep


@given(words(AB))
def test_render_parse_roundtrip(u):
    assert parse_word(str(u), AB) == u


@given(words(AB, 6), words(AB, 6), st.integers(1, 6))
def test_commutator_power_recursion(e, f, alpha):
    lhs = commutator(e**alpha, f)
    rhs = conjugate(commutator(e ** (alpha - 1), f), e.inverse()) * commutator(e, f)
    assert lhs == rhs


@given(words(XY, 6), words(XY, 6))
def test_square_commutator_identity(u, v):
    c = commutator(u, v)
    assert commutator(u * u, v) == conjugate(c, u.inverse()) * c
