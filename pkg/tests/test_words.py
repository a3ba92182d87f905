import pytest
from hypothesis import given, strategies as st

from conepda.errors import ParseError
from conepda.words import Alphabet, format_word, free_reduce, group_multiply, invert_word, is_reduced

from oracles import reduce_free

F2 = Alphabet.symmetric("a", "b")
words_f2 = st.lists(st.sampled_from(list(F2)), max_size=14).map(tuple)


def test_symmetric_alphabet_pairs_letters():
    assert F2.letters == ("a", "a^", "b", "b^")
    assert F2.inverse("a") == "a^"
    assert F2.inverse("b^") == "b"
    assert F2.is_symmetric


def test_parse_alphabet_line():
    A = Alphabet.parse("alphabet a a^ b b^")
    assert A == F2
    plain = Alphabet.parse("alphabet x y")
    assert not plain.is_symmetric
    with pytest.raises(ValueError):
        plain.inverse("x")


def test_parse_rejects_half_pairs():
    with pytest.raises(ParseError):
        Alphabet.parse("alphabet a a^ b")
    with pytest.raises(ParseError):
        Alphabet.parse("alphabet")


def test_involution_must_be_proper():
    with pytest.raises(ValueError):
        Alphabet(["a"], {"a": "a"})
    with pytest.raises(ValueError):
        Alphabet(["a", "b", "c"], {"a": "b", "b": "c", "c": "a"})
    with pytest.raises(ValueError):
        Alphabet(["a", "a"])


def test_free_reduction_examples():
    assert free_reduce(("a", "b", "b^", "a^"), F2) == ()
    assert free_reduce(("a", "a^", "b"), F2) == ("b",)
    assert free_reduce(("b", "a", "a^", "b^", "a"), F2) == ("a",)


def test_word_parsing_and_format():
    assert F2.word("a b a^") == ("a", "b", "a^")
    assert F2.word("eps") == ()
    assert format_word(()) == "eps"
    with pytest.raises(ParseError):
        F2.word("a c")


def test_word_counts():
    # 1 + 4 + 16 + 64 words; reduced: 1 + 4 + 12 + 36
    assert F2.count_words(3) == 85
    assert len(list(F2.words(3))) == 85
    assert len(list(F2.reduced_words(3))) == 1 + 4 + 12 + 36
    assert all(is_reduced(w, F2) for w in F2.reduced_words(4))


def test_words_shortlex_order():
    A = Alphabet(["x", "y"])
    assert list(A.words(2)) == [(), ("x",), ("y",), ("x", "x"), ("x", "y"), ("y", "x"), ("y", "y")]


def test_restrict_keeps_closed_involution():
    A = Alphabet.symmetric("a", "b", "c")
    assert A.restrict(["a", "a^"]).is_symmetric
    assert not A.restrict(["a", "b"]).is_symmetric


@given(words_f2)
def test_free_reduce_matches_stack_oracle(w):
    assert free_reduce(w, F2) == reduce_free(w)


@given(words_f2)
def test_free_reduce_idempotent(w):
    r = free_reduce(w, F2)
    assert free_reduce(r, F2) == r
    assert is_reduced(r, F2)


@given(words_f2)
def test_word_times_inverse_is_trivial(w):
    assert group_multiply(w, invert_word(w, F2), F2) == ()


@given(words_f2, words_f2, words_f2)
def test_multiplication_associative(u, v, w):
    left = group_multiply(group_multiply(u, v, F2), w, F2)
    right = group_multiply(u, group_multiply(v, w, F2), F2)
    assert left == right
