from itertools import product

import pytest
from hypothesis import given, strategies as st

from recurlab.ambient import F2, N0, WORD_CAP, Z, Z2, get_ambient, reduce_word
from recurlab.errors import ParseError, UnsupportedOperation, WordCapError


def reduced_words(max_len):
    """Every reduced word of length <= max_len, by filtering all strings."""
    out = set()
    for n in range(max_len + 1):
        for letters in product("aAbB", repeat=n):
            w = "".join(letters)
            if not any(w[i:i + 2] in ("aA", "Aa", "bB", "Bb") for i in range(len(w) - 1)):
                out.add(w)
    return out


def test_enumeration_conventions():
    assert [Z.enumerate(i) for i in range(5)] == [0, 1, -1, 2, -2]
    assert all(N0.enumerate(k) == k for k in range(50))
    assert [F2.enumerate(i) for i in range(5)] == ["", "a", "A", "b", "B"]
    assert Z2.enumerate(0) == (0, 0)


@pytest.mark.parametrize("ambient,level", [(N0, 40), (Z, 40), (Z2, 6), (F2, 4)])
def test_index_inverts_enumerate(ambient, level):
    for i in range(ambient.ball_size(level)):
        assert ambient.index(ambient.enumerate(i)) == i


def test_ball_sizes_against_brute_force():
    for n in range(5):
        assert set(F2.ball(n)) == reduced_words(n)
        assert F2.ball_size(n) == len(reduced_words(n))
    assert F2.ball_size(1) == 5 and F2.ball_size(2) == 17
    assert sorted(Z2.ball(1)) == sorted((x, y) for x in (-1, 0, 1) for y in (-1, 0, 1))
    assert list(N0.ball(3)) == [0, 1, 2, 3]
    assert sorted(Z.ball(2)) == [-2, -1, 0, 1, 2]


def test_ball_is_enumeration_prefix():
    for a, n in [(Z, 7), (Z2, 3), (F2, 3)]:
        assert list(a.ball(n)) == [a.enumerate(i) for i in range(a.ball_size(n))]


def test_multiplication_examples():
    assert F2.mul("ab", "Ba") == "aa"
    assert F2.mul("a", "A") == ""
    assert Z.mul(3, -5) == -2
    assert Z2.mul((1, 2), (3, -4)) == (4, -2)


def test_n0_has_no_inverses():
    with pytest.raises(UnsupportedOperation):
        N0.inv(3)


def test_word_cap():
    with pytest.raises(WordCapError):
        F2.mul("a" * WORD_CAP, "a")
    with pytest.raises(WordCapError):
        F2.parse("b" * (WORD_CAP + 1))


def test_parse_and_format():
    assert F2.parse("abBa") == "aa"
    assert F2.format("") == "e"
    assert Z2.parse("(2,-1)") == (2, -1)
    with pytest.raises(ParseError):
        N0.parse("-1")
    with pytest.raises(ParseError):
        F2.parse("abc")
    assert get_ambient("F2") is F2


words = st.text(alphabet="aAbB", max_size=8).map(reduce_word)


@given(words, words, words)
def test_free_group_axioms(x, y, z):
    assert F2.mul(F2.mul(x, y), z) == F2.mul(x, F2.mul(y, z))
    assert F2.mul(x, F2.inv(x)) == ""
    assert F2.mul("", x) == x == F2.mul(x, "")


@given(st.integers(-50, 50), st.integers(-50, 50))
def test_z2_group_axioms(x, y):
    g, h = (x, y), (y, -x)
    assert Z2.mul(g, Z2.inv(g)) == (0, 0)
    assert Z2.mul(g, h) == Z2.mul(h, g)


@given(words)
def test_norm_matches_word_length(w):
    assert F2.norm(w) == len(w)
    assert F2.in_ball(w, len(w))
