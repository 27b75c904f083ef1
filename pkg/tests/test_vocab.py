import io
import itertools
import string

import pytest
from hypothesis import given, settings, strategies as st

from plaintext_bound.errors import WordlistParseError
from plaintext_bound.vocab import (
    VocabStats,
    Vocabulary,
    affix_profile,
    length_profile,
    load_wordlist,
)


def load(text, strict=True):
    return load_wordlist(io.BytesIO(text.encode("utf-8")), strict=strict)


def test_load_basic():
    voc = load("a\nan\nthe")
    assert voc.N == 3
    stats = VocabStats.from_vocabulary(voc, 16)
    assert stats.W[1:4] == (1, 1, 1)


def test_strict_rejects_apostrophe_with_line_number():
    with pytest.raises(WordlistParseError) as err:
        load("cat\ndon't\ndog\n")
    assert err.value.line_no == 2


def test_lenient_skips_and_counts():
    voc = load("cat\ndon't\ncafé\ndog\n", strict=False)
    assert voc.words == {"cat", "dog"}
    assert voc.skipped == 2


def test_case_fold_dedupes():
    assert load("The\nthe").N == 1


def test_comments_blank_lines_and_crlf():
    voc = load("# header\r\ncat\r\n\r\nDog\r\n")
    assert voc.words == {"cat", "dog"}


def test_empty_list_allowed():
    voc = load("# nothing\n")
    assert voc.N == 0


def test_vocabulary_rejects_non_letters():
    with pytest.raises(ValueError):
        Vocabulary(frozenset({"a-b"}))


def test_length_profile_ratio():
    words = ["".join(t) for t in itertools.islice(itertools.product(string.ascii_lowercase, repeat=3), 240)]
    prof = length_profile(Vocabulary.from_words(words), 16, 2)
    assert prof.mu_i[3] == 2
    assert prof.satisfied


def test_length_profile_empty():
    prof = length_profile(Vocabulary(frozenset()), 16, 2)
    assert prof.mu == 0 and prof.satisfied


def test_length_profile_culprit():
    prof = length_profile(Vocabulary.from_words(string.ascii_lowercase), 16, 2)
    assert prof.mu_i[1] == 26
    assert not prof.satisfied
    assert prof.violations == (1,)


def test_long_words_only_feed_affixes():
    voc = Vocabulary.from_words(["abcdef"])
    stats = VocabStats.from_vocabulary(voc, 4)
    assert stats.W == (0, 0, 0, 0, 0)
    assert stats.P[4] == 1 and stats.S[4] == 1 and stats.X_sub[4] == 3


def test_affix_examples():
    prof = affix_profile(Vocabulary.from_words(["the", "then"]), 16)
    assert prof.P[3] == 1
    assert prof.lambda_prefix[3] == pytest.approx(1 / 120)
    prof = affix_profile(Vocabulary.from_words(["the", "she"]), 16)
    assert prof.S[2] == 1


def test_conjecture_flags_cover_two_to_five():
    prof = affix_profile(Vocabulary.from_words(["the", "then", "she"]), 16)
    assert sorted(prof.conjecture_holds()) == [2, 3, 4, 5]
    assert all(prof.conjecture_holds().values())


def naive_affixes(words, B):
    P = [set() for _ in range(B + 1)]
    S = [set() for _ in range(B + 1)]
    X = [set() for _ in range(B + 1)]
    for w in words:
        for i in range(1, min(len(w), B) + 1):
            P[i].add(w[:i])
            S[i].add(w[len(w) - i :])
            for a in range(len(w) - i + 1):
                X[i].add(w[a : a + i])
    return [len(s) for s in P], [len(s) for s in S], [len(s) for s in X]


words_strategy = st.sets(st.text(alphabet="abcd", min_size=1, max_size=7), max_size=15)


@given(words_strategy, st.integers(1, 8))
def test_affix_profile_matches_naive_oracle(words, B):
    prof = affix_profile(Vocabulary.from_words(words), B)
    P, S, X = naive_affixes(words, B)
    assert list(prof.P) == P
    assert list(prof.S) == S
    assert list(prof.X_sub) == X


@given(words_strategy, st.integers(1, 8))
def test_stats_invariants(words, B):
    voc = Vocabulary.from_words(words)
    stats = VocabStats.from_vocabulary(voc, B)
    assert max(stats.P[1], stats.S[1]) <= stats.X_sub[1] <= 26
    for i in range(1, B + 1):
        total_substrings = sum(max(0, len(w) - i + 1) for w in words)
        for table in (stats.P, stats.S, stats.X_sub):
            assert table[i] <= 26**i
            assert table[i] <= total_substrings
        assert stats.W[i] <= stats.X_sub[i]
        assert stats.W[i] <= stats.N
        assert stats.P[i] >= stats.W[i]
        assert max(stats.P[i], stats.S[i]) <= stats.X_sub[i]


@settings(max_examples=30)
@given(words_strategy, st.integers(1, 8))
def test_serialized_vocabulary_round_trips(words, B):
    voc = Vocabulary.from_words(words)
    again = load(voc.dumps())
    assert again == voc
    assert VocabStats.from_vocabulary(again, B) == VocabStats.from_vocabulary(voc, B)


@given(words_strategy, words_strategy)
def test_affix_counts_monotone_under_growth(a, b):
    small = VocabStats.from_vocabulary(Vocabulary.from_words(a), 6)
    big = VocabStats.from_vocabulary(Vocabulary.from_words(a | b), 6)
    for name in ("P", "S", "X_sub"):
        assert all(x <= y for x, y in zip(getattr(small, name), getattr(big, name)))


def test_stats_json_shape():
    d = VocabStats.from_vocabulary(Vocabulary.from_words(["cat"]), 4).to_dict()
    assert d["N"] == "1"
    assert d["W"] == [0, 0, 1, 0]
    assert len(d["P"]) == len(d["S"]) == len(d["X_sub"]) == 4
