import pytest

from taxmap.embed import build_vocab
from taxmap.errors import EmptyVocabError, ValidationError


def test_counting_with_threshold():
    vocab = build_vocab([["a", "b", "a"], ["b", "c"]], min_count=2)
    assert set(vocab.entries) == {"a", "b"}
    assert vocab.counts == (2, 2)


def test_threshold_can_empty_vocab():
    with pytest.raises(EmptyVocabError):
        build_vocab([["a"]], min_count=2)


def test_min_count_one():
    vocab = build_vocab([["x", "y"]], min_count=1)
    assert len(vocab) == 2


def test_order_descending_count_then_lexicographic():
    vocab = build_vocab([["b", "b", "c", "a", "a", "d"]], min_count=1)
    assert vocab.entries == ("a", "b", "c", "d")
    assert vocab.counts == (2, 2, 1, 1)


def test_index_bijection():
    vocab = build_vocab([["p", "q", "r", "q"]], min_count=1)
    for i, token in enumerate(vocab.entries):
        assert vocab.index[token] == i
    assert len(vocab.index) == len(vocab.entries)


def test_min_count_validated():
    with pytest.raises(ValidationError):
        build_vocab([["a"]], min_count=0)


def test_empty_corpus():
    with pytest.raises(EmptyVocabError):
        build_vocab([], min_count=1)
