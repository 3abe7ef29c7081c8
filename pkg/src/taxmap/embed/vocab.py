"""Token vocabulary with a minimum-occurrence threshold."""

from __future__ import annotations

from collections import Counter
from typing import Iterable, Sequence

from ..errors import EmptyVocabError, ValidationError


class Vocab:
    """Ordered token list (descending count, then lexicographic)."""

    def __init__(self, tokens: Sequence[str], counts: Sequence[int], min_count: int):
        if len(tokens) != len(counts):
            raise ValidationError("tokens and counts length mismatch")
        self.entries = tuple(tokens)
        self.counts = tuple(int(c) for c in counts)
        self.min_count = min_count
        self.index = {t: i for i, t in enumerate(self.entries)}
        if len(self.index) != len(self.entries):
            raise ValidationError("duplicate tokens in vocabulary")

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, token: str) -> bool:
        return token in self.index


def build_vocab(corpus: Iterable[Sequence[str]], min_count: int = 1) -> Vocab:
    """Count tokens over a stream of token sequences and keep those with
    count >= min_count."""
    if min_count < 1:
        raise ValidationError(f"min_count must be >= 1, got {min_count}")
    counter: Counter[str] = Counter()
    for sentence in corpus:
        counter.update(sentence)
    kept = [(t, c) for t, c in counter.items() if c >= min_count]
    if not kept:
        raise EmptyVocabError(
            f"no token occurs at least {min_count} time(s) in the corpus")
    kept.sort(key=lambda tc: (-tc[1], tc[0]))
    return Vocab([t for t, _ in kept], [c for _, c in kept], min_count)
