"""Skip-gram with negative sampling, over walk corpora or token corpora.

One trainer serves both embedding stages: node neighborhoods are walks
treated as sentences (window = whole walk), word contexts use a fixed
radius. Negative samples follow the unigram distribution raised to
``noise_power``. Training is single-threaded and deterministic per seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ..errors import ValidationError
from .subword import SubwordEmbedder
from .table import EmbeddingTable
from .vocab import Vocab


def _sigmoid(x):
    return 0.5 * (np.tanh(0.5 * x) + 1.0)


def _log_sigmoid(x):
    return -np.logaddexp(0.0, -x)


@dataclass(frozen=True)
class SkipgramConfig:
    dim: int = 128
    window: int | None = 5          # context radius; None = whole sequence
    negatives: int = 5
    epochs: int = 5
    lr_initial: float = 0.025
    lr_min: float = 1e-4
    seed: int = 0
    train_oov: bool = False         # fold sub-threshold tokens into the OOV row
    noise_power: float = 0.75
    probe_pairs: int = 1000         # frozen pairs used for per-epoch loss
    # subword-only settings
    ngram_min: int = 3
    ngram_max: int = 6
    bucket_count: int = 200_000

    def validate(self) -> None:
        if self.dim < 1:
            raise ValidationError(f"dim must be >= 1, got {self.dim}")
        if self.negatives < 1:
            raise ValidationError(f"negatives must be >= 1, got {self.negatives}")
        if self.epochs < 0:
            raise ValidationError(f"epochs must be >= 0, got {self.epochs}")
        if self.window is not None and self.window < 1:
            raise ValidationError(f"window must be >= 1 or None, got {self.window}")


@dataclass
class SkipgramResult:
    table: EmbeddingTable
    epoch_losses: list[float] = field(default_factory=list)


@dataclass
class SubwordResult:
    embedder: SubwordEmbedder
    epoch_losses: list[float] = field(default_factory=list)


class NoiseSampler:
    """Draws token ids proportional to count ** power."""

    def __init__(self, counts: Sequence[int], power: float = 0.75):
        weights = np.asarray(counts, dtype=np.float64) ** power
        total = weights.sum()
        if total <= 0:
            raise ValidationError("noise distribution has zero total weight")
        self._cum = np.cumsum(weights / total)
        self._cum[-1] = 1.0

    def draw(self, rng: np.random.Generator, k: int) -> np.ndarray:
        return np.searchsorted(self._cum, rng.random(k), side="right")


def sgns_loss_and_grads(center: np.ndarray, context: np.ndarray,
                        negatives: np.ndarray):
    """Loss and gradients for one (center, context) pair with sampled noise.

    loss = -log sigmoid(ctx . v) - sum_neg log sigmoid(-neg . v).
    Returns (loss, g_center, g_context, g_negatives), all gradients of
    the loss (descent direction).
    """
    negatives = np.atleast_2d(np.asarray(negatives, dtype=np.float64))
    targets = np.vstack([np.asarray(context, dtype=np.float64)[None, :], negatives])
    scores = targets @ np.asarray(center, dtype=np.float64)
    err = _sigmoid(scores)
    err[0] -= 1.0
    g_center = err @ targets
    g_targets = np.outer(err, center)
    loss = -_log_sigmoid(scores[0]) - float(np.sum(_log_sigmoid(-scores[1:])))
    return float(loss), g_center, g_targets[0], g_targets[1:]


def _encode_corpus(corpus, vocab: Vocab, oov_id: int | None):
    encoded = []
    dropped = 0
    for sentence in corpus:
        ids = []
        for token in sentence:
            j = vocab.index.get(token)
            if j is None:
                dropped += 1
                if oov_id is not None:
                    ids.append(oov_id)
            else:
                ids.append(j)
        if ids:
            encoded.append(np.array(ids, dtype=np.int64))
    return encoded, dropped


def _sentence_pairs(ids: np.ndarray, window: int | None):
    """(center, context) index pairs for one sentence, in stream order."""
    length = len(ids)
    centers, contexts = [], []
    for i in range(length):
        if window is None:
            lo, hi = 0, length
        else:
            lo, hi = max(0, i - window), min(length, i + window + 1)
        for j in range(lo, hi):
            if j != i:
                centers.append(ids[i])
                contexts.append(ids[j])
    return centers, contexts


def _build_probe(encoded, window, sampler, negatives, rng, limit):
    probe = []
    for ids in encoded:
        centers, contexts = _sentence_pairs(ids, window)
        for c, o in zip(centers, contexts):
            negs = sampler.draw(rng, negatives)
            negs = negs[negs != o]
            probe.append((int(c), int(o), negs))
            if len(probe) >= limit:
                return probe
    return probe


def _probe_loss(probe, center_vec, W_out) -> float:
    total = 0.0
    for c, o, negs in probe:
        v = center_vec(c)
        s_pos = float(W_out[o] @ v)
        total += -_log_sigmoid(s_pos)
        if len(negs):
            total += -float(np.sum(_log_sigmoid(-(W_out[negs] @ v))))
    return float(total / max(1, len(probe)))


def _learning_rate(config: SkipgramConfig, processed: int, total: int) -> float:
    if total <= 0:
        return config.lr_initial
    frac = processed / total
    return max(config.lr_min, config.lr_initial * (1.0 - frac))


def train_skipgram(corpus: Iterable[Sequence[str]], vocab: Vocab,
                   config: SkipgramConfig) -> SkipgramResult:
    """Train whole-token embeddings; input vectors are the embeddings.

    With ``train_oov`` set, tokens dropped by the vocabulary threshold
    are replaced by an OOV sentinel that trains like any other token and
    ends up as the table's OOV vector.
    """
    config.validate()
    corpus = [list(s) for s in corpus]
    oov_id = len(vocab) if config.train_oov else None
    encoded, dropped = _encode_corpus(corpus, vocab, oov_id)

    counts = list(vocab.counts)
    rows = len(vocab)
    if config.train_oov:
        counts.append(dropped)
        rows += 1

    rng = np.random.default_rng(config.seed)
    w_in = (rng.random((rows, config.dim)) - 0.5) / config.dim
    w_out = np.zeros((rows, config.dim))
    sampler = NoiseSampler(counts, config.noise_power)

    losses = _train_loop(encoded, w_in, w_out, sampler, config, rng,
                         center_vec=lambda c: w_in[c],
                         apply_center=lambda c, g, lr: _sub_row(w_in, c, lr * g))

    oov_vec = w_in[oov_id].copy() if oov_id is not None else None
    table = EmbeddingTable(vocab.entries, w_in[:len(vocab)].copy(), oov_vector=oov_vec)
    return SkipgramResult(table, losses)


def train_subword(corpus: Iterable[Sequence[str]], vocab: Vocab,
                  config: SkipgramConfig) -> SubwordResult:
    """Train a subword embedder: a center token is represented by the
    mean of its n-gram bucket vectors and its whole-word vector, and the
    gradient is shared equally among those components."""
    config.validate()
    corpus = [list(s) for s in corpus]
    encoded, _ = _encode_corpus(corpus, vocab, oov_id=None)

    rng = np.random.default_rng(config.seed)
    w_word = (rng.random((len(vocab), config.dim)) - 0.5) / config.dim
    buckets = (rng.random((config.bucket_count, config.dim)) - 0.5) / config.dim
    w_out = np.zeros((len(vocab), config.dim))
    sampler = NoiseSampler(vocab.counts, config.noise_power)

    probe_emb = SubwordEmbedder(buckets, config.ngram_min, config.ngram_max)
    gram_ids = [probe_emb.buckets_for(t) for t in vocab.entries]

    def center_vec(c: int) -> np.ndarray:
        grams = gram_ids[c]
        return (w_word[c] + buckets[grams].sum(axis=0)) / (1 + len(grams))

    def apply_center(c: int, g: np.ndarray, lr: float) -> None:
        grams = gram_ids[c]
        share = lr * g / (1 + len(grams))
        w_word[c] -= share
        np.subtract.at(buckets, grams, share)

    losses = _train_loop(encoded, None, w_out, sampler, config, rng,
                         center_vec=center_vec, apply_center=apply_center)

    word_table = EmbeddingTable(vocab.entries, w_word)
    embedder = SubwordEmbedder(buckets, config.ngram_min, config.ngram_max,
                               word_table=word_table)
    return SubwordResult(embedder, losses)


def _sub_row(matrix: np.ndarray, row: int, delta: np.ndarray) -> None:
    matrix[row] -= delta


def _train_loop(encoded, w_in, w_out, sampler, config, rng, center_vec,
                apply_center) -> list[float]:
    probe = []
    if config.probe_pairs > 0:
        probe = _build_probe(encoded, config.window, sampler, config.negatives,
                             np.random.default_rng(config.seed + 1),
                             config.probe_pairs)
    losses = [_probe_loss(probe, center_vec, w_out)] if probe else []

    pairs = [_sentence_pairs(ids, config.window) for ids in encoded]
    total = sum(len(p[0]) for p in pairs) * config.epochs
    k = config.negatives
    processed = 0

    for _ in range(config.epochs):
        for centers, contexts in pairs:
            n_pairs = len(centers)
            if n_pairs == 0:
                continue
            lr = _learning_rate(config, processed, total)
            negs_block = sampler.draw(rng, n_pairs * k).reshape(n_pairs, k)
            for idx in range(n_pairs):
                c, o = centers[idx], contexts[idx]
                targets = [o]
                for t in negs_block[idx]:
                    if t != o:
                        targets.append(t)
                v = center_vec(c)
                t_vecs = w_out[targets]
                err = _sigmoid(t_vecs @ v)
                err[0] -= 1.0
                lr_err = lr * err
                g_center = err @ t_vecs
                for i, t in enumerate(targets):
                    w_out[t] -= lr_err[i] * v
                apply_center(c, g_center, lr)
            processed += n_pairs
        if probe:
            losses.append(_probe_loss(probe, center_vec, w_out))
    return losses
