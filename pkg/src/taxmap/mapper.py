"""Phrase encoding, mapper training, and exact nearest-concept retrieval.

The tokenizer lowercases, splits on whitespace and breaks punctuation
into standalone tokens. Encoded phrases are fixed-size matrices: the
first ``max_len`` token vectors row-wise, zero-padded at the tail.
Retrieval is exact (full scoring, no approximation) with ties broken by
ascending concept id.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .embed.table import EmbeddingTable
from .errors import (
    DegenerateQueryError,
    EmptyPhraseError,
    NumericError,
    ParseError,
    ValidationError,
)
from .nn import AdamState, MappingModel, adam_step

_TOKEN_RE = re.compile(r"\w+|[^\w\s]")

MappingResult = list[tuple[str, float]]

METRICS = ("cosine", "l2")


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


class PhraseEncoder:
    """Turns a raw phrase into a (max_len, dim) matrix of word vectors.

    ``word_source`` is anything with ``dim`` and ``lookup(token)`` — a
    whole-token table with an OOV vector, or a subword embedder.
    """

    def __init__(self, word_source, max_len: int = 20):
        self.word_source = word_source
        self.max_len = max_len

    @property
    def dim(self) -> int:
        return self.word_source.dim

    def encode(self, phrase: str) -> np.ndarray:
        tokens = tokenize(phrase)
        if not tokens:
            raise EmptyPhraseError(f"no tokens in phrase {phrase!r}")
        out = np.zeros((self.max_len, self.dim))
        for i, token in enumerate(tokens[:self.max_len]):
            out[i] = self.word_source.lookup(token)
        return out

    def encode_batch(self, phrases: Sequence[str]) -> np.ndarray:
        out = np.zeros((len(phrases), self.max_len, self.dim))
        for i, phrase in enumerate(phrases):
            out[i] = self.encode(phrase)
        return out


class NeighborIndex:
    """Exact nearest-neighbor search over node embeddings.

    Rows are ordered by ascending concept id, which doubles as the tie
    rule; norms are cached at build time. Immutable once built.
    """

    def __init__(self, concept_ids: Sequence[str], matrix: np.ndarray, metric: str):
        if metric not in METRICS:
            raise ValidationError(f"metric must be one of {METRICS}, got {metric!r}")
        if len(concept_ids) == 0:
            raise ValidationError("cannot build an index over zero concepts")
        order = np.argsort(np.asarray(concept_ids, dtype=object))
        self.ids = tuple(concept_ids[i] for i in order)
        self.matrix = np.asarray(matrix, dtype=np.float64)[order]
        self.metric = metric
        self.norms = np.linalg.norm(self.matrix, axis=1)

    def __len__(self) -> int:
        return len(self.ids)

    def query_topk(self, point: np.ndarray, k: int) -> MappingResult:
        if k < 1:
            raise ValidationError(f"k must be >= 1, got {k}")
        point = np.asarray(point, dtype=np.float64)
        if point.shape != (self.matrix.shape[1],):
            raise ValidationError(
                f"query has shape {point.shape}, index dim is {self.matrix.shape[1]}")
        if not np.all(np.isfinite(point)):
            raise NumericError("query point contains non-finite values")

        if self.metric == "cosine":
            q_norm = np.linalg.norm(point)
            if q_norm == 0.0:
                raise DegenerateQueryError("zero-norm query under cosine similarity")
            denom = self.norms * q_norm
            scores = np.divide(self.matrix @ point, denom,
                               out=np.zeros(len(self.ids)), where=denom > 0.0)
            order = np.lexsort((np.arange(len(self.ids)), -scores))
        else:
            scores = np.linalg.norm(self.matrix - point, axis=1)
            order = np.lexsort((np.arange(len(self.ids)), scores))

        top = order[:min(k, len(self.ids))]
        return [(self.ids[i], float(scores[i])) for i in top]


def build_index(node_table: EmbeddingTable, subset: Iterable[str] | None = None,
                metric: str = "cosine") -> NeighborIndex:
    """Index over all concepts in the table, or a validated subset."""
    if subset is None:
        ids = list(node_table.tokens)
    else:
        ids = sorted(set(subset))
        unknown = [c for c in ids if c not in node_table]
        if unknown:
            raise ValidationError(
                f"subset contains {len(unknown)} unknown concept(s), "
                f"first: {unknown[0]!r}")
        if not ids:
            raise ValidationError("subset is empty")
    matrix = np.stack([node_table.vector(c) for c in ids])
    return NeighborIndex(ids, matrix, metric)


@dataclass(frozen=True)
class MapperConfig:
    epochs: int = 50
    batch: int = 64
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    seed: int = 0


@dataclass
class MapperResult:
    model: MappingModel
    epoch_losses: list[float] = field(default_factory=list)


def validate_pairs(pairs: Sequence[tuple[str, str]], node_table: EmbeddingTable) -> None:
    if not pairs:
        raise ValidationError("no training pairs")
    for phrase, concept in pairs:
        if concept not in node_table:
            raise ValidationError(
                f"pair {phrase!r} references concept {concept!r} "
                "with no node vector")


def train_mapper(pairs: Sequence[tuple[str, str]], node_table: EmbeddingTable,
                 encoder: PhraseEncoder, model: MappingModel,
                 config: MapperConfig = MapperConfig()) -> MapperResult:
    """Regress encoded phrases onto their concepts' node vectors.

    Minimizes the mean squared L2 distance with Adam; returns the model
    plus per-epoch mean loss. pairs are (phrase, concept_id).
    """
    validate_pairs(pairs, node_table)
    phrases = encoder.encode_batch([p for p, _ in pairs])
    targets = np.stack([node_table.vector(c) for _, c in pairs])

    state = AdamState(model.params, lr=config.learning_rate,
                      beta1=config.beta1, beta2=config.beta2, eps=config.eps)
    rng = np.random.default_rng(config.seed)
    n = len(pairs)
    losses: list[float] = []
    for _ in range(config.epochs):
        perm = rng.permutation(n)
        total = 0.0
        for start in range(0, n, config.batch):
            take = perm[start:start + config.batch]
            out = model.forward_batch(phrases[take])
            diff = out - targets[take]
            total += float(np.sum(diff * diff))
            model.backward_batch(2.0 * diff / len(take))
            adam_step(state, model.params, model.grads)
        losses.append(total / n)
    return MapperResult(model, losses)


def map_phrase(encoder: PhraseEncoder, model: MappingModel, index: NeighborIndex,
               phrase: str, k: int) -> MappingResult:
    return index.query_topk(model.forward(encoder.encode(phrase)), k)


def map_phrases(encoder: PhraseEncoder, model: MappingModel, index: NeighborIndex,
                phrases: Sequence[str], k: int) -> list[MappingResult]:
    """Batch mapping; results align with input order."""
    if not phrases:
        return []
    points = model.forward_batch(encoder.encode_batch(phrases))
    return [index.query_topk(point, k) for point in points]
