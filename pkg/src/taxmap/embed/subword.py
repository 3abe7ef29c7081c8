"""Character n-gram embeddings with a hashed bucket table.

A token is padded with boundary markers ("cold" -> "<cold>") and split
into all character n-grams of the configured sizes. Each n-gram hashes
into one of ``bucket_count`` vectors (FNV-1a, 64-bit, modulo buckets).
The token vector is the mean of its bucket vectors plus the whole-word
vector when the token is in vocabulary, which makes lookups total: any
non-empty string yields a finite vector.
"""

from __future__ import annotations

import numpy as np

from ..errors import ValidationError
from ..serialize import decode_array, encode_array, read_container, write_container
from .table import EmbeddingTable

BOUNDARY_START = "<"
BOUNDARY_END = ">"

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_FNV_MASK = 0xFFFFFFFFFFFFFFFF

SUBWORD_KIND = "subword-embedder"
SUBWORD_VERSION = 1


def fnv1a_64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) & _FNV_MASK
    return h


def char_ngrams(token: str, ngram_min: int, ngram_max: int) -> list[str]:
    """All n-grams of the boundary-padded token, sizes ngram_min..ngram_max."""
    padded = BOUNDARY_START + token + BOUNDARY_END
    grams = []
    for n in range(ngram_min, ngram_max + 1):
        for i in range(len(padded) - n + 1):
            grams.append(padded[i:i + n])
    return grams


class SubwordEmbedder:
    def __init__(self, bucket_vectors: np.ndarray, ngram_min: int = 3,
                 ngram_max: int = 6, word_table: EmbeddingTable | None = None):
        if not (1 <= ngram_min <= ngram_max):
            raise ValidationError(
                f"need 1 <= ngram_min <= ngram_max, got {ngram_min}..{ngram_max}")
        bucket_vectors = np.asarray(bucket_vectors, dtype=np.float64)
        if bucket_vectors.ndim != 2 or bucket_vectors.shape[0] < 1:
            raise ValidationError("bucket_vectors must be a non-empty 2-D array")
        if word_table is not None and word_table.dim != bucket_vectors.shape[1]:
            raise ValidationError(
                f"word table dim {word_table.dim} != bucket dim {bucket_vectors.shape[1]}")
        self.bucket_vectors = bucket_vectors
        self.ngram_min = ngram_min
        self.ngram_max = ngram_max
        self.word_table = word_table

    @property
    def dim(self) -> int:
        return self.bucket_vectors.shape[1]

    @property
    def bucket_count(self) -> int:
        return self.bucket_vectors.shape[0]

    def bucket_of(self, ngram: str) -> int:
        return fnv1a_64(ngram.encode("utf-8")) % self.bucket_count

    def buckets_for(self, token: str) -> np.ndarray:
        grams = char_ngrams(token, self.ngram_min, self.ngram_max)
        return np.array([self.bucket_of(g) for g in grams], dtype=np.int64)

    def lookup(self, token: str) -> np.ndarray:
        if not token:
            raise ValidationError("cannot embed an empty token")
        buckets = self.buckets_for(token)
        parts = [self.bucket_vectors[b] for b in buckets]
        if self.word_table is not None and token in self.word_table:
            parts.append(self.word_table.vector(token))
        if not parts:
            return np.zeros(self.dim)
        return np.mean(parts, axis=0)


def save_subword(emb: SubwordEmbedder, path) -> None:
    payload = {
        "ngram_min": emb.ngram_min,
        "ngram_max": emb.ngram_max,
        "buckets": encode_array(emb.bucket_vectors),
    }
    if emb.word_table is not None:
        payload["word_tokens"] = list(emb.word_table.tokens)
        payload["word_matrix"] = encode_array(emb.word_table.matrix)
    write_container(path, SUBWORD_KIND, SUBWORD_VERSION, payload)


def load_subword(path) -> SubwordEmbedder:
    payload = read_container(path, SUBWORD_KIND, SUBWORD_VERSION)
    word_table = None
    if "word_tokens" in payload:
        word_table = EmbeddingTable(payload["word_tokens"],
                                    decode_array(payload["word_matrix"]))
    return SubwordEmbedder(decode_array(payload["buckets"]),
                           ngram_min=payload["ngram_min"],
                           ngram_max=payload["ngram_max"],
                           word_table=word_table)
