from .vocab import Vocab, build_vocab
from .table import EmbeddingTable, OOV_TOKEN, load_vectors, save_vectors
from .subword import SubwordEmbedder, char_ngrams, load_subword, save_subword
from .skipgram import (
    NoiseSampler,
    SkipgramConfig,
    sgns_loss_and_grads,
    train_skipgram,
    train_subword,
)

__all__ = [
    "EmbeddingTable",
    "NoiseSampler",
    "OOV_TOKEN",
    "SkipgramConfig",
    "SubwordEmbedder",
    "Vocab",
    "build_vocab",
    "char_ngrams",
    "load_subword",
    "load_vectors",
    "save_subword",
    "save_vectors",
    "sgns_loss_and_grads",
    "train_skipgram",
    "train_subword",
]
