"""Deterministic synthetic taxonomy and synonym generator.

Builds a balanced tree (plus optional random cross-links) and, per node,
synonym phrases assembled from the node's own name token, its ancestors'
name tokens, and a small shared pool of filler variants. Nearby concepts
therefore share phrase vocabulary, so lexical similarity correlates with
graph proximity — the structure the mapping pipeline is meant to exploit.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ValidationError

_SYLLABLES = (
    "ba", "be", "bi", "bo", "bu", "da", "de", "di", "do", "du",
    "ka", "ke", "ki", "ko", "ku", "la", "le", "li", "lo", "lu",
    "ma", "me", "mi", "mo", "mu", "na", "ne", "ni", "no", "nu",
    "pa", "pe", "pi", "po", "pu", "ra", "re", "ri", "ro", "ru",
    "sa", "se", "si", "so", "su", "ta", "te", "ti", "to", "tu",
    "va", "ve", "vi", "vo", "vu", "za", "ze", "zi", "zo", "zu",
)


@dataclass(frozen=True)
class SynthConfig:
    nodes: int = 255
    synonyms: int = 3
    branching: int = 2
    cross_links: int = 0
    ancestor_tokens: int = 2     # how many ancestor name tokens per phrase
    variant_pool: int = 40
    seed: int = 0

    def validate(self) -> None:
        if self.nodes < 2:
            raise ValidationError(f"need at least 2 nodes, got {self.nodes}")
        if self.synonyms < 1:
            raise ValidationError(f"need at least 1 synonym, got {self.synonyms}")
        if self.branching < 2:
            raise ValidationError(f"branching must be >= 2, got {self.branching}")
        if self.cross_links < 0:
            raise ValidationError("cross_links must be >= 0")


@dataclass
class SynthData:
    edges: list[tuple[str, str, str]]
    pairs: list[tuple[str, str]]         # (phrase, concept_id)
    corpus: list[str]
    concept_ids: list[str]


def _fresh_token(rng: np.random.Generator, taken: set[str]) -> str:
    while True:
        token = "".join(_SYLLABLES[rng.integers(len(_SYLLABLES))] for _ in range(3))
        if token not in taken:
            taken.add(token)
            return token


def generate(config: SynthConfig) -> SynthData:
    config.validate()
    rng = np.random.default_rng(config.seed)
    n = config.nodes
    width = len(str(n - 1))
    ids = [f"C{i:0{width}d}" for i in range(n)]

    edges = []
    for child in range(1, n):
        parent = (child - 1) // config.branching
        edges.append((ids[child], "is_a", ids[parent]))

    adjacent = {(min(a, b), max(a, b))
                for a, b in (((c - 1) // config.branching, c) for c in range(1, n))}
    added = 0
    while added < config.cross_links:
        a, b = int(rng.integers(n)), int(rng.integers(n))
        key = (min(a, b), max(a, b))
        if a == b or key in adjacent:
            continue
        adjacent.add(key)
        edges.append((ids[key[1]], "related_to", ids[key[0]]))
        added += 1

    taken: set[str] = set()
    name = [_fresh_token(rng, taken) for _ in range(n)]
    variants = [_fresh_token(rng, taken) for _ in range(config.variant_pool)]

    pairs: list[tuple[str, str]] = []
    corpus: list[str] = []
    for node in range(n):
        lineage = []
        cursor = node
        for _ in range(config.ancestor_tokens):
            if cursor == 0:
                break
            cursor = (cursor - 1) // config.branching
            lineage.append(name[cursor])
        for _ in range(config.synonyms):
            tokens = [name[node], *lineage,
                      variants[rng.integers(len(variants))]]
            rng.shuffle(tokens)
            phrase = " ".join(tokens)
            pairs.append((phrase, ids[node]))
            corpus.append(phrase)
    return SynthData(edges=edges, pairs=pairs, corpus=corpus, concept_ids=ids)


def write_files(data: SynthData, out_dir) -> dict[str, Path]:
    """Emit edges.tsv / pairs.tsv / corpus.txt in the documented formats."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "edges": out / "edges.tsv",
        "pairs": out / "pairs.tsv",
        "corpus": out / "corpus.txt",
    }
    with open(paths["edges"], "w", encoding="utf-8") as fh:
        for src, rel, dst in data.edges:
            fh.write(f"{src}\t{rel}\t{dst}\n")
    with open(paths["pairs"], "w", encoding="utf-8") as fh:
        for phrase, concept in data.pairs:
            fh.write(f"{concept}\t{phrase}\n")
    with open(paths["corpus"], "w", encoding="utf-8") as fh:
        for line in data.corpus:
            fh.write(line + "\n")
    return paths
