"""Taxonomy graph: ingestion, shortest paths, and random walks.

The graph is a set of concept ids plus typed relations. Walks and
distances use the undirected view; relation labels are kept on the edge
list but do not influence traversal.

Edge file format (UTF-8, one edge per line)::

    source \\t relation \\t target

Lines starting with ``#`` and blank lines are skipped. Duplicate triples
are collapsed, self-loops are dropped and counted.
"""

from __future__ import annotations

import logging
from collections import deque
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ParseError, UnknownConceptError, ValidationError

log = logging.getLogger(__name__)

Edge = tuple[str, str, str]


class TaxonomyGraph:
    """Immutable undirected view over a set of typed concept relations."""

    def __init__(self, edges: Iterable[Edge], extra_nodes: Iterable[str] = (),
                 self_loop_count: int = 0):
        seen: set[Edge] = set()
        kept: list[Edge] = []
        for e in edges:
            if e not in seen:
                seen.add(e)
                kept.append(e)
        self.edges: tuple[Edge, ...] = tuple(kept)
        self.self_loop_count = self_loop_count

        node_set: set[str] = set(extra_nodes)
        for src, _, dst in self.edges:
            node_set.add(src)
            node_set.add(dst)
        self.ids: tuple[str, ...] = tuple(sorted(node_set))
        self._index: dict[str, int] = {c: i for i, c in enumerate(self.ids)}

        nbrs: list[set[int]] = [set() for _ in self.ids]
        for src, _, dst in self.edges:
            a, b = self._index[src], self._index[dst]
            nbrs[a].add(b)
            nbrs[b].add(a)
        self._adjacency = [np.array(sorted(s), dtype=np.int64) for s in nbrs]
        self._neighbor_sets = [frozenset(s) for s in nbrs]

    def __len__(self) -> int:
        return len(self.ids)

    def __contains__(self, concept: str) -> bool:
        return concept in self._index

    def index_of(self, concept: str) -> int:
        try:
            return self._index[concept]
        except KeyError:
            raise UnknownConceptError(f"unknown concept id: {concept!r}") from None

    def neighbors(self, concept: str) -> tuple[str, ...]:
        return tuple(self.ids[j] for j in self._adjacency[self.index_of(concept)])

    def degree(self, concept: str) -> int:
        return len(self._adjacency[self.index_of(concept)])

    def distance(self, a: str, b: str) -> int | None:
        """Shortest-path length between two concepts, or None if unreachable."""
        sa, sb = self.index_of(a), self.index_of(b)
        if sa == sb:
            return 0
        seen = {sa: 0}
        queue = deque([sa])
        while queue:
            cur = queue.popleft()
            nxt_dist = seen[cur] + 1
            for nb in self._adjacency[cur]:
                nb = int(nb)
                if nb == sb:
                    return nxt_dist
                if nb not in seen:
                    seen[nb] = nxt_dist
                    queue.append(nb)
        return None

    def distances_from(self, sources: Iterable[str]) -> np.ndarray:
        """Multi-source BFS. Returns per-node hop counts aligned with
        ``self.ids``; unreachable nodes get -1."""
        dist = np.full(len(self.ids), -1, dtype=np.int64)
        queue: deque[int] = deque()
        for c in sources:
            i = self.index_of(c)
            if dist[i] != 0:
                dist[i] = 0
                queue.append(i)
        while queue:
            cur = queue.popleft()
            d = dist[cur] + 1
            for nb in self._adjacency[cur]:
                if dist[nb] < 0:
                    dist[nb] = d
                    queue.append(int(nb))
        return dist


def load_taxonomy(path) -> TaxonomyGraph:
    """Parse an edge file into a validated TaxonomyGraph."""
    edges: list[Edge] = []
    nodes: list[str] = []
    self_loops = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise ParseError(
                    f"expected 3 tab-separated fields, got {len(fields)}",
                    path=path, line=lineno)
            src, rel, dst = fields
            if not src or not dst:
                raise ParseError("empty concept id", path=path, line=lineno)
            if src == dst:
                self_loops += 1
                nodes.append(src)
                continue
            edges.append((src, rel, dst))
    if self_loops:
        log.warning("%s: dropped %d self-loop edge(s)", path, self_loops)
    return TaxonomyGraph(edges, extra_nodes=nodes, self_loop_count=self_loops)


def random_walk(graph: TaxonomyGraph, start: str, walk_length: int,
                p: float = 1.0, q: float = 1.0,
                rng: np.random.Generator | None = None) -> list[str]:
    """Second-order biased random walk (return parameter p, in-out q).

    With p = q = 1 every step is a uniform neighbor choice. The result
    has ``walk_length`` steps after the start node, except for isolated
    start nodes which yield a single-element walk.
    """
    if walk_length < 1:
        raise ValidationError(f"walk_length must be >= 1, got {walk_length}")
    if p <= 0 or q <= 0:
        raise ValidationError(f"bias parameters must be positive, got p={p} q={q}")
    if rng is None:
        rng = np.random.default_rng()

    cur = graph.index_of(start)
    path = [cur]
    nbrs = graph._adjacency[cur]
    if len(nbrs) == 0:
        return [start]
    uniform = p == 1.0 and q == 1.0

    path.append(int(nbrs[rng.integers(len(nbrs))]))
    for _ in range(walk_length - 1):
        cur = path[-1]
        prev = path[-2]
        nbrs = graph._adjacency[cur]
        if uniform:
            nxt = int(nbrs[rng.integers(len(nbrs))])
        else:
            prev_nbrs = graph._neighbor_sets[prev]
            w = np.empty(len(nbrs), dtype=np.float64)
            for i, x in enumerate(nbrs):
                x = int(x)
                if x == prev:
                    w[i] = 1.0 / p
                elif x in prev_nbrs:
                    w[i] = 1.0
                else:
                    w[i] = 1.0 / q
            w /= w.sum()
            nxt = int(nbrs[rng.choice(len(nbrs), p=w)])
        path.append(nxt)
    return [graph.ids[i] for i in path]


def walk_corpus(graph: TaxonomyGraph, walks_per_node: int = 10,
                walk_length: int = 20, p: float = 1.0, q: float = 1.0,
                seed: int = 0) -> Iterator[list[str]]:
    """Yield ``walks_per_node`` walks from every node, deterministic per seed.

    Node order is reshuffled each round so consecutive walks decorrelate.
    """
    if walks_per_node < 1:
        raise ValidationError(f"walks_per_node must be >= 1, got {walks_per_node}")
    rng = np.random.default_rng(seed)
    order = np.arange(len(graph))
    for _ in range(walks_per_node):
        rng.shuffle(order)
        for idx in order:
            yield random_walk(graph, graph.ids[idx], walk_length, p=p, q=q, rng=rng)
