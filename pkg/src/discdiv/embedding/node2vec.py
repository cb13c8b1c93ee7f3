"""Biased second-order random walks + skip-gram with negative sampling.

Thin typed layer over the kernels in :mod:`._backend`; all hot loops live
there. Defaults are the original node2vec settings.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from ..errors import EmbeddingError
from ._backend import kernels as _default_kernels


@dataclass(frozen=True)
class WalkParams:
    p: float = 1.0
    q: float = 1.0
    walk_length: int = 80
    walks_per_node: int = 10
    include_self_loops: bool = False
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if not (self.p > 0 and self.q > 0):
            raise EmbeddingError(f"return/in-out biases must be positive (p={self.p}, q={self.q})")
        if self.walk_length < 2:
            raise EmbeddingError(f"walk_length must be >= 2, got {self.walk_length}")
        if self.walks_per_node < 1:
            raise EmbeddingError(f"walks_per_node must be >= 1, got {self.walks_per_node}")
        if self.threads < 1:
            raise EmbeddingError("threads must be >= 1")


@dataclass(frozen=True)
class TrainParams:
    dimensions: int = 64
    window: int = 10
    negative_samples: int = 5
    epochs: int = 5
    initial_learning_rate: float = 0.025
    min_learning_rate_ratio: float = 1e-4
    seed: int = 0
    threads: int = 1  # 1 = deterministic; more = unsynchronised concurrent updates

    def __post_init__(self):
        for name in ("dimensions", "window", "negative_samples", "epochs", "threads"):
            if getattr(self, name) < 1:
                raise EmbeddingError(f"{name} must be >= 1, got {getattr(self, name)}")
        if not self.initial_learning_rate > 0:
            raise EmbeddingError("initial_learning_rate must be positive")


def _seed64(seed: int) -> int:
    return int(seed) & ((1 << 64) - 1)


@dataclass(frozen=True)
class TransitionTables:
    """Alias tables for the first step from each node and every directed step prev -> cur.

    ``node_dist[indptr[v]:indptr[v+1]]`` is the first-order distribution over
    the neighbours of ``v``; for the CSR entry ``e`` (prev -> cur),
    ``edge_dist[edge_ptr[e]:edge_ptr[e+1]]`` is the biased distribution over
    the neighbours of ``cur``.
    """

    nodes: tuple
    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray
    node_dist: np.ndarray
    node_prob: np.ndarray
    node_alias: np.ndarray
    edge_ptr: np.ndarray
    edge_dist: np.ndarray
    edge_prob: np.ndarray
    edge_alias: np.ndarray

    def neighbours(self, node: str) -> list[str]:
        v = self.nodes.index(node)
        return [self.nodes[j] for j in self.indices[self.indptr[v]:self.indptr[v + 1]]]

    def first_step(self, node: str) -> dict[str, float]:
        v = self.nodes.index(node)
        lo, hi = self.indptr[v], self.indptr[v + 1]
        return {self.nodes[j]: float(pr) for j, pr in zip(self.indices[lo:hi], self.node_dist[lo:hi])}

    def distribution(self, prev: str, cur: str) -> dict[str, float]:
        """Next-step probabilities after moving ``prev -> cur``."""
        u, v = self.nodes.index(prev), self.nodes.index(cur)
        row = self.indices[self.indptr[u]:self.indptr[u + 1]]
        hit = np.flatnonzero(row == v)
        if hit.size == 0:
            raise EmbeddingError(f"{prev} -> {cur} is not an edge")
        e = int(self.indptr[u] + hit[0])
        lo, hi = self.edge_ptr[e], self.edge_ptr[e + 1]
        nbrs = self.indices[self.indptr[v]:self.indptr[v + 1]]
        return {self.nodes[j]: float(pr) for j, pr in zip(nbrs, self.edge_dist[lo:hi])}


def precompute_transitions(graph, params: WalkParams = WalkParams(), kernels=None) -> TransitionTables:
    """Build alias tables for every first step and every (prev -> cur) step of ``graph``.

    The unnormalised weight of moving ``cur -> x`` after ``prev -> cur`` is
    ``w(cur, x) / p`` if ``x == prev``, ``w(cur, x)`` if ``x`` neighbours
    ``prev``, and ``w(cur, x) / q`` otherwise. Memory is O(sum of squared degrees).
    """
    kern = kernels or _default_kernels
    if not graph.nodes:
        raise EmbeddingError(f"graph at level {graph.level} has no nodes")
    indptr, indices, weights = graph.csr(include_self_loops=params.include_self_loops)
    deg = np.diff(indptr)
    edge_ptr = np.zeros(len(indices) + 1, dtype=np.int64)
    if len(indices):
        np.cumsum(deg[indices], out=edge_ptr[1:])
    tables = kern.build_transitions(indptr, indices, weights, edge_ptr, float(params.p), float(params.q))
    return TransitionTables(tuple(graph.nodes), indptr, indices, weights, tables[0], tables[1], tables[2],
                            edge_ptr, tables[3], tables[4], tables[5])


@dataclass(frozen=True)
class WalkSet:
    """Walks as node indices: walk ``i`` is ``tokens[offsets[i]:offsets[i+1]]``."""

    nodes: tuple
    tokens: np.ndarray
    offsets: np.ndarray

    def __len__(self) -> int:
        return len(self.offsets) - 1

    def walk(self, i: int) -> list[str]:
        return [self.nodes[t] for t in self.tokens[self.offsets[i]:self.offsets[i + 1]]]

    def __iter__(self) -> Iterator[list[str]]:
        for i in range(len(self)):
            yield self.walk(i)

    @property
    def lengths(self) -> np.ndarray:
        return np.diff(self.offsets)

    @classmethod
    def from_walks(cls, nodes: Sequence[str], walks: Sequence[Sequence[str]]) -> WalkSet:
        index = {n: i for i, n in enumerate(nodes)}
        try:
            tokens = np.array([index[t] for w in walks for t in w], dtype=np.int32)
        except KeyError as exc:
            raise EmbeddingError(f"walk visits unknown node {exc.args[0]!r}") from exc
        offsets = np.zeros(len(walks) + 1, dtype=np.int64)
        np.cumsum([len(w) for w in walks], out=offsets[1:])
        return cls(tuple(nodes), tokens, offsets)


def generate_walks(graph, params: WalkParams = WalkParams(), tables: TransitionTables | None = None,
                   kernels=None) -> WalkSet:
    """``walks_per_node`` rounds of one walk from every node, in node order.

    Walk ``r * n + v`` uses its own random stream derived from ``(seed, r, v)``,
    so output is identical for any thread count. Isolated nodes give
    single-node walks.
    """
    kern = kernels or _default_kernels
    if tables is None:
        tables = precompute_transitions(graph, params, kernels=kern)
    walks, lengths = kern.random_walks(
        tables.indptr, tables.indices, tables.node_prob, tables.node_alias,
        tables.edge_ptr, tables.edge_prob, tables.edge_alias,
        int(params.walk_length), int(params.walks_per_node), _seed64(params.seed), int(params.threads),
    )
    offsets = np.zeros(len(lengths) + 1, dtype=np.int64)
    np.cumsum(lengths, out=offsets[1:])
    mask = np.arange(walks.shape[1])[None, :] < lengths[:, None]
    return WalkSet(tables.nodes, np.ascontiguousarray(walks[mask], dtype=np.int32), offsets)


@dataclass(frozen=True)
class EmbeddingMatrix:
    level: str
    nodes: tuple
    vectors: np.ndarray

    def vector(self, node: str) -> np.ndarray:
        return self.vectors[self.nodes.index(node)]


def negative_table(walks: WalkSet, kernels=None):
    """Alias table over nodes for unigram counts raised to 3/4."""
    kern = kernels or _default_kernels
    counts = np.bincount(walks.tokens, minlength=len(walks.nodes)).astype(np.float64)
    _, prob, alias = kern.build_alias(counts ** 0.75)
    return prob, alias


def train_sgns(walks: WalkSet, params: TrainParams = TrainParams(), level: str = "",
               kernels=None) -> EmbeddingMatrix:
    """Skip-gram with negative sampling; returns the input ("center") vectors.

    Every (center, context) pair within ``window`` positions is a positive
    example, with ``negative_samples`` negatives drawn from the 3/4-power
    unigram distribution. The learning rate falls linearly to
    ``initial_learning_rate * min_learning_rate_ratio`` over all epochs.
    """
    kern = kernels or _default_kernels
    n = len(walks.nodes)
    if n == 0 or len(walks) == 0:
        raise EmbeddingError("empty walk set")
    seen = np.bincount(walks.tokens, minlength=n)
    if (seen == 0).any():
        missing = [walks.nodes[i] for i in np.flatnonzero(seen == 0)]
        raise EmbeddingError(f"node(s) absent from every walk: {', '.join(missing[:5])}")
    neg_prob, neg_alias = negative_table(walks, kern)
    vectors = kern.train_sgns(
        np.ascontiguousarray(walks.tokens, dtype=np.int32), np.ascontiguousarray(walks.offsets, dtype=np.int64),
        n, int(params.dimensions), int(params.window), int(params.negative_samples), int(params.epochs),
        float(params.initial_learning_rate), float(params.min_learning_rate_ratio),
        neg_prob, neg_alias, _seed64(params.seed), int(params.threads),
    )
    if not np.isfinite(vectors).all():
        raise EmbeddingError("training diverged: non-finite vector entries")
    return EmbeddingMatrix(level, walks.nodes, vectors)


@dataclass(frozen=True)
class SimilarityMatrix:
    level: str
    nodes: tuple
    values: np.ndarray

    def index(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.nodes)}

    def restrict(self, topics: Sequence[str]) -> np.ndarray:
        idx = self.index()
        missing = [t for t in topics if t not in idx]
        if missing:
            raise KeyError(", ".join(missing))
        sel = [idx[t] for t in topics]
        return self.values[np.ix_(sel, sel)]

    def __getitem__(self, pair: tuple[str, str]) -> float:
        idx = self.index()
        return float(self.values[idx[pair[0]], idx[pair[1]]])


def cosine_similarity_matrix(embeddings: EmbeddingMatrix, clamp: bool = True) -> SimilarityMatrix:
    """Pairwise cosine similarity; negatives clamped to 0 and the diagonal set to exactly 1.

    With ``clamp=False`` the raw cosines are returned (diagonal still exactly 1).
    """
    v = np.asarray(embeddings.vectors, dtype=np.float64)
    norms = np.linalg.norm(v, axis=1)
    zero = np.flatnonzero(norms == 0)
    if zero.size:
        raise EmbeddingError(f"zero embedding vector for node {embeddings.nodes[zero[0]]!r}")
    u = v / norms[:, None]
    s = u @ u.T
    upper = np.triu(s, 1)
    s = upper + upper.T
    if clamp:
        np.clip(s, 0.0, 1.0, out=s)
    else:
        np.clip(s, -1.0, 1.0, out=s)
    np.fill_diagonal(s, 1.0)
    return SimilarityMatrix(embeddings.level, tuple(embeddings.nodes), s)


def embed_graph(graph, walk_params: WalkParams = WalkParams(), train_params: TrainParams = TrainParams(),
                kernels=None):
    """Walks, embeddings and clamped similarity for one graph."""
    walks = generate_walks(graph, walk_params, kernels=kernels)
    emb = train_sgns(walks, train_params, level=graph.level, kernels=kernels)
    return walks, emb, cosine_similarity_matrix(emb)
