"""Discipline-level citation graphs and per-journal publication profiles."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from .errors import GraphError
from .io import read_table, write_table
from .topics import check_level, topic_sort_key

log = logging.getLogger(__name__)


def _pair(a: str, b: str) -> tuple[str, str]:
    return (a, b) if topic_sort_key(a) <= topic_sort_key(b) else (b, a)


@dataclass(frozen=True)
class DisciplineGraph:
    """Undirected weighted graph; ``edges`` maps an ordered-by-code pair to a citation count.

    Self-pairs ``(a, a)`` hold within-topic citations.
    """

    level: str
    nodes: tuple
    edges: Mapping[tuple, int]
    skipped_citations: int = 0

    @property
    def total_weight(self) -> int:
        return sum(self.edges.values())

    def weighted_degree(self) -> dict[str, int]:
        """Sum of incident weights; a self-loop contributes its weight once."""
        deg = dict.fromkeys(self.nodes, 0)
        for (a, b), w in self.edges.items():
            deg[a] += w
            if a != b:
                deg[b] += w
        return deg

    def csr(self, include_self_loops: bool = False):
        """Adjacency in CSR form: ``(indptr, indices, weights)`` over ``self.nodes`` order.

        Neighbour lists are sorted by node index so downstream sampling is reproducible.
        """
        index = {n: i for i, n in enumerate(self.nodes)}
        adj: list[list[tuple[int, float]]] = [[] for _ in self.nodes]
        for (a, b), w in self.edges.items():
            i, j = index[a], index[b]
            if i == j:
                if include_self_loops:
                    adj[i].append((i, float(w)))
                continue
            adj[i].append((j, float(w)))
            adj[j].append((i, float(w)))
        indptr = np.zeros(len(self.nodes) + 1, dtype=np.int64)
        for i, nbrs in enumerate(adj):
            nbrs.sort()
            indptr[i + 1] = indptr[i] + len(nbrs)
        indices = np.fromiter((j for nbrs in adj for j, _ in nbrs), dtype=np.int32, count=int(indptr[-1]))
        weights = np.fromiter((w for nbrs in adj for _, w in nbrs), dtype=np.float64, count=int(indptr[-1]))
        return indptr, indices, weights

    @classmethod
    def from_edges(cls, level: str, nodes, edges: Mapping[tuple, int]) -> DisciplineGraph:
        node_set = set(nodes)
        merged: Counter = Counter()
        for (a, b), w in edges.items():
            if w <= 0 or int(w) != w:
                raise GraphError(f"edge ({a}, {b}) has non-positive or fractional weight {w}")
            node_set.update((a, b))
            merged[_pair(a, b)] += int(w)
        ordered = tuple(sorted(node_set, key=topic_sort_key))
        return cls(level, ordered, dict(sorted(merged.items(), key=lambda kv: (topic_sort_key(kv[0][0]), topic_sort_key(kv[0][1])))))


def build_discipline_graph(corpus, level: str) -> DisciplineGraph:
    """Aggregate paper citations into topic-pair weights at ``level``.

    Each citation row adds 1 to the unordered pair of its endpoints' topics;
    direction is discarded and same-topic citations become self-loops.
    """
    check_level(level)
    if not corpus.papers:
        raise GraphError(f"no papers at level {level}")
    topic_of = {pid: rec.topic(level) for pid, rec in corpus.papers.items()}
    nodes = set(topic_of.values())
    weights: Counter = Counter()
    skipped = 0
    for edge in corpus.citations:
        a = topic_of.get(edge.citing)
        b = topic_of.get(edge.cited)
        if not a or not b:
            skipped += 1
            continue
        weights[_pair(a, b)] += 1
    if skipped:
        log.warning("%d citation(s) skipped at level %s: endpoint without topic", skipped, level)
    g = DisciplineGraph.from_edges(level, nodes, weights)
    return DisciplineGraph(g.level, g.nodes, g.edges, skipped)


def write_graph(graph: DisciplineGraph, path: str | Path, meta=None) -> Path:
    """Dump the edges file: ``source_topic,target_topic,weight`` (self-loops as source=target)."""
    rows = ((a, b, w) for (a, b), w in graph.edges.items())
    return write_table(path, ("source_topic", "target_topic", "weight"), rows, meta)


def read_graph(path: str | Path, level: str, nodes=()) -> DisciplineGraph:
    """Load an edges dump. Pass ``nodes`` to restore isolated topics the dump cannot carry."""
    header, rows = read_table(path)
    try:
        si, ti, wi = (header.index(c) for c in ("source_topic", "target_topic", "weight"))
    except ValueError as exc:
        raise GraphError(f"{path}: not an edges file (header {header})") from exc
    edges: Counter = Counter()
    for row in rows:
        edges[_pair(row[si], row[ti])] += int(row[wi])
    return DisciplineGraph.from_edges(level, nodes, edges)


@dataclass(frozen=True)
class JournalProfile:
    journal_id: str
    level: str
    counts: Mapping[str, int]
    shares: Mapping[str, float] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @classmethod
    def from_counts(cls, journal_id: str, level: str, counts: Mapping[str, int]) -> JournalProfile:
        counts = {t: int(c) for t, c in sorted(counts.items(), key=lambda kv: topic_sort_key(kv[0])) if c > 0}
        total = sum(counts.values())
        if total == 0:
            raise GraphError(f"journal {journal_id} has no papers at level {level}")
        return cls(journal_id, level, counts, {t: c / total for t, c in counts.items()})


def build_journal_profiles(corpus, level: str) -> dict[str, JournalProfile]:
    """One profile per journal with at least one paper, keyed by journal id."""
    check_level(level)
    out = {}
    for jid in corpus.publishing_journals:
        counts = Counter(p.topic(level) for p in corpus.journal_papers(jid))
        out[jid] = JournalProfile.from_counts(jid, level, counts)
    return out
