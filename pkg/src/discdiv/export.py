"""Network, journal-overlay and scatter files for external mapping/plotting tools.

Layout is left to the mapping tool; these files carry nodes, clusters,
weights and coordinates only.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .errors import DiscDivError
from .io import read_table, write_table
from .topics import LEVELS, check_level

log = logging.getLogger(__name__)

NODE_COLUMNS = ("topic_code", "label", "cluster", "weight")
EDGE_COLUMNS = ("source", "target", "weight")


def _macro(code: str) -> str:
    return code.split(".", 1)[0]


def network_rows(graph, labels: Mapping[str, str] | None = None):
    """Node rows (code, label, macro cluster, weighted degree) and cross-topic edge rows."""
    labels = labels or {}
    deg = graph.weighted_degree()
    nodes = [(n, labels.get(n, n), _macro(n), deg[n]) for n in graph.nodes]
    edges = [(a, b, w) for (a, b), w in graph.edges.items() if a != b]
    return nodes, edges


def export_network(graph, nodes_path, edges_path, labels=None, meta=None) -> tuple[Path, Path]:
    """Write a nodes file and an edges file for one discipline graph.

    Node weight is the weighted degree, a self-loop counted once; the edges
    file omits self-loops.
    """
    nodes, edges = network_rows(graph, labels)
    return (write_table(nodes_path, NODE_COLUMNS, nodes, meta),
            write_table(edges_path, EDGE_COLUMNS, edges, meta))


def read_network_edges(path) -> dict[tuple, int]:
    header, rows = read_table(path)
    if tuple(header) != EDGE_COLUMNS:
        raise DiscDivError(f"{path}: unexpected edges header {header}")
    return {(a, b): int(w) for a, b, w in rows}


def read_network_nodes(path) -> list[str]:
    header, rows = read_table(path)
    if tuple(header) != NODE_COLUMNS:
        raise DiscDivError(f"{path}: unexpected nodes header {header}")
    return [r[0] for r in rows]


@dataclass(frozen=True)
class OverlayNode:
    topic: str
    macro_parent: str
    paper_count: int
    normalized_weight: float


def journal_overlay(profile, min_papers: int = 2) -> list[OverlayNode]:
    """Topics with at least ``min_papers`` papers, counts min-max scaled within the journal.

    A single remaining topic (or equal counts) gets weight 1.0.
    """
    kept = {t: c for t, c in profile.counts.items() if c >= min_papers}
    if not kept:
        log.warning("journal %s has no topic with >= %d papers; overlay is empty", profile.journal_id, min_papers)
        return []
    lo, hi = min(kept.values()), max(kept.values())
    span = hi - lo
    return [
        OverlayNode(t, _macro(t), c, (c - lo) / span if span else 1.0)
        for t, c in kept.items()
    ]


def export_journal_overlay(journal_id: str, profile, path, meta=None) -> Path:
    if profile.journal_id != journal_id:
        raise DiscDivError(f"profile belongs to {profile.journal_id}, not {journal_id}")
    nodes = journal_overlay(profile)
    return write_table(
        path,
        ("topic_code", "macro_parent", "paper_count", "normalized_weight"),
        ((n.topic, n.macro_parent, n.paper_count, n.normalized_weight) for n in nodes),
        meta,
    )


def scatter_rows(table, level_x: str, level_y: str):
    check_level(level_x)
    check_level(level_y)
    if level_x == level_y:
        raise DiscDivError(f"scatter axes must differ (got {level_x} twice)")
    return [(r.journal_id, r.d(level_x), r.d(level_y), r.is_multidisciplinary) for r in table]


def export_scatter(table, level_x: str, level_y: str, path, meta=None) -> Path:
    rows = scatter_rows(table, level_x, level_y)
    return write_table(path, ("journal_id", f"d_{level_x}", f"d_{level_y}", "is_multidisciplinary"), rows, meta)


def export_quadrants(table, labels: Mapping[str, str], thresholds: tuple[float, float], path, meta=None) -> Path:
    meta = dict(meta or {})
    meta["macro_threshold"], meta["meso_threshold"] = thresholds
    return write_table(
        path,
        ("journal_id", "name", "is_multidisciplinary", "d_macro", "d_meso", "quadrant"),
        ((r.journal_id, r.name, r.is_multidisciplinary, r.d_macro, r.d_meso, labels[r.journal_id]) for r in table),
        meta,
    )


SCATTER_PAIRS = (("meso", "macro"), ("micro", "macro"), ("micro", "meso"))
