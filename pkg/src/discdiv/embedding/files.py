"""Walk, embedding and similarity files. Floats use ``repr`` and re-load bit-exactly."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from ..errors import EmbeddingError
from ..io import metadata_header, read_table, write_table
from .node2vec import EmbeddingMatrix, SimilarityMatrix, WalkSet


def _write_lines(path, lines, meta):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = "".join(line + "\n" for line in metadata_header(meta)) + "".join(line + "\n" for line in lines)
    path.write_text(text, encoding="utf-8")
    return path


def _data_lines(path):
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("#"):
                continue
            line = line.strip()
            if line:
                yield line


def write_walks(walks: WalkSet, path, meta=None) -> Path:
    """One walk per line, space-separated topic codes."""
    return _write_lines(path, (" ".join(w) for w in walks), meta)


def read_walks(path, nodes) -> WalkSet:
    return WalkSet.from_walks(nodes, [line.split() for line in _data_lines(path)])


def write_embeddings(emb: EmbeddingMatrix, path, meta=None) -> Path:
    lines = (node + " " + " ".join(repr(float(x)) for x in vec) for node, vec in zip(emb.nodes, emb.vectors))
    return _write_lines(path, lines, meta)


def read_embeddings(path, level: str = "") -> EmbeddingMatrix:
    nodes, rows = [], []
    for line in _data_lines(path):
        parts = line.split()
        nodes.append(parts[0])
        rows.append([float(x) for x in parts[1:]])
    if len({len(r) for r in rows}) > 1:
        raise EmbeddingError(f"{path}: ragged embedding rows")
    return EmbeddingMatrix(level, tuple(nodes), np.array(rows, dtype=np.float64))


def write_similarity(sim: SimilarityMatrix, path, meta=None) -> Path:
    """Square matrix with topic codes as header row and first column."""
    rows = ([node, *map(float, row)] for node, row in zip(sim.nodes, sim.values))
    return write_table(path, ("topic", *sim.nodes), rows, meta)


def read_similarity(path, level: str = "") -> SimilarityMatrix:
    header, rows = read_table(path)
    nodes = tuple(header[1:])
    if [r[0] for r in rows] != list(nodes):
        raise EmbeddingError(f"{path}: row labels do not match column labels")
    values = np.array([[float(x) for x in r[1:]] for r in rows], dtype=np.float64).reshape(len(nodes), len(nodes))
    return SimilarityMatrix(level, nodes, values)


def write_similarity_triplets(sim: SimilarityMatrix, path, meta=None) -> Path:
    """Sparse form: upper triangle incl. diagonal, nonzero entries only."""
    n = len(sim.nodes)
    rows = (
        (sim.nodes[i], sim.nodes[j], float(sim.values[i, j]))
        for i in range(n)
        for j in range(i, n)
        if sim.values[i, j] != 0.0
    )
    return write_table(path, ("source_topic", "target_topic", "similarity"), rows, meta)


def read_similarity_triplets(path, nodes, level: str = "") -> SimilarityMatrix:
    nodes = tuple(nodes)
    idx = {n: i for i, n in enumerate(nodes)}
    values = np.zeros((len(nodes), len(nodes)), dtype=np.float64)
    _, rows = read_table(path)
    for a, b, s in rows:
        values[idx[a], idx[b]] = values[idx[b], idx[a]] = float(s)
    return SimilarityMatrix(level, nodes, values)
