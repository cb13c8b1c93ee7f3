"""Node2vec embeddings of discipline graphs and the cosine similarity between them."""

from ._backend import BACKEND, kernels
from .node2vec import (
    EmbeddingMatrix,
    SimilarityMatrix,
    TrainParams,
    TransitionTables,
    WalkParams,
    WalkSet,
    cosine_similarity_matrix,
    embed_graph,
    generate_walks,
    precompute_transitions,
    train_sgns,
)
from .files import (
    read_embeddings,
    read_similarity,
    read_similarity_triplets,
    read_walks,
    write_embeddings,
    write_similarity,
    write_similarity_triplets,
    write_walks,
)

__all__ = [
    "BACKEND",
    "kernels",
    "EmbeddingMatrix",
    "SimilarityMatrix",
    "TrainParams",
    "TransitionTables",
    "WalkParams",
    "WalkSet",
    "cosine_similarity_matrix",
    "embed_graph",
    "generate_walks",
    "precompute_transitions",
    "train_sgns",
    "read_embeddings",
    "read_similarity",
    "read_similarity_triplets",
    "read_walks",
    "write_embeddings",
    "write_similarity",
    "write_similarity_triplets",
    "write_walks",
]
