"""Disciplinary diversity of journals from paper-level topic assignments.

The pipeline runs ingest -> discipline graphs -> node2vec embeddings ->
Leinster-Cobbold diversity -> group statistics and detection of journals
that look multidisciplinary but are not filed that way.
"""

__version__ = "0.1.0"

from .errors import (
    DiscDivError,
    IngestError,
    GraphError,
    EmbeddingError,
    DiversityError,
    StatsError,
    DetectError,
    StageError,
    ConfigError,
)
from .topics import LEVELS, TopicId, topic_sort_key
from .ingest import Corpus, load_corpus, validate_report
from .graph import DisciplineGraph, JournalProfile, build_discipline_graph, build_journal_profiles
from .diversity import lc_div, journal_diversity, build_diversity_table, JournalDiversityTable
from .stats import (
    MWTestResult,
    mann_whitney_two_sided,
    spearman_rho,
    top_k_overlap,
    quadrant_classify,
    group_compare_report,
)
from .detect import min_max_normalize, distance_to_ideal, rank_potential_multidisciplinary, distance_distribution

__all__ = [
    "__version__",
    "DiscDivError",
    "IngestError",
    "GraphError",
    "EmbeddingError",
    "DiversityError",
    "StatsError",
    "DetectError",
    "StageError",
    "ConfigError",
    "LEVELS",
    "TopicId",
    "topic_sort_key",
    "Corpus",
    "load_corpus",
    "validate_report",
    "DisciplineGraph",
    "JournalProfile",
    "build_discipline_graph",
    "build_journal_profiles",
    "lc_div",
    "journal_diversity",
    "build_diversity_table",
    "JournalDiversityTable",
    "MWTestResult",
    "mann_whitney_two_sided",
    "spearman_rho",
    "top_k_overlap",
    "quadrant_classify",
    "group_compare_report",
    "min_max_normalize",
    "distance_to_ideal",
    "rank_potential_multidisciplinary",
    "distance_distribution",
]
