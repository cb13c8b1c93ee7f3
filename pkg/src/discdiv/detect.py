"""Flag non-multidisciplinary journals close to the (1, 1) corner of
min-max normalised (macro, meso) diversity space."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DetectError
from .io import write_table

log = logging.getLogger(__name__)

DEFAULT_DISTANCE_THRESHOLD = 0.6


class Normalized(NamedTuple):
    values: np.ndarray
    degenerate: bool


def min_max_normalize(values: Sequence[float]) -> Normalized:
    """``(x - min) / (max - min)``; a constant input maps to zeros with ``degenerate=True``."""
    x = np.asarray(values, dtype=np.float64).ravel()
    if x.size == 0:
        raise DetectError("cannot normalise an empty sequence")
    lo, hi = x.min(), x.max()
    if hi == lo:
        return Normalized(np.zeros_like(x), True)
    out = (x - lo) / (hi - lo)
    np.clip(out, 0.0, 1.0, out=out)
    return Normalized(out, False)


def distance_to_ideal(x_norm, y_norm):
    """Euclidean distance from ``(x, y)`` to ``(1, 1)``; inputs must lie in [0, 1].

    Accepts scalars or equal-shaped arrays.
    """
    x = np.asarray(x_norm, dtype=np.float64)
    y = np.asarray(y_norm, dtype=np.float64)
    if ((x < 0) | (x > 1) | (y < 0) | (y > 1)).any() or not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise DetectError("normalised coordinates must lie in [0, 1]")
    d = np.hypot(1.0 - x, 1.0 - y)
    return float(d) if d.ndim == 0 else d


@dataclass(frozen=True)
class Candidate:
    rank: int
    journal_id: str
    name: str
    norm_macro: float
    norm_meso: float
    distance: float


@dataclass(frozen=True)
class CandidateRanking:
    rows: tuple
    degenerate_macro: bool = False
    degenerate_meso: bool = False

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    @property
    def journal_ids(self) -> list[str]:
        return [c.journal_id for c in self.rows]

    def write(self, path: str | Path, meta=None) -> Path:
        return write_table(
            path,
            ("rank", "journal_id", "name", "norm_macro", "norm_meso", "distance"),
            ((c.rank, c.journal_id, c.name, c.norm_macro, c.norm_meso, c.distance) for c in self.rows),
            meta,
        )


def _normalised_positions(table):
    if len(table) < 2:
        raise DetectError("detection needs at least two journals")
    macro = min_max_normalize(table.values("macro"))
    meso = min_max_normalize(table.values("meso"))
    for name, n in (("macro", macro), ("meso", meso)):
        if n.degenerate:
            log.warning("%s diversity is constant over all journals; axis normalised to 0", name)
    return macro, meso, distance_to_ideal(macro.values, meso.values)


def rank_potential_multidisciplinary(table, top_n: int | None = 10) -> CandidateRanking:
    """Non-multidisciplinary journals by ascending distance to (1, 1).

    Normalisation spans every journal, so the corner is the global maximum on
    both axes. Ties are ordered by journal id; ``top_n=None`` keeps all.
    """
    macro, meso, dist = _normalised_positions(table)
    order = sorted(
        (i for i, r in enumerate(table.rows) if not r.is_multidisciplinary),
        key=lambda i: (dist[i], table.rows[i].journal_id),
    )
    if top_n is not None:
        if top_n < 0:
            raise DetectError("top_n must be nonnegative")
        order = order[:top_n]
    rows = tuple(
        Candidate(rank, table.rows[i].journal_id, table.rows[i].name,
                  float(macro.values[i]), float(meso.values[i]), float(dist[i]))
        for rank, i in enumerate(order, start=1)
    )
    return CandidateRanking(rows, macro.degenerate, meso.degenerate)


@dataclass(frozen=True)
class DistanceCurve:
    distances: np.ndarray
    threshold: float
    fraction_above: float

    def write(self, path: str | Path, meta=None) -> Path:
        return write_table(path, ("index", "distance"), enumerate(map(float, self.distances)), meta)


def fraction_above(distances, threshold: float = DEFAULT_DISTANCE_THRESHOLD) -> float:
    d = np.asarray(distances, dtype=np.float64)
    return float((d > threshold).mean()) if d.size else 0.0


def distance_distribution(table, threshold: float = DEFAULT_DISTANCE_THRESHOLD, journal_ids=None) -> DistanceCurve:
    """Sorted distances of non-multidisciplinary journals and the share above ``threshold``.

    ``journal_ids`` narrows the curve to a subset (normalisation still uses all journals).
    """
    if not math.isfinite(threshold):
        raise DetectError("threshold must be finite")
    rows = [r for r in table.rows if not r.is_multidisciplinary]
    if not rows:
        return DistanceCurve(np.zeros(0), threshold, 0.0)
    _, _, dist = _normalised_positions(table)
    keep = set(journal_ids) if journal_ids is not None else None
    d = np.sort(np.array([
        dist[i] for i, r in enumerate(table.rows)
        if not r.is_multidisciplinary and (keep is None or r.journal_id in keep)
    ], dtype=np.float64))
    return DistanceCurve(d, threshold, fraction_above(d, threshold))
