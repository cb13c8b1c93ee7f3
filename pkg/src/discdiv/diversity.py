"""Leinster-Cobbold similarity-sensitive diversity and the per-journal table."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import DiversityError
from .io import parse_bool, read_table, write_table
from .topics import LEVELS

SHARE_TOL = 1e-12
SYMMETRY_TOL = 1e-12


def _check_inputs(p: np.ndarray, s: np.ndarray, q: float) -> None:
    if p.ndim != 1 or p.size == 0:
        raise DiversityError("shares must be a non-empty vector")
    if s.shape != (p.size, p.size):
        raise DiversityError(f"similarity shape {s.shape} does not match {p.size} shares")
    if (p < 0).any() or not np.isfinite(p).all():
        raise DiversityError("shares must be finite and nonnegative")
    if abs(p.sum() - 1.0) > SHARE_TOL:
        raise DiversityError(f"shares sum to {p.sum()!r}, not 1")
    if not np.isfinite(s).all() or (s < 0).any() or (s > 1).any():
        raise DiversityError("similarities must lie in [0, 1]")
    if (np.diagonal(s) != 1.0).any():
        raise DiversityError("similarity diagonal must be exactly 1")
    if np.abs(s - s.T).max() > SYMMETRY_TOL:
        raise DiversityError("similarity matrix is not symmetric")
    if not (q >= 0 and math.isfinite(q)):
        raise DiversityError(f"order q must be a finite nonnegative number, got {q}")


_SPLITTER = 134217729.0  # 2**27 + 1


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a, b):
    """``a * b`` as an unevaluated sum ``p + e`` with no rounding (Dekker)."""
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_fsum(values: list) -> tuple[float, float]:
    hi = math.fsum(values)
    values.append(-hi)
    return hi, math.fsum(values)


def _inverse_simpson_similarity(p: np.ndarray, s: np.ndarray) -> float:
    """``(sum p)^2 / sum_ij S_ij p_i p_j`` carried in double-double precision.

    The quadratic form is summed exactly from error-free products, so results
    whose true value is representable (n for identity/uniform, 1 for all-ones)
    come out exact, and permuting fields cannot change the value.
    """
    h1, l1 = _two_prod(p[:, None], p[None, :])
    h2, l2 = _two_prod(s, h1)
    q_hi, q_lo = _dd_fsum(np.concatenate((h2.ravel(), l2.ravel(), (s * l1).ravel())).tolist())
    s_hi, s_lo = _dd_fsum(p.tolist())
    n1, e1 = _two_prod(s_hi, s_hi)
    t = e1 + 2.0 * s_hi * s_lo + s_lo * s_lo
    n_hi = n1 + t
    n_lo = t - (n_hi - n1)
    d1 = n_hi / q_hi
    m, em = _two_prod(d1, q_hi)
    r = ((n_hi - m) - em + n_lo) - d1 * q_lo
    return d1 + r / q_hi


def lc_div(shares, similarity, q: float = 2.0, validate: bool = True) -> float:
    r"""Leinster-Cobbold diversity of order ``q``.

    .. math::

       D_q = \Big(\sum_i p_i (Sp)_i^{q-1}\Big)^{1/(1-q)}

    with :math:`(Sp)_i = \sum_j S_{ij} p_j`. At ``q = 2`` this is
    :math:`1 / \sum_{ij} S_{ij} p_i p_j`; ``q = 1`` takes the limit
    :math:`\prod_i (Sp)_i^{-p_i}`. Fields with zero share are dropped first.

    Parameters
    ----------
    shares : array_like
        Nonnegative shares summing to 1.
    similarity : array_like
        Symmetric matrix in [0, 1] with unit diagonal, aligned with ``shares``.
    q : float
        Order, >= 0.
    validate : bool
        Check the input invariants (raises :class:`DiversityError`).

    Returns
    -------
    float
        Effective number of fields, between 1 and the number of fields.
    """
    p = np.asarray(shares, dtype=np.float64)
    s = np.asarray(similarity, dtype=np.float64)
    if validate:
        _check_inputs(p, s, q)
    keep = p > 0
    if not keep.all():
        p = p[keep]
        s = s[np.ix_(keep, keep)]
    if q == 2:
        return float(_inverse_simpson_similarity(p, s))
    p = p / math.fsum(p.tolist())
    sp = s @ p
    if (sp <= 0).any():
        raise DiversityError("(Sp)_i vanished for a field with positive share")
    if q == 1:
        return float(math.exp(-(p @ np.log(sp))))
    return float((p @ sp ** (q - 1.0)) ** (1.0 / (1.0 - q)))


def journal_diversity(profile, similarity, q: float = 2.0) -> float:
    """Diversity of one journal profile against a level's similarity matrix."""
    topics = list(profile.counts)
    try:
        sub = similarity.restrict(topics)
    except KeyError as exc:
        raise DiversityError(
            f"journal {profile.journal_id}: topic(s) {exc.args[0]} missing from the {similarity.level} similarity matrix"
        ) from exc
    counts = np.array([profile.counts[t] for t in topics], dtype=np.float64)
    return lc_div(counts / counts.sum(), sub, q)


@dataclass(frozen=True)
class DiversityRow:
    journal_id: str
    name: str
    is_multidisciplinary: bool
    paper_count: int
    d_macro: float
    d_meso: float
    d_micro: float

    def d(self, level: str) -> float:
        return getattr(self, f"d_{level}")


TABLE_COLUMNS = ("journal_id", "name", "is_multidisciplinary", "paper_count", "d_macro", "d_meso", "d_micro")


@dataclass(frozen=True)
class JournalDiversityTable:
    rows: tuple

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    @property
    def journal_ids(self) -> list[str]:
        return [r.journal_id for r in self.rows]

    def values(self, level: str) -> np.ndarray:
        return np.array([r.d(level) for r in self.rows], dtype=np.float64)

    def scores(self, level: str) -> dict[str, float]:
        return {r.journal_id: r.d(level) for r in self.rows}

    @property
    def multidisciplinary_mask(self) -> np.ndarray:
        return np.array([r.is_multidisciplinary for r in self.rows], dtype=bool)

    def write(self, path: str | Path, meta=None) -> Path:
        return write_table(
            path,
            TABLE_COLUMNS,
            ((r.journal_id, r.name, r.is_multidisciplinary, r.paper_count, r.d_macro, r.d_meso, r.d_micro) for r in self.rows),
            meta,
        )

    @classmethod
    def read(cls, path: str | Path) -> JournalDiversityTable:
        header, rows = read_table(path)
        if tuple(header) != TABLE_COLUMNS:
            raise DiversityError(f"{path}: unexpected diversity table header {header}")
        return cls(tuple(
            DiversityRow(r[0], r[1], parse_bool(r[2]), int(r[3]), float(r[4]), float(r[5]), float(r[6]))
            for r in rows
        ))


def build_diversity_table(corpus, similarities: Mapping[str, object], q: float = 2.0, profiles=None) -> JournalDiversityTable:
    """One row per publishing journal, with D computed independently at each level.

    ``similarities`` maps ``"macro"``/``"meso"``/``"micro"`` to a similarity
    matrix; ``profiles`` optionally supplies precomputed profiles per level.
    """
    from .graph import build_journal_profiles

    missing = [lvl for lvl in LEVELS if lvl not in similarities]
    if missing:
        raise DiversityError(f"no similarity matrix for level(s) {', '.join(missing)}")
    profiles = profiles or {lvl: build_journal_profiles(corpus, lvl) for lvl in LEVELS}
    rows = []
    for jid in corpus.publishing_journals:
        journal = corpus.journals[jid]
        d = {lvl: journal_diversity(profiles[lvl][jid], similarities[lvl], q) for lvl in LEVELS}
        rows.append(DiversityRow(
            jid, journal.name, journal.is_multidisciplinary, profiles["macro"][jid].total,
            d["macro"], d["meso"], d["micro"],
        ))
    return JournalDiversityTable(tuple(rows))


def table_from_records(records: Sequence[tuple]) -> JournalDiversityTable:
    """Build a table from plain tuples in :data:`TABLE_COLUMNS` order (handy for tests)."""
    return JournalDiversityTable(tuple(DiversityRow(*r) for r in records))
