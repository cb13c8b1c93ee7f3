"""Load papers, citations and journals from delimited text into a :class:`Corpus`.

Rows that break an invariant are dropped and tallied by reason; nothing is
repaired. The resulting corpus is immutable.
"""

from __future__ import annotations

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from .errors import IngestError
from .io import read_table
from .topics import LEVELS, TopicId, topic_sort_key

log = logging.getLogger(__name__)

MULTIDISCIPLINARY = "Multidisciplinary Sciences"
DEFAULT_WINDOW = (2016, 2020)

PAPER_COLUMNS = ("paper_id", "journal_id", "year", "macro_topic", "meso_topic", "micro_topic")
CITATION_COLUMNS = ("citing_paper_id", "cited_paper_id")
JOURNAL_COLUMNS = ("journal_id", "name", "categories")


@dataclass(frozen=True)
class PaperRecord:
    paper_id: str
    journal_id: str
    year: int
    macro: str
    meso: str
    micro: str

    def topic(self, level: str) -> str:
        return getattr(self, level)


@dataclass(frozen=True)
class JournalRecord:
    journal_id: str
    name: str
    categories: frozenset

    @property
    def is_multidisciplinary(self) -> bool:
        return MULTIDISCIPLINARY in self.categories


@dataclass(frozen=True)
class CitationEdge:
    citing: str
    cited: str


@dataclass(frozen=True)
class TopicTaxonomy:
    """Topic codes seen per level plus each code's parent one level up."""

    codes: Mapping[str, tuple]
    parent: Mapping[str, str]

    def macro_of(self, code: str) -> str:
        return code.split(".", 1)[0]

    def __contains__(self, topic: TopicId) -> bool:
        return topic.code in self.codes.get(topic.level, ())

    @classmethod
    def from_papers(cls, papers) -> TopicTaxonomy:
        seen = {lvl: set() for lvl in LEVELS}
        parent = {}
        for p in papers:
            seen["macro"].add(p.macro)
            seen["meso"].add(p.meso)
            seen["micro"].add(p.micro)
            parent[p.meso] = p.macro
            parent[p.micro] = p.meso
        codes = {lvl: tuple(sorted(seen[lvl], key=topic_sort_key)) for lvl in LEVELS}
        return cls(MappingProxyType(codes), MappingProxyType(dict(sorted(parent.items()))))


@dataclass(frozen=True)
class Corpus:
    papers: Mapping[str, PaperRecord]
    papers_by_journal: Mapping[str, tuple]
    citations: tuple
    journals: Mapping[str, JournalRecord]
    taxonomy: TopicTaxonomy
    window: tuple
    input_rows: Mapping[str, int] = field(default_factory=dict)
    rejected: Mapping[str, Mapping[str, int]] = field(default_factory=dict)

    def journal_papers(self, journal_id: str) -> list[PaperRecord]:
        return [self.papers[pid] for pid in self.papers_by_journal.get(journal_id, ())]

    @property
    def publishing_journals(self) -> list[str]:
        """Journal ids with at least one accepted paper, in journal-file order."""
        return [jid for jid in self.journals if self.papers_by_journal.get(jid)]


def _open_table(path, required, delimiter, what, allow_empty=False):
    try:
        header, rows = read_table(path, delimiter)
    except OSError as exc:
        raise IngestError(f"cannot read {what} file {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise IngestError(f"{what} file {path} is not UTF-8: {exc}") from exc
    if not header and allow_empty:
        return {}, []
    missing = [c for c in required if c not in header]
    if missing:
        raise IngestError(f"{what} file {path}: header lacks column(s) {', '.join(missing)}")
    return {c: header.index(c) for c in required}, rows


def _load_journals(path, delimiter):
    cols, rows = _open_table(path, JOURNAL_COLUMNS, delimiter, "journals")
    journals: dict[str, JournalRecord] = {}
    rejects: Counter = Counter()
    width = max(cols.values()) + 1
    for row in rows:
        if len(row) < width or not row[cols["journal_id"]].strip():
            rejects["bad_row"] += 1
            continue
        jid = row[cols["journal_id"]].strip()
        cats = frozenset(c.strip() for c in row[cols["categories"]].split(";") if c.strip())
        if not cats:
            rejects["no_categories"] += 1
            continue
        if jid in journals:
            rejects["duplicate_id"] += 1
            continue
        journals[jid] = JournalRecord(jid, row[cols["name"]].strip(), cats)
    return journals, len(rows), rejects


def _check_paper(row, cols, journals, window):
    """Return (PaperRecord, None) or (None, reason)."""
    pid = row[cols["paper_id"]].strip()
    jid = row[cols["journal_id"]].strip()
    if not pid or not jid:
        return None, "bad_row"
    codes = [row[cols[f"{lvl}_topic"]].strip() for lvl in LEVELS]
    if any(not c for c in codes):
        return None, "missing_level"
    try:
        topics = [TopicId(lvl, c) for lvl, c in zip(LEVELS, codes)]
    except ValueError:
        return None, "bad_topic_code"
    if topics[1].parent != topics[0] or topics[2].parent != topics[1]:
        return None, "parent_mismatch"
    try:
        year = int(row[cols["year"]].strip())
    except ValueError:
        return None, "bad_year"
    if not window[0] <= year <= window[1]:
        return None, "out_of_window"
    if jid not in journals:
        return None, "unknown_journal"
    return PaperRecord(pid, jid, year, *codes), None


def _load_papers(path, delimiter, journals, window):
    cols, rows = _open_table(path, PAPER_COLUMNS, delimiter, "papers")
    papers: dict[str, PaperRecord] = {}
    rejects: Counter = Counter()
    width = max(cols.values()) + 1
    for row in rows:
        if len(row) < width:
            # a short row is a paper missing trailing topic columns when the ids are there
            rejects["missing_level" if len(row) > cols["year"] else "bad_row"] += 1
            continue
        rec, reason = _check_paper(row, cols, journals, window)
        if reason is None and rec.paper_id in papers:
            reason = "duplicate_id"
        if reason is not None:
            rejects[reason] += 1
            continue
        papers[rec.paper_id] = rec
    return papers, len(rows), rejects


def _load_citations(path, delimiter, papers):
    cols, rows = _open_table(path, CITATION_COLUMNS, delimiter, "citations", allow_empty=True)
    edges = []
    rejects: Counter = Counter()
    for row in rows:
        if len(row) < 2:
            rejects["bad_row"] += 1
            continue
        a = row[cols["citing_paper_id"]].strip()
        b = row[cols["cited_paper_id"]].strip()
        if not a or not b:
            rejects["bad_row"] += 1
        elif a == b:
            rejects["self_citation"] += 1
        elif a not in papers or b not in papers:
            rejects["dangling"] += 1
        else:
            edges.append(CitationEdge(a, b))
    return tuple(edges), len(rows), rejects


def load_corpus(
    papers_path: str | Path,
    citations_path: str | Path,
    journals_path: str | Path,
    window: tuple[int, int] = DEFAULT_WINDOW,
    delimiter: str = ",",
) -> Corpus:
    """Read the three input files and build a validated :class:`Corpus`.

    Parameters
    ----------
    papers_path, citations_path, journals_path
        Delimited UTF-8 files with a header row (see README for columns).
    window
        Inclusive publication-year range; papers outside it are rejected.
    delimiter
        Field separator for all three files.

    Raises
    ------
    IngestError
        If a file cannot be read, its header lacks a required column, or no
        paper survives validation.
    """
    if window[0] > window[1]:
        raise IngestError(f"empty year window {window}")
    journals, j_rows, j_rej = _load_journals(journals_path, delimiter)
    papers, p_rows, p_rej = _load_papers(papers_path, delimiter, journals, window)
    if not papers:
        raise IngestError(f"no valid papers in {papers_path} (rejected: {dict(p_rej)})")
    citations, c_rows, c_rej = _load_citations(citations_path, delimiter, papers)

    by_journal: dict[str, list[str]] = defaultdict(list)
    for pid, rec in papers.items():
        by_journal[rec.journal_id].append(pid)
    if c_rej.get("dangling"):
        log.info("dropped %d citation(s) with an unknown endpoint", c_rej["dangling"])

    def frozen(counter):
        return MappingProxyType(dict(sorted(counter.items())))

    return Corpus(
        papers=MappingProxyType(papers),
        papers_by_journal=MappingProxyType({k: tuple(v) for k, v in by_journal.items()}),
        citations=citations,
        journals=MappingProxyType(journals),
        taxonomy=TopicTaxonomy.from_papers(papers.values()),
        window=tuple(window),
        input_rows=MappingProxyType({"papers": p_rows, "citations": c_rows, "journals": j_rows}),
        rejected=MappingProxyType(
            {"papers": frozen(p_rej), "citations": frozen(c_rej), "journals": frozen(j_rej)}
        ),
    )


@dataclass(frozen=True)
class ValidationReport:
    paper_count: int
    citation_count: int
    journal_count: int
    publishing_journal_count: int
    multidisciplinary_count: int
    topic_counts: Mapping[str, int]
    input_rows: Mapping[str, int]
    rejected: Mapping[str, Mapping[str, int]]
    window: tuple

    def lines(self) -> list[str]:
        out = [
            f"year_window: {self.window[0]}-{self.window[1]}",
            f"paper_count: {self.paper_count}",
            f"citation_count: {self.citation_count}",
            f"journal_count: {self.journal_count}",
            f"publishing_journal_count: {self.publishing_journal_count}",
            f"multidisciplinary_count: {self.multidisciplinary_count}",
        ]
        out += [f"topic_count.{lvl}: {self.topic_counts[lvl]}" for lvl in LEVELS]
        for name in ("papers", "citations", "journals"):
            out.append(f"input_rows.{name}: {self.input_rows.get(name, 0)}")
            out.append(f"rejected.{name}: {sum(self.rejected.get(name, {}).values())}")
            for reason, n in self.rejected.get(name, {}).items():
                out.append(f"rejected.{name}.{reason}: {n}")
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())


def validate_report(corpus: Corpus) -> ValidationReport:
    return ValidationReport(
        paper_count=len(corpus.papers),
        citation_count=len(corpus.citations),
        journal_count=len(corpus.journals),
        publishing_journal_count=len(corpus.publishing_journals),
        multidisciplinary_count=sum(j.is_multidisciplinary for j in corpus.journals.values()),
        topic_counts={lvl: len(corpus.taxonomy.codes[lvl]) for lvl in LEVELS},
        input_rows=dict(corpus.input_rows),
        rejected={k: dict(v) for k, v in corpus.rejected.items()},
        window=corpus.window,
    )
