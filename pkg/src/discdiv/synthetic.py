"""Synthetic corpora with planted multidisciplinary, specialist and broad journals.

Citations mostly stay inside a paper's own micro/meso/macro topic, so the
discipline graphs carry the taxonomy's block structure.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .ingest import MULTIDISCIPLINARY


@dataclass(frozen=True)
class SyntheticSpec:
    n_macro: int = 10
    n_meso: int = 60
    n_micro: int = 200
    n_multidisciplinary: int = 50
    n_specialist: int = 450
    n_broad_other: int = 10
    papers_per_journal: tuple = (200, 260)
    citations_per_paper: int = 3
    # probability a citation targets the same micro / same meso / same macro topic; rest random
    citation_locality: tuple = (0.5, 0.3, 0.15)
    years: tuple = (2016, 2020)
    seed: int = 0


@dataclass
class SyntheticCorpus:
    papers: list
    citations: list
    journals: list
    planted: dict = field(default_factory=dict)

    def write(self, directory) -> dict[str, Path]:
        d = Path(directory)
        d.mkdir(parents=True, exist_ok=True)
        paths = {
            "papers": d / "papers.csv",
            "citations": d / "citations.csv",
            "journals": d / "journals.csv",
        }
        specs = (
            ("papers", ("paper_id", "journal_id", "year", "macro_topic", "meso_topic", "micro_topic"), self.papers),
            ("citations", ("citing_paper_id", "cited_paper_id"), self.citations),
            ("journals", ("journal_id", "name", "categories"), self.journals),
        )
        for key, header, rows in specs:
            with open(paths[key], "w", newline="", encoding="utf-8") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(header)
                w.writerows(rows)
        return paths


def _taxonomy(spec: SyntheticSpec):
    meso = [f"{i % spec.n_macro + 1}.{i // spec.n_macro + 1}" for i in range(spec.n_meso)]
    micro = [f"{meso[i % spec.n_meso]}.{i // spec.n_meso + 1}" for i in range(spec.n_micro)]
    return meso, micro


def _pick(rng, members, keys):
    """For each key, a uniformly random member of ``members[key]`` (vectorised)."""
    sizes = np.array([m.size for m in members])
    starts = np.concatenate(([0], np.cumsum(sizes)[:-1]))
    flat = np.concatenate(members)
    offs = (rng.random(keys.size) * sizes[keys]).astype(np.int64)
    return flat[starts[keys] + offs]


def generate(spec: SyntheticSpec = SyntheticSpec()) -> SyntheticCorpus:
    """Build a corpus; ``planted`` lists journal ids per kind."""
    rng = np.random.default_rng(spec.seed)
    meso, micro = _taxonomy(spec)
    macro_of_meso = np.array([int(m.split(".")[0]) - 1 for m in meso])
    meso_of_micro = np.array([i % spec.n_meso for i in range(spec.n_micro)])
    micro_by_meso = [np.flatnonzero(meso_of_micro == j) for j in range(spec.n_meso)]
    meso_by_macro = [np.flatnonzero(macro_of_meso == k) for k in range(spec.n_macro)]

    kinds = (["multi"] * spec.n_multidisciplinary + ["specialist"] * spec.n_specialist
             + ["broad"] * spec.n_broad_other)
    kinds = [kinds[i] for i in rng.permutation(len(kinds))]

    journals, planted = [], {"multi": [], "specialist": [], "broad": []}
    paper_micro, paper_journal = [], []
    for idx, kind in enumerate(kinds):
        jid = f"J{idx + 1:04d}"
        planted[kind].append(jid)
        n_papers = int(rng.integers(spec.papers_per_journal[0], spec.papers_per_journal[1] + 1))
        if kind in ("multi", "broad"):
            macro_w = rng.dirichlet(np.full(spec.n_macro, 8.0))
            macros = rng.choice(spec.n_macro, size=n_papers, p=macro_w)
            mesos = _pick(rng, meso_by_macro, macros)
        else:
            first = int(rng.integers(spec.n_meso))
            chosen = [first]
            if rng.random() < 0.6:
                if rng.random() < 0.5:
                    pool = meso_by_macro[macro_of_meso[first]]
                else:
                    pool = np.arange(spec.n_meso)
                pool = pool[pool != first]
                if pool.size:
                    chosen.append(int(rng.choice(pool)))
            w = rng.dirichlet(np.full(len(chosen), 2.0))
            mesos = np.array(chosen)[rng.choice(len(chosen), size=n_papers, p=w)]
            stray = rng.random(n_papers) < rng.uniform(0.0, 0.05)
            mesos[stray] = rng.integers(spec.n_meso, size=int(stray.sum()))
        micros = _pick(rng, micro_by_meso, mesos)
        paper_micro.extend(micros.tolist())
        paper_journal.extend([jid] * n_papers)
        if kind == "multi":
            cats = MULTIDISCIPLINARY if rng.random() < 0.8 else f"{MULTIDISCIPLINARY};Field {int(rng.integers(spec.n_macro)) + 1}"
        elif kind == "broad":
            cats = "Engineering, Multidisciplinary;Applied Sciences"
        else:
            cats = f"Field {macro_of_meso[mesos[0]] + 1}"
        journals.append((jid, f"Synthetic {kind.title()} Journal {idx + 1}", cats))

    paper_micro = np.array(paper_micro)
    n = paper_micro.size
    ids = [f"P{i + 1:07d}" for i in range(n)]
    years = rng.integers(spec.years[0], spec.years[1] + 1, size=n)
    papers = [
        (ids[i], paper_journal[i], int(years[i]), meso[meso_of_micro[paper_micro[i]]].split(".")[0],
         meso[meso_of_micro[paper_micro[i]]], micro[paper_micro[i]])
        for i in range(n)
    ]

    paper_meso = meso_of_micro[paper_micro]
    paper_macro = macro_of_meso[paper_meso]
    n_cite = spec.citations_per_paper
    citing = np.repeat(np.arange(n), n_cite)
    scope = np.searchsorted(np.cumsum(spec.citation_locality), rng.random(citing.size), side="right")
    cited = rng.integers(n, size=citing.size)
    for level, key in enumerate((paper_micro, paper_meso, paper_macro)):
        sel = scope == level
        members = [np.flatnonzero(key == t) for t in range(key.max() + 1)]
        cited[sel] = _pick(rng, members, key[citing[sel]])
    keep = cited != citing
    citations = [(ids[a], ids[b]) for a, b in zip(citing[keep].tolist(), cited[keep].tolist())]
    return SyntheticCorpus(papers, citations, journals, planted)
