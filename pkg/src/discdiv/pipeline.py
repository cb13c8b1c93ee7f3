"""Pipeline stages over an output directory of plain-file artifacts.

Each stage reads what earlier stages wrote, so any stage can be re-run on
its own. Every file written starts with a metadata comment header.
"""

from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from . import __version__
from .detect import DEFAULT_DISTANCE_THRESHOLD, distance_distribution, rank_potential_multidisciplinary
from .diversity import JournalDiversityTable, build_diversity_table
from .embedding import (
    TrainParams,
    WalkParams,
    cosine_similarity_matrix,
    generate_walks,
    read_similarity,
    train_sgns,
    write_embeddings,
    write_similarity,
    write_walks,
)
from .embedding._pykernels import stream
from .errors import ConfigError, StageError
from .export import SCATTER_PAIRS, export_journal_overlay, export_network, export_quadrants, export_scatter, read_network_nodes
from .graph import build_discipline_graph, build_journal_profiles, read_graph, write_graph
from .ingest import load_corpus, validate_report
from .io import digest, metadata_header, parse_bool
from .stats import (
    consistency_report,
    default_thresholds,
    group_compare_report,
    quadrant_classify,
    write_consistency,
    write_group_report,
    write_group_values,
)
from .topics import LEVELS

log = logging.getLogger(__name__)

# keys that may be given per level as "<level>.<key>"
PER_LEVEL_KEYS = ("dims", "return_p", "inout_q", "walk_length", "walks_per_node", "window",
                  "negatives", "epochs", "learning_rate", "include_self_loops")


@dataclass
class PipelineConfig:
    papers: str | None = None
    citations: str | None = None
    journals: str | None = None
    out: str = "discdiv-out"
    delimiter: str = ","
    year_min: int = 2016
    year_max: int = 2020
    seed: int = 0
    dims: int = 64
    return_p: float = 1.0
    inout_q: float = 1.0
    walk_length: int = 80
    walks_per_node: int = 10
    window: int = 10
    negatives: int = 5
    epochs: int = 5
    learning_rate: float = 0.025
    include_self_loops: bool = False
    deterministic: bool = True
    threads: int = 1
    order_q: float = 2.0
    top_n: int = 10
    top_k: int = 0  # 0: min(1000, journals // 10)
    distance_threshold: float = DEFAULT_DISTANCE_THRESHOLD
    quadrant_thresholds: str = ""  # "macro,meso"; empty: medians of multidisciplinary journals
    level: str = ""  # restrict graph/embed to one level
    journal: str = ""  # export-overlay target
    per_level: dict = field(default_factory=dict)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.year_min > self.year_max:
            raise ConfigError(f"year window {self.year_min}-{self.year_max} is empty")
        if self.level and self.level not in LEVELS:
            raise ConfigError(f"level must be one of {', '.join(LEVELS)}")
        if self.order_q < 0:
            raise ConfigError("order_q must be nonnegative")
        if self.top_n < 0 or self.top_k < 0 or self.threads < 1:
            raise ConfigError("top_n/top_k must be >= 0 and threads >= 1")
        if self.quadrant_thresholds:
            self.thresholds()
        for lvl, overrides in self.per_level.items():
            if lvl not in LEVELS:
                raise ConfigError(f"unknown level prefix {lvl!r}")
            bad = set(overrides) - set(PER_LEVEL_KEYS)
            if bad:
                raise ConfigError(f"keys {sorted(bad)} cannot be set per level")
        for lvl in LEVELS:
            try:
                self.walk_params(lvl)
                self.train_params(lvl)
            except Exception as exc:
                raise ConfigError(f"{lvl}: {exc}") from exc

    def thresholds(self) -> tuple[float, float] | None:
        if not self.quadrant_thresholds:
            return None
        try:
            macro, meso = (float(x) for x in self.quadrant_thresholds.split(","))
        except ValueError as exc:
            raise ConfigError(f"quadrant_thresholds must be 'macro,meso', got {self.quadrant_thresholds!r}") from exc
        return macro, meso

    def _get(self, level: str, key: str):
        return self.per_level.get(level, {}).get(key, getattr(self, key))

    def level_seed(self, level: str, purpose: int) -> int:
        return stream(self.seed & ((1 << 64) - 1), LEVELS.index(level) + 1, purpose)

    def walk_params(self, level: str) -> WalkParams:
        return WalkParams(
            p=float(self._get(level, "return_p")), q=float(self._get(level, "inout_q")),
            walk_length=int(self._get(level, "walk_length")), walks_per_node=int(self._get(level, "walks_per_node")),
            include_self_loops=bool(self._get(level, "include_self_loops")),
            seed=self.level_seed(level, 1), threads=self.threads,
        )

    def train_params(self, level: str) -> TrainParams:
        return TrainParams(
            dimensions=int(self._get(level, "dims")), window=int(self._get(level, "window")),
            negative_samples=int(self._get(level, "negatives")), epochs=int(self._get(level, "epochs")),
            initial_learning_rate=float(self._get(level, "learning_rate")),
            seed=self.level_seed(level, 2), threads=1 if self.deterministic else self.threads,
        )

    def as_items(self) -> dict[str, object]:
        items = {f.name: getattr(self, f.name) for f in dataclasses.fields(self) if f.name != "per_level"}
        for lvl, overrides in sorted(self.per_level.items()):
            for k, v in sorted(overrides.items()):
                items[f"{lvl}.{k}"] = v
        return items

    def digest(self) -> str:
        items = self.as_items()
        items.pop("out")
        return digest(items)

    def outdir(self) -> Path:
        return Path(self.out)

    def levels(self) -> tuple:
        return (self.level,) if self.level else LEVELS


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(PipelineConfig)}


def coerce(key: str, value):
    """Convert a config-file/flag string to the field's type."""
    name = key.split(".", 1)[1] if "." in key else key
    if name not in _FIELD_TYPES or name == "per_level":
        raise ConfigError(f"unknown config key {key!r}")
    if not isinstance(value, str):
        return value
    kind = _FIELD_TYPES[name]
    try:
        if kind == "bool":
            return parse_bool(value)
        if kind == "int":
            return int(value)
        if kind == "float":
            return float(value)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {value!r}") from exc
    return value


def parse_config_text(text: str) -> dict[str, object]:
    """Flat ``key = value`` lines; ``#`` starts a comment; keys may carry a level prefix."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        out[key] = coerce(key, value)
    return out


def make_config(values: Mapping[str, object]) -> PipelineConfig:
    plain, per_level = {}, {}
    for key, value in values.items():
        if "." in key:
            lvl, name = key.split(".", 1)
            per_level.setdefault(lvl, {})[name] = coerce(key, value)
        else:
            plain[key] = coerce(key, value)
    return PipelineConfig(**plain, per_level=per_level)


def load_config_file(path) -> dict[str, object]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    values = parse_config_text(text)
    # input paths in a config file are relative to the file
    base = Path(path).resolve().parent
    for key in ("papers", "citations", "journals"):
        if key in values and not Path(str(values[key])).is_absolute():
            values[key] = str(base / str(values[key]))
    return values


class Run:
    """One pipeline invocation: config plus the metadata stamped on every artifact."""

    def __init__(self, config: PipelineConfig):
        self.config = config
        self.out = config.outdir()
        self._corpus = None

    def meta(self, stage: str, **extra) -> dict[str, object]:
        m = {"tool": f"discdiv {__version__}", "stage": stage, "seed": self.config.seed,
             "config_digest": self.config.digest()}
        m.update(extra)
        return m

    def path(self, name: str) -> Path:
        return self.out / name

    def require(self, name: str, stage: str) -> Path:
        p = self.path(name)
        if not p.exists():
            raise StageError(f"missing {p}: run the '{stage}' stage first")
        return p

    @property
    def corpus(self):
        if self._corpus is None:
            c = self.config
            missing = [k for k in ("papers", "citations", "journals") if not getattr(c, k)]
            if missing:
                raise ConfigError(f"input path(s) not configured: {', '.join(missing)}")
            self._corpus = load_corpus(c.papers, c.citations, c.journals, (c.year_min, c.year_max), c.delimiter)
        return self._corpus

    # stages -----------------------------------------------------------------

    def ingest(self):
        report = validate_report(self.corpus)
        self.out.mkdir(parents=True, exist_ok=True)
        lines = metadata_header(self.meta("ingest")) + report.lines()
        self.path("validation_report.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
        return report

    def graph(self, levels=None):
        graphs = {}
        for lvl in levels or self.config.levels():
            g = build_discipline_graph(self.corpus, lvl)
            meta = self.meta("graph", level=lvl)
            write_graph(g, self.path(f"graph_{lvl}.edges.csv"), meta)
            export_network(g, self.path(f"network_{lvl}.nodes.csv"), self.path(f"network_{lvl}.edges.csv"), meta=meta)
            log.info("%s graph: %d nodes, %d pairs, weight %d", lvl, len(g.nodes), len(g.edges), g.total_weight)
            graphs[lvl] = g
        return graphs

    def load_graph(self, level: str):
        nodes = read_network_nodes(self.require(f"network_{level}.nodes.csv", "graph"))
        return read_graph(self.require(f"graph_{level}.edges.csv", "graph"), level, nodes)

    def embed(self, levels=None):
        sims = {}
        for lvl in levels or self.config.levels():
            g = self.load_graph(lvl)
            wp, tp = self.config.walk_params(lvl), self.config.train_params(lvl)
            meta = self.meta("embed", level=lvl, walk_seed=wp.seed, train_seed=tp.seed)
            walks = generate_walks(g, wp)
            emb = train_sgns(walks, tp, level=lvl)
            sim = cosine_similarity_matrix(emb)
            write_walks(walks, self.path(f"walks_{lvl}.txt"), meta)
            write_embeddings(emb, self.path(f"embeddings_{lvl}.txt"), meta)
            write_similarity(sim, self.path(f"similarity_{lvl}.csv"), meta)
            write_similarity(cosine_similarity_matrix(emb, clamp=False), self.path(f"similarity_raw_{lvl}.csv"), meta)
            sims[lvl] = sim
        return sims

    def diversity(self) -> JournalDiversityTable:
        sims = {lvl: read_similarity(self.require(f"similarity_{lvl}.csv", "embed"), lvl) for lvl in LEVELS}
        table = build_diversity_table(self.corpus, sims, self.config.order_q)
        table.write(self.path("diversity_table.csv"), self.meta("diversity", order_q=self.config.order_q))
        return table

    def load_table(self) -> JournalDiversityTable:
        return JournalDiversityTable.read(self.require("diversity_table.csv", "diversity"))

    def analyze(self):
        table = self.load_table()
        meta = self.meta("analyze")
        report = group_compare_report(table)
        write_group_report(report, self.path("stats_groups.csv"), meta)
        write_group_values(report, table, self.path("group_values.csv"), meta)
        k = self.config.top_k or None
        multi_mask = table.multidisciplinary_mask
        multi = consistency_report(table, k, multi_mask) if multi_mask.sum() >= 2 else None
        write_consistency(consistency_report(table, k), multi, self.path("consistency.csv"), meta)
        for x, y in SCATTER_PAIRS:
            export_scatter(table, x, y, self.path(f"scatter_{x}_{y}.csv"), meta)
        thresholds = self.config.thresholds() or default_thresholds(table)
        labels = quadrant_classify(table, *thresholds)
        export_quadrants(table, labels, thresholds, self.path("quadrants.csv"), meta)
        return report, labels

    def detect(self):
        table = self.load_table()
        meta = self.meta("detect")
        ranking = rank_potential_multidisciplinary(table, self.config.top_n)
        ranking.write(self.path("candidates.csv"),
                      dict(meta, degenerate_macro=ranking.degenerate_macro, degenerate_meso=ranking.degenerate_meso))
        curve = distance_distribution(table, self.config.distance_threshold)
        curve.write(self.path("distance_curve.csv"),
                    dict(meta, threshold=curve.threshold, fraction_above=curve.fraction_above))
        return ranking, curve

    def export_overlay(self):
        jid = self.config.journal
        if not jid:
            raise ConfigError("export-overlay needs --journal")
        profiles = build_journal_profiles(self.corpus, "meso")
        if jid not in profiles:
            raise ConfigError(f"journal {jid!r} has no papers in the corpus")
        safe = "".join(ch if ch.isalnum() or ch in "-_." else "_" for ch in jid)
        return export_journal_overlay(jid, profiles[jid], self.path(f"overlay_{safe}.csv"), self.meta("export-overlay", journal=jid))

    def all(self):
        self.ingest()
        self.graph(LEVELS)
        self.embed(LEVELS)
        self.diversity()
        self.analyze()
        return self.detect()


STAGES = ("ingest", "graph", "embed", "diversity", "analyze", "detect", "export-overlay", "all")
