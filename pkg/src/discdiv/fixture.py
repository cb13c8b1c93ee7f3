"""The small synthetic corpus bundled under ``data/fixture``."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .synthetic import SyntheticSpec

FIXTURE_SPEC = SyntheticSpec(
    n_macro=10,
    n_meso=20,
    n_micro=40,
    n_multidisciplinary=8,
    n_specialist=30,
    n_broad_other=2,
    papers_per_journal=(30, 50),
    citations_per_paper=3,
    seed=0,
)


def fixture_dir() -> Path:
    return Path(str(resources.files("discdiv") / "data" / "fixture"))


def fixture_paths() -> dict[str, Path]:
    d = fixture_dir()
    return {k: d / f"{k}.csv" for k in ("papers", "citations", "journals")}
