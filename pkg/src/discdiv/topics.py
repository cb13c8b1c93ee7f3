"""Three-tier topic codes (macro "6", meso "6.238", micro "6.238.17")."""

from __future__ import annotations

from dataclasses import dataclass

LEVELS = ("macro", "meso", "micro")
_DEPTH = {"macro": 1, "meso": 2, "micro": 3}


def topic_sort_key(code: str) -> tuple:
    """Order dotted codes segment by segment, numerically where possible."""
    return tuple((0, int(s), "") if s.isdigit() else (1, 0, s) for s in code.split("."))


def check_level(level: str) -> str:
    if level not in _DEPTH:
        raise ValueError(f"unknown level {level!r}; expected one of {', '.join(LEVELS)}")
    return level


@dataclass(frozen=True, order=False)
class TopicId:
    level: str
    code: str

    def __post_init__(self):
        check_level(self.level)
        segments = self.code.split(".")
        if len(segments) != _DEPTH[self.level] or any(not s.strip() for s in segments):
            raise ValueError(f"{self.code!r} is not a valid {self.level} code")

    @property
    def parent(self) -> TopicId | None:
        if self.level == "macro":
            return None
        coarser = LEVELS[_DEPTH[self.level] - 2]
        return TopicId(coarser, self.code.rsplit(".", 1)[0])

    @property
    def macro(self) -> str:
        return self.code.split(".", 1)[0]

    def __str__(self) -> str:
        return self.code


def is_valid_code(level: str, code: str) -> bool:
    try:
        TopicId(level, code)
    except ValueError:
        return False
    return True
