"""Exception hierarchy. The CLI maps each class to its own exit status."""


class DiscDivError(Exception):
    exit_code = 1


class ConfigError(DiscDivError):
    exit_code = 2


class IngestError(DiscDivError):
    exit_code = 3


class GraphError(DiscDivError):
    exit_code = 4


class EmbeddingError(DiscDivError):
    exit_code = 5


class DiversityError(DiscDivError):
    exit_code = 6


class StatsError(DiscDivError):
    exit_code = 7


class DetectError(DiscDivError):
    exit_code = 8


class StageError(DiscDivError):
    """A pipeline stage was asked to run before the artifact it needs exists."""

    exit_code = 9
