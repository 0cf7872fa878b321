"""Exception types shared across the package."""


class SnakeStoryError(Exception):
    """Base class for all package errors."""


class ConfigError(SnakeStoryError):
    """A configuration value violates its documented bound."""


class PhaseError(SnakeStoryError):
    """An operation was invoked in the wrong game phase."""


class ConsistencyError(SnakeStoryError):
    """Internal state disagrees with an operation's precondition."""


class EngineJammed(SnakeStoryError):
    """The board has too few usable tiles to continue; the session
    should be ended gracefully by the caller."""


class ProviderUnavailable(SnakeStoryError):
    """The text backend could not be reached after retries."""


class ProviderProtocol(SnakeStoryError):
    """The text backend answered with a malformed response."""


class SequencingError(SnakeStoryError):
    """A session command arrived out of order (e.g. a choice while the
    next options are still being generated)."""


class VersionError(SnakeStoryError):
    """A command is valid only for the other session version."""


class LogParseError(SnakeStoryError):
    """A session log line could not be parsed."""

    def __init__(self, message: str, line_number: int | None = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class ReplayError(SnakeStoryError):
    """A session log could not be replayed into a consistent story."""


class UsageError(SnakeStoryError):
    """Analysis input mixes incompatible traces."""


class AllZeroError(SnakeStoryError):
    """Every paired difference is zero; the signed-rank test is undefined."""


class InputError(SnakeStoryError):
    """A metric received unusable input (e.g. empty token list)."""
