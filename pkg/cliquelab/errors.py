"""Exceptions raised by the cliquelab library.

Outcomes a caller is expected to branch on (no progress, no embedding, no
diamond path) are returned as values; the classes here cover misuse,
malformed input, exhausted resource guards and broken internal invariants.
"""


class CliqueLabError(Exception):
    """Base class for every library error."""


class InputError(CliqueLabError, ValueError):
    """A precondition on the arguments does not hold."""


class GraphParseError(InputError):
    """A graph, partition or tiling file could not be parsed."""

    def __init__(self, message: str, line_number: int | None = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class ResourceGuardError(CliqueLabError):
    """An explicit scale guard was exceeded."""

    def __init__(self, guard: str, limit: int, detail: str = ""):
        self.guard = guard
        self.limit = limit
        message = f"{guard} exceeded (limit {limit})"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


class InvariantViolation(CliqueLabError, AssertionError):
    """An internal invariant failed; results must not be trusted."""
