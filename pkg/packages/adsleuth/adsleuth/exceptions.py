"""Exceptions for the adsleuth library."""

from __future__ import annotations


class AdSleuthError(Exception):
    """Base exception for all adsleuth errors."""


class GraphFormatError(AdSleuthError):
    """A UTG, app-model or config document is malformed.

    ``path`` locates the offending element (``states[2].view_tree.nodes[0].z``);
    ``line``/``column`` are set for JSON syntax errors.
    """

    def __init__(
        self,
        message: str,
        *,
        path: str = "$",
        line: int | None = None,
        column: int | None = None,
    ) -> None:
        where = path
        if line is not None:
            where = f"{path} (line {line}, column {column})"
        super().__init__(f"{where}: {message}")
        self.path = path
        self.line = line
        self.column = column


class GraphValidationError(AdSleuthError):
    """A graph violates the UTG invariants."""

    def __init__(self, violations: list[str]) -> None:
        summary = "; ".join(violations[:5])
        more = f" (+{len(violations) - 5} more)" if len(violations) > 5 else ""
        super().__init__(f"Invalid graph: {summary}{more}")
        self.violations = violations


class ConfigError(AdSleuthError):
    """Invalid detector, rule, exploration or fault configuration."""


class TrafficFormatError(AdSleuthError):
    """Traffic record content cannot be interpreted (e.g. bad hex magic)."""


class BenchmarkError(AdSleuthError):
    """Benchmark generator arguments are inconsistent."""
