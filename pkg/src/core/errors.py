"""Exception hierarchy for quarry.

Library code raises these; ``QuarryApp`` turns them into per-query outcomes so a
single bad query never stops the batch.
"""

from __future__ import annotations


class QuarryError(Exception):
    """Base class for every error quarry raises on purpose."""


class ConfigError(QuarryError):
    """Invalid configuration value."""


class LoadError(QuarryError):
    """Malformed N-Triples input."""

    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class ParseError(QuarryError):
    """Query text outside the supported SPARQL subset. Positions are 1-based."""

    def __init__(self, message: str, line: int, column: int):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"{message} at line {line}, column {column}")


class ContractError(QuarryError):
    """A caller broke an operation's pre-condition."""


class QueryTimeout(QuarryError):
    """Evaluation ran past its deadline."""

    def __init__(self, budget_us: int):
        self.budget_us = budget_us
        super().__init__(f"query exceeded {budget_us} us")
