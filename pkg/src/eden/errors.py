"""Exception types shared across the package."""

from __future__ import annotations


class EdenError(Exception):
    """Base class for all package errors."""


class ConfigError(EdenError):
    """Config document is malformed or violates the schema.

    `path` locates the offending key, e.g. "world.life_limit".
    """

    def __init__(self, message: str, path: str = "") -> None:
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class GenerationError(EdenError):
    """World generation could not satisfy a placement requirement."""


class ContractError(EdenError):
    """An operation was called outside its contract (e.g. stepping a done world)."""


class UnreachableThresholdError(EdenError):
    """A completion-probability threshold cannot be met within the search bound."""
