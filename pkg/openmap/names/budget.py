"""Explicit budgets for truncated searches, and the ``NotYet`` outcome."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Any

from openmap.const import (
    BUDGET_SCHEMA,
    CONF_MAX_DEPTH,
    CONF_MAX_PRECISION,
    CONF_MAX_PREFIX,
    DEFAULT_MAX_DEPTH,
    DEFAULT_MAX_PRECISION,
    DEFAULT_MAX_PREFIX,
    PREFIX_STEP,
)


@dataclass(frozen=True, slots=True)
class NotYet:
    """A semidecision that did not conclude within its budget. Not an error, and not a 'no'."""

    reason: str = "budget exhausted"


@dataclass(frozen=True, slots=True)
class Budget:
    max_prefix: int = DEFAULT_MAX_PREFIX
    max_depth: int = DEFAULT_MAX_DEPTH
    max_precision: int = DEFAULT_MAX_PRECISION

    def __post_init__(self) -> None:
        if min(self.max_prefix, self.max_depth, self.max_precision) < 0:
            raise ValueError(f"Invalid budget: {self!r}")

    @classmethod
    def from_config(cls, config: dict[str, Any]) -> Budget:
        data = BUDGET_SCHEMA(config)
        return cls(data[CONF_MAX_PREFIX], data[CONF_MAX_DEPTH], data[CONF_MAX_PRECISION])

    def as_config(self) -> dict[str, int]:
        return {CONF_MAX_PREFIX: self.max_prefix, CONF_MAX_DEPTH: self.max_depth, CONF_MAX_PRECISION: self.max_precision}

    def at_level(self, level: int) -> Budget:
        """Effort spent at subdivision level (or stage) ``level`` of a derived enumeration, capped by this budget."""
        return replace(
            self,
            max_prefix=min(self.max_prefix, PREFIX_STEP << level),
            max_depth=min(self.max_depth, level + 2),
        )

    def deeper(self, extra: int) -> Budget:
        return replace(self, max_depth=self.max_depth + extra)
