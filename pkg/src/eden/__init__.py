"""Deterministic survival-world environments, metrics, and serving tools."""

__version__ = "0.1.0"

from .config import WorldConfig, parse_config, preset, serialize_config, validate
from .engine import WorldState, new_world, step, vision_radius

__all__ = [
    "WorldConfig",
    "WorldState",
    "new_world",
    "parse_config",
    "preset",
    "serialize_config",
    "step",
    "validate",
    "__version__",
]
