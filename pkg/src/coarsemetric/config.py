"""Capacity limits, overridable through the environment.

Everything downstream of a ground set is enumerated exhaustively, so the
limits are small. They are read at call time so a caller (or a test) can
change the environment without re-importing.
"""

import os

GROUND_ENV = "COARSEMETRIC_MAX_GROUND"
HYPERSPACE_ENV = "COARSEMETRIC_MAX_HYPERSPACE"

DEFAULT_MAX_GROUND = 16
DEFAULT_MAX_HYPERSPACE = 4


def _read(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    value = int(raw)
    if value < 1:
        raise ValueError(f"{name} must be a positive integer, got {raw!r}")
    return value


def max_ground() -> int:
    return _read(GROUND_ENV, DEFAULT_MAX_GROUND)


def max_hyperspace_base() -> int:
    return _read(HYPERSPACE_ENV, DEFAULT_MAX_HYPERSPACE)
