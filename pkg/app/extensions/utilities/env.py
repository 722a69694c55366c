"""
Typed access to the environment variables `settings.py` is configured from. Every reader takes an optional default,
used when the variable is missing or empty; without one, a missing variable raises `KeyError`.
"""

import os
from pathlib import Path
from typing import Optional, TypeVar


ENV = os.environ


T = TypeVar("T")


def _get_value(var: str, default: Optional[T] = None) -> str | T:
    try:
        value = ENV[var]
        # We take defaults if available for empty values
        if len(value) == 0 and default is not None:
            return default
        return value
    except KeyError:
        if default is None:
            raise
        return default


def as_string(var: str, default: Optional[str] = None) -> str:
    return _get_value(var, default)


def as_int(var: str, default: Optional[int] = None) -> int:
    return int(_get_value(var, default))


def as_float(var: str, default: Optional[float] = None) -> float:
    """Scientific notation (`1e-10`) is accepted."""
    return float(_get_value(var, default))


def as_bool(var: str, default: Optional[bool] = None) -> bool:
    """We accept "true", "True", (etc), "t", "T", "1" as `True`, and everything else as `False`."""
    value = _get_value(var, default)
    if isinstance(value, str):
        return value.lower() in ["true", "1", "t"]
    return value


def as_path(var: str) -> Optional[Path]:
    """Optional folders and files: `None` when the variable is missing or only whitespace."""
    value = ENV.get(var, "").strip()
    return Path(value) if value else None


def split_list(value: str) -> list[str]:
    """Split a comma separated string, stripping all values and removing empty ones."""
    retval: list[str] = []
    for val in value.split(","):
        v = val.strip()
        if v:
            retval.append(v)
    return retval
