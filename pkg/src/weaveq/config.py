"""Runtime settings: logarithm base and dense-matrix capacity."""

from __future__ import annotations

import contextlib
import contextvars
import math
import os
from dataclasses import dataclass

#: Hard limit for set-partition minimization (Bell-number cost).
EXACT_CAP = 10

_DEFAULT_DENSE_CAP = 12


class WeaveqError(Exception):
    """Base class for library errors."""


class DomainError(WeaveqError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class CapacityError(WeaveqError):
    """The requested system is too large for dense evaluation."""


class PreconditionError(WeaveqError):
    """An operation's precondition on its input state is not met."""


@dataclass(frozen=True)
class Settings:
    log_base: str = "2"
    dense_cap: int = _DEFAULT_DENSE_CAP

    def __post_init__(self):
        if self.log_base not in ("2", "e"):
            raise DomainError(f"log base must be '2' or 'e', got {self.log_base!r}")
        if self.dense_cap < 1:
            raise DomainError("dense cap must be positive")


def _env_settings() -> Settings:
    raw = os.environ.get("WEAVEQ_DENSE_CAP")
    if raw is None:
        return Settings()
    try:
        return Settings(dense_cap=int(raw))
    except ValueError as exc:
        raise DomainError(f"WEAVEQ_DENSE_CAP must be a positive integer, got {raw!r}") from exc


_settings: contextvars.ContextVar[Settings] = contextvars.ContextVar("weaveq_settings")


def get_settings() -> Settings:
    try:
        return _settings.get()
    except LookupError:
        s = _env_settings()
        _settings.set(s)
        return s


@contextlib.contextmanager
def settings(**changes):
    """Temporarily override settings, e.g. ``with settings(log_base="e"): ...``."""
    current = get_settings()
    new = Settings(**{**current.__dict__, **changes})
    token = _settings.set(new)
    try:
        yield new
    finally:
        _settings.reset(token)


def set_settings(**changes) -> Settings:
    new = Settings(**{**get_settings().__dict__, **changes})
    _settings.set(new)
    return new


def unit_per_bit() -> float:
    """Multiplier taking an entropy in bits to the configured unit."""
    return 1.0 if get_settings().log_base == "2" else math.log(2.0)


def dense_cap() -> int:
    return get_settings().dense_cap
