import hashlib
import json
import logging
import os
import sys
from dataclasses import dataclass
from typing import Any, Optional

# -----------------------------------------------------------------------------
# Logging
# -----------------------------------------------------------------------------

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> logging.Logger:
    """Configures the logging for the application.

    Results go to stdout, so the console handler writes to stderr. A file
    handler is added when a log file is requested (argument or SUBMAX_LOG_FILE).
    """
    level = (level or os.environ.get("SUBMAX_LOG_LEVEL", "INFO")).upper()
    log_file = log_file or os.environ.get("SUBMAX_LOG_FILE")

    handlers = [logging.StreamHandler(sys.stderr)]
    if log_file:
        log_dir = os.path.dirname(log_file)
        if log_dir and not os.path.exists(log_dir):
            os.makedirs(log_dir)
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(level=level, format=LOG_FORMAT, handlers=handlers, force=True)
    return logging.getLogger("submax")


logger = logging.getLogger("submax")


# -----------------------------------------------------------------------------
# Errors
# -----------------------------------------------------------------------------

class SubmaxError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(SubmaxError):
    """Bad family, q, prime set or field parameters."""


class ConfigError(SubmaxError):
    """Unusable environment or command-line configuration."""


class CapExceededError(SubmaxError):
    def __init__(self, cap_name: str, requested: int, limit: int):
        self.cap_name = cap_name
        self.requested = requested
        self.limit = limit
        super().__init__(f"{cap_name} exceeded: {requested} > {limit}")


class BudgetExceededError(SubmaxError):
    def __init__(self, what: str, steps: int):
        self.what = what
        self.steps = steps
        super().__init__(f"search budget exhausted in {what} after {steps} steps")


class ConstructionError(SubmaxError):
    """A constructor produced a group that fails its order check."""


# -----------------------------------------------------------------------------
# Settings
# -----------------------------------------------------------------------------

DEFAULT_CAP_ELEMENTS = 200_000
DEFAULT_BUDGET_STEPS = 1_000_000


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}")
    if value <= 0:
        raise ConfigError(f"{name} must be positive, got {value}")
    return value


@dataclass(frozen=True)
class Settings:
    cap_elements: int = DEFAULT_CAP_ELEMENTS
    budget_steps: int = DEFAULT_BUDGET_STEPS

    @classmethod
    def from_env(cls) -> "Settings":
        return cls(
            cap_elements=_env_int("SUBMAX_CAP_ELEMENTS", DEFAULT_CAP_ELEMENTS),
            budget_steps=_env_int("SUBMAX_BUDGET_STEPS", DEFAULT_BUDGET_STEPS),
        )


_settings: Optional[Settings] = None


def get_settings() -> Settings:
    global _settings
    if _settings is None:
        _settings = Settings.from_env()
    return _settings


def set_settings(settings: Settings) -> None:
    global _settings
    _settings = settings


# -----------------------------------------------------------------------------
# Serialization helpers
# -----------------------------------------------------------------------------

def canonical_json(payload: Any) -> str:
    """Deterministic JSON: sorted keys, no whitespace variance, no floats expected."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def payload_digest(payload: Any) -> str:
    return hashlib.sha256(canonical_json(payload).encode("utf-8")).hexdigest()
