"""
Environment configuration for esmin.

This module handles all environment variables configuration with sensible defaults
and types conversion. Nothing is required: every variable has a default.
"""

from dataclasses import dataclass
import os
from pathlib import Path

from esmin.errors import ConfigError


def _int_var(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from None
    if value <= 0:
        raise ConfigError(f"{name} must be positive, got {value}")
    return value


@dataclass
class EsminConfig:
    """Configuration for the esmin library, command line and tool server.

    Values are read from the environment on every access, so a ``.env`` file loaded
    by the entry points (or a test's monkeypatch) takes effect immediately.

    Optional environment variables:
        "ESMIN_TRIPLE_CAP": Max triples in a bisimulation universe (default: 1000000)
        "ESMIN_PARTITION_CAP": Max candidate partitions inspected by minimize (default: 200000)
        "ESMIN_LOG_LEVEL": Log level for the command line and server (default: WARNING)
        "ESMIN_FIXTURE_DIR": Extra directory searched for fixtures (optional)
    """

    @property
    def triple_cap(self) -> int:
        """Get the bisimulation universe cap.

        Default: 10**6 triples.
        """
        return _int_var("ESMIN_TRIPLE_CAP", 1_000_000)

    @property
    def partition_cap(self) -> int:
        """Get the cap on candidate partitions during minimisation.

        Default: 200000 partitions.
        """
        return _int_var("ESMIN_PARTITION_CAP", 200_000)

    @property
    def log_level(self) -> str:
        """Get the log level name.

        Default: WARNING
        """
        return os.getenv("ESMIN_LOG_LEVEL", "WARNING").upper()

    @property
    def fixture_dir(self) -> Path | None:
        """Get the extra fixture directory, if any."""
        raw = os.getenv("ESMIN_FIXTURE_DIR")
        return Path(raw) if raw else None


# Global instance for easy access
config = EsminConfig()
