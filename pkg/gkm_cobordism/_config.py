"""
Run configuration data class.

Every CLI command receives a ``RunConfig`` instead of reading flags and
environment variables on its own.  ``config_from_env`` fills one from
``GKM_COBORDISM_*`` variables (a ``.env`` file is honoured).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional

from dotenv import find_dotenv, load_dotenv

from .errors import ConfigError

DEFAULT_ORDER = 8
MIN_ORDER = 3
MAX_ORDER = 16
"""Number of Lazard log generators m_1..m_16 the series rings carry."""

VALID_FORMATS = ("text", "json")
VALID_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def _get_env_str(name: str, default: Optional[str] = None) -> Optional[str]:
    value = os.getenv(name)
    if value is None or not value.strip():
        return default
    return value.strip()


def _get_env_int(name: str, default: int, *, min_v: int = MIN_ORDER, max_v: int = MAX_ORDER) -> int:
    raw = os.getenv(name)
    if raw is None or str(raw).strip() == "":
        return default
    try:
        v = int(str(raw).strip(), 10)
        return max(min_v, min(max_v, v))
    except ValueError:
        return default


@dataclass
class RunConfig:
    """Settings shared by all subcommands.

    .. rubric:: Usage

    ::

        cfg = RunConfig(order=6, law="additive", output_format="json")
        cfg.validate()
    """

    # ── Truncation ────────────────────────────────────────────────────
    order: int = DEFAULT_ORDER
    """Truncation order D in the torus variables."""

    # ── Formal group law ──────────────────────────────────────────────
    law: str = "universal"
    """``universal``, ``additive`` or ``multiplicative:<beta>``."""

    # ── Output ────────────────────────────────────────────────────────
    output_format: str = "text"
    """``text`` or ``json``."""

    output_path: Optional[str] = None
    """Write results here instead of stdout."""

    log_level: str = "WARNING"

    # ── Horospherical builder ─────────────────────────────────────────
    force_kind: Optional[str] = None
    """Surface kind override (``P2:V01``, ``P2:V2``, ``F0``, ``F<n>``)."""

    def validate(self) -> "RunConfig":
        if not MIN_ORDER <= self.order <= MAX_ORDER:
            raise ConfigError(
                f"order must lie in [{MIN_ORDER}, {MAX_ORDER}], got {self.order}"
            )
        if self.output_format not in VALID_FORMATS:
            raise ConfigError(f"unknown output format {self.output_format!r}")
        if self.log_level.upper() not in VALID_LOG_LEVELS:
            raise ConfigError(f"unknown log level {self.log_level!r}")
        # Imported here: the fgl module imports this one for MAX_ORDER.
        from .algebra.fgl import parse_law

        try:
            parse_law(self.law)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return self


def config_from_env() -> RunConfig:
    """Build a ``RunConfig`` from ``GKM_COBORDISM_*`` environment variables."""
    # .env next to where the command runs, not next to the package
    load_dotenv(find_dotenv(usecwd=True))
    return RunConfig(
        order=_get_env_int("GKM_COBORDISM_ORDER", DEFAULT_ORDER),
        law=_get_env_str("GKM_COBORDISM_LAW", "universal"),
        output_format=_get_env_str("GKM_COBORDISM_FORMAT", "text"),
        log_level=_get_env_str("GKM_COBORDISM_LOG_LEVEL", "WARNING").upper(),
    )
