"""Run settings read from a TOML file; command-line flags override them."""

from __future__ import annotations

import logging
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Optional

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

log = logging.getLogger(__name__)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Settings:
    max_bits: int = 4096
    enum_cap: int = 2_000_000
    tol_bits: int = 60
    threads: int = 1
    seed: int = 0

    def override(self, **values) -> "Settings":
        return replace(self, **{k: v for k, v in values.items() if v is not None})


def load_config(path: Optional[str] = None) -> Settings:
    """Settings from ``path``; a missing file yields the defaults."""
    if path is None:
        return Settings()
    p = Path(path)
    if not p.exists():
        return Settings()
    try:
        data = tomllib.loads(p.read_text())
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    known = {f.name: f for f in fields(Settings)}
    values = {}
    for key, value in data.items():
        if key not in known:
            log.warning("ignoring unknown config key %r in %s", key, path)
            continue
        if not isinstance(value, int) or isinstance(value, bool) or value < 0:
            raise ConfigError(f"{path}: {key} must be a nonnegative integer")
        values[key] = value
    return Settings(**values)
