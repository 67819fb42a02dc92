"""Service configuration from a YAML file with environment overrides.

Recognized keys: host, port, data_dir, idle_timeout_s. Environment
variables ACCORD_HOST, ACCORD_PORT, ACCORD_DATA_DIR and
ACCORD_IDLE_TIMEOUT_S override the file. Unknown keys are startup errors,
named explicitly, never ignored.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields
from pathlib import Path

import yaml

ENV_PREFIX = "ACCORD_"


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8780
    data_dir: Path = Path("data")
    idle_timeout_s: float = 1800.0


_COERCE = {
    "host": str,
    "port": int,
    "data_dir": Path,
    "idle_timeout_s": float,
}


def _coerce(key: str, value) -> object:
    if isinstance(value, bool):
        raise ConfigError(f"config key {key!r} has a boolean value, expected {_COERCE[key].__name__}")
    try:
        return _COERCE[key](value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"config key {key!r}: {exc}") from None


def load_config(path: Path | str | None = None, env=None) -> ServiceConfig:
    values: dict[str, object] = {}
    known = {f.name for f in fields(ServiceConfig)}
    if path is not None:
        try:
            raw = yaml.safe_load(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from None
        except yaml.YAMLError as exc:
            raise ConfigError(f"config file is not valid YAML: {exc}") from None
        if raw is None:
            raw = {}
        if not isinstance(raw, dict):
            raise ConfigError("config file must be a mapping of keys to values")
        for key, value in raw.items():
            if key not in known:
                raise ConfigError(f"unknown config key {key!r}")
            values[key] = _coerce(key, value)
    environment = os.environ if env is None else env
    for key in known:
        override = environment.get(ENV_PREFIX + key.upper())
        if override is not None:
            values[key] = _coerce(key, override)
    return ServiceConfig(**values)
