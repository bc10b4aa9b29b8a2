"""Run configuration and the flat ``key = value`` config format."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

MAX_SEED = 2**64 - 1


class ConfigError(ValueError):
    """Invalid configuration. ``line`` is set when parsing a document."""

    def __init__(self, message: str, line: int | None = None, key: str | None = None):
        self.line = line
        self.key = key
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


@dataclass(frozen=True)
class RunConfig:
    width: int = 10
    height: int = 10
    iterations: int = 100
    broadcast_enabled: bool = False
    leader_p_invent: float = 1 / 6
    follower_p_invent: float = 1 / 6
    leader_r_change: float = 1 / 3
    follower_r_change: float = 1 / 3
    alpha: float = 0.1
    epsilon: float = 0.1
    seed: int = 0

    def validate(self) -> RunConfig:
        if self.width < 1 or self.height < 1:
            key = "width" if self.width < 1 else "height"
            raise ConfigError(f"grid dimensions must be positive, got {self.width}x{self.height}", key=key)
        if self.width * self.height < 4:
            raise ConfigError("width * height must be at least 4", key="width")
        if self.iterations < 1:
            raise ConfigError(f"iterations must be >= 1, got {self.iterations}", key="iterations")
        for key in ("leader_p_invent", "follower_p_invent"):
            v = getattr(self, key)
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"{key} must be in [0, 1], got {v}", key=key)
        for key in ("leader_r_change", "follower_r_change", "alpha"):
            v = getattr(self, key)
            if not 0.0 < v <= 1.0:
                raise ConfigError(f"{key} must be in (0, 1], got {v}", key=key)
        if not self.epsilon > 0.0:
            raise ConfigError(f"epsilon must be > 0, got {self.epsilon}", key="epsilon")
        if not 0 <= self.seed <= MAX_SEED:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}", key="seed")
        return self

    def replace(self, **changes) -> RunConfig:
        return dataclasses.replace(self, **changes)


FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(RunConfig)}

_TRUE = {"true", "yes", "on", "1"}
_FALSE = {"false", "no", "off", "0"}


def convert_value(key: str, raw: str):
    """Convert a raw string to the type of RunConfig field ``key``."""
    if key not in FIELD_TYPES:
        raise ConfigError(f"unknown key '{key}'", key=key)
    kind = FIELD_TYPES[key]
    raw = raw.strip()
    try:
        if kind == "bool":
            low = raw.lower()
            if low in _TRUE:
                return True
            if low in _FALSE:
                return False
            raise ValueError
        if kind == "int":
            return int(raw, 0)
        return float(raw)
    except ValueError:
        raise ConfigError(f"invalid {kind} value for '{key}': {raw!r}", key=key) from None


def parse_config(text: str, **overrides) -> RunConfig:
    """Parse a flat ``key = value`` document; ``#`` starts a comment.

    Missing keys take the RunConfig defaults. ``overrides`` are applied on
    top (e.g. a ``--seed`` flag) before validation.
    """
    values: dict = {}
    key_lines: dict[str, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"malformed line, expected 'key = value': {line!r}", line=lineno)
        key, raw = (part.strip() for part in line.split("=", 1))
        if not key or not raw:
            raise ConfigError(f"malformed line, expected 'key = value': {line!r}", line=lineno)
        if key in values:
            raise ConfigError(f"duplicate key '{key}'", line=lineno, key=key)
        try:
            values[key] = convert_value(key, raw)
        except ConfigError as exc:
            raise ConfigError(str(exc), line=lineno, key=key) from None
        key_lines[key] = lineno
    values.update({k: v for k, v in overrides.items() if v is not None})
    config = RunConfig(**values)
    try:
        config.validate()
    except ConfigError as exc:
        raise ConfigError(str(exc), line=key_lines.get(exc.key), key=exc.key) from None
    return config
