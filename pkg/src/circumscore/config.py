"""Run configuration: defaults, TOML config file loading and the config hash."""
from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .complexity import DEFAULT_THRESHOLD
from .evaluation.analysis import DEFAULT_TIE_EPSILON
from .llm.providers import ProviderConfig
from .prompts import DEFAULT_TRUNCATION

__all__ = ["ConfigError", "RunConfig", "load_config_file", "HASHED_FIELDS"]

# settings that change results; paths, concurrency and retry policy do not
HASHED_FIELDS = (
    "provider", "model", "temperature", "threshold", "truncation_limit",
    "n_pos", "n_neg", "seed",
)


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    provider: str = "mock"
    model: str = "mock"
    temperature: float = 0.3
    max_concurrency: int = 4
    max_retries: int = 3
    request_timeout: float = 60.0
    base_url: str | None = None
    api_key_env: str | None = None
    threshold: int = DEFAULT_THRESHOLD
    tie_epsilon: float = DEFAULT_TIE_EPSILON
    truncation_limit: int = DEFAULT_TRUNCATION
    n_pos: int = 100
    n_neg: int = 100
    seed: int = 42
    manual: Path | None = None
    corpus: Path | None = None
    out_dir: Path | None = None
    lenient: bool = False

    def provider_config(self) -> ProviderConfig:
        try:
            return ProviderConfig(
                provider_name=self.provider,
                model_name=self.model,
                temperature=self.temperature,
                max_concurrency=self.max_concurrency,
                max_retries=self.max_retries,
                request_timeout=self.request_timeout,
                base_url=self.base_url,
                api_key_source=self.api_key_env,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def hashed(self) -> dict[str, Any]:
        d = asdict(self)
        return {k: d[k] for k in HASHED_FIELDS}

    def config_hash(self) -> str:
        blob = json.dumps(self.hashed(), sort_keys=True)
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]

    def validate(self) -> None:
        if self.truncation_limit < 1:
            raise ConfigError("truncation_limit must be >= 1")
        if self.n_pos < 1 or self.n_neg < 1:
            raise ConfigError("sample sizes must be positive")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.tie_epsilon < 0:
            raise ConfigError("tie_epsilon must be >= 0")
        self.provider_config()
        for name in ("manual", "corpus"):
            p = getattr(self, name)
            if p is not None and not Path(p).exists():
                raise ConfigError(f"{name} path does not exist: {p}")


_SECRET_HINTS = ("api_key", "token", "secret", "password")


def load_config_file(path: str | Path) -> dict[str, Any]:
    """Read a flat TOML document of ``key = value`` settings.

    Keys use the long-option spelling with underscores (``max_concurrency``).
    Secrets are refused; they belong in environment variables.
    """
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    flat: dict[str, Any] = {}
    for key, value in data.items():
        if isinstance(value, dict):
            raise ConfigError(f"{path}: tables are not supported ([{key}])")
        if any(h in key for h in _SECRET_HINTS) and key != "api_key_env":
            raise ConfigError(f"{path}: {key!r} looks like a secret; use an environment variable")
        flat[key.replace("-", "_")] = value
    return flat
