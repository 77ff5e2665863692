"""Chat-completion providers and the single-request classify call."""
from __future__ import annotations

import hashlib
import json
import logging
import os
import random
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Protocol

import httpx

from ..prompts import RenderedPrompt
from .verdict import Verdict, parse_verdict

__all__ = [
    "ProviderConfig",
    "Provider",
    "ProviderError",
    "TransientProviderError",
    "ProviderTimeout",
    "RateLimitError",
    "AuthError",
    "RetriesExhaustedError",
    "MockProvider",
    "MockScriptError",
    "OpenAICompatibleProvider",
    "RateLimiter",
    "get_provider",
    "classify",
    "sha256_text",
]

log = logging.getLogger(__name__)

DEFAULT_BASE_URLS = {
    "openai": "https://api.openai.com/v1",
    "gemini": "https://generativelanguage.googleapis.com/v1beta/openai",
    "together": "https://api.together.xyz/v1",
    "groq": "https://api.groq.com/openai/v1",
}
DEFAULT_MOCK_RESPONSE = 'EVIDENCE: "None found"\nFINAL CODING: No'


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class ProviderError(Exception):
    """Non-retryable provider failure."""


class TransientProviderError(ProviderError):
    """Failure worth retrying (connection reset, 5xx, rate limit, timeout)."""


class ProviderTimeout(TransientProviderError):
    pass


class RateLimitError(TransientProviderError):
    def __init__(self, msg: str, retry_after: float | None = None):
        super().__init__(msg)
        self.retry_after = retry_after


class AuthError(ProviderError):
    pass


class RetriesExhaustedError(ProviderError):
    def __init__(self, attempts: int, last_error: Exception):
        super().__init__(f"gave up after {attempts} attempts: {last_error}")
        self.attempts = attempts
        self.last_error = last_error


@dataclass(frozen=True)
class ProviderConfig:
    provider_name: str = "mock"
    model_name: str = "mock"
    temperature: float = 0.3
    max_concurrency: int = 4
    max_retries: int = 3
    request_timeout: float = 60.0
    base_url: str | None = None
    api_key_source: str | None = None
    max_tokens: int | None = None
    backoff_base: float = 1.0
    backoff_max: float = 30.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError(f"temperature must be in [0, 2], got {self.temperature}")
        if self.max_concurrency < 1:
            raise ValueError("max_concurrency must be >= 1")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.request_timeout <= 0:
            raise ValueError("request_timeout must be positive")

    @property
    def api_key_env(self) -> str:
        if self.api_key_source:
            return self.api_key_source
        return self.provider_name.upper().replace("-", "_") + "_API_KEY"

    @property
    def base_url_env(self) -> str:
        return self.provider_name.upper().replace("-", "_") + "_BASE_URL"


class Provider(Protocol):
    def complete(self, prompt: RenderedPrompt, config: ProviderConfig) -> str: ...


class MockScriptError(ValueError):
    pass


class MockProvider:
    """Offline provider answering from a script.

    Script lines are JSON objects ``{"match": {"prompt_sha256": ...}, "response": ...}``
    or ``{"match": {"narrative_id": ...}, "response": ...}``. A prompt hash
    match takes precedence over a narrative id match; anything unmatched gets
    ``default_response``.
    """

    def __init__(
        self,
        by_narrative: dict[str, str] | None = None,
        by_prompt_sha256: dict[str, str] | None = None,
        default_response: str = DEFAULT_MOCK_RESPONSE,
    ):
        self.by_narrative = dict(by_narrative or {})
        self.by_prompt_sha256 = dict(by_prompt_sha256 or {})
        self.default_response = default_response
        self.calls = 0
        self._lock = threading.Lock()

    @classmethod
    def from_script(cls, path: str | Path, default_response: str = DEFAULT_MOCK_RESPONSE) -> "MockProvider":
        by_narrative: dict[str, str] = {}
        by_hash: dict[str, str] = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    rec = json.loads(line)
                    match, response = rec["match"], rec["response"]
                except (json.JSONDecodeError, KeyError, TypeError) as exc:
                    raise MockScriptError(f"{path}:{lineno}: bad script line ({exc})") from None
                if not isinstance(response, str) or not isinstance(match, dict) or len(match) != 1:
                    raise MockScriptError(f"{path}:{lineno}: match needs exactly one key")
                (kind, value), = match.items()
                table = {"narrative_id": by_narrative, "prompt_sha256": by_hash}.get(kind)
                if table is None:
                    raise MockScriptError(f"{path}:{lineno}: unknown match key {kind!r}")
                if value in table:
                    raise MockScriptError(f"{path}:{lineno}: duplicate match {kind}={value!r}")
                table[value] = response
        return cls(by_narrative, by_hash, default_response)

    def complete(self, prompt: RenderedPrompt, config: ProviderConfig) -> str:
        with self._lock:
            self.calls += 1
        digest = sha256_text(prompt.text)
        if digest in self.by_prompt_sha256:
            return self.by_prompt_sha256[digest]
        return self.by_narrative.get(prompt.narrative_id, self.default_response)


class OpenAICompatibleProvider:
    """``POST {base_url}/chat/completions`` with a single user message."""

    def __init__(self, api_key: str, base_url: str, transport: httpx.BaseTransport | None = None):
        self.api_key = api_key
        self.base_url = base_url.rstrip("/")
        self._client = httpx.Client(transport=transport)

    def close(self) -> None:
        self._client.close()

    def complete(self, prompt: RenderedPrompt, config: ProviderConfig) -> str:
        payload: dict = {
            "model": config.model_name,
            "messages": [{"role": "user", "content": prompt.text}],
            "temperature": config.temperature,
        }
        if config.max_tokens is not None:
            payload["max_tokens"] = config.max_tokens
        try:
            resp = self._client.post(
                f"{self.base_url}/chat/completions",
                json=payload,
                headers={"Authorization": f"Bearer {self.api_key}"},
                timeout=config.request_timeout,
            )
        except httpx.TimeoutException as exc:
            raise ProviderTimeout(f"request timed out: {exc}") from exc
        except httpx.TransportError as exc:
            raise TransientProviderError(f"transport error: {exc}") from exc

        status = resp.status_code
        if status in (401, 403):
            raise AuthError(f"HTTP {status}: {resp.text[:300]}")
        if status == 429:
            retry_after = resp.headers.get("retry-after")
            try:
                wait = float(retry_after) if retry_after else None
            except ValueError:
                wait = None
            raise RateLimitError("HTTP 429 rate limited", wait)
        if status == 408 or status >= 500:
            raise TransientProviderError(f"HTTP {status}: {resp.text[:300]}")
        if status >= 400:
            raise ProviderError(f"HTTP {status}: {resp.text[:300]}")
        try:
            content = resp.json()["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise TransientProviderError(f"malformed completion body: {exc}") from exc
        return content or ""


def get_provider(config: ProviderConfig, *, mock_script: str | Path | None = None,
                 mock_default: str = DEFAULT_MOCK_RESPONSE) -> Provider:
    """Build the provider named in ``config``.

    Live providers read their key from ``config.api_key_env``; a missing key
    raises :class:`AuthError` before any request is made.
    """
    if config.provider_name == "mock":
        if mock_script is not None:
            return MockProvider.from_script(mock_script, mock_default)
        return MockProvider(default_response=mock_default)
    api_key = os.environ.get(config.api_key_env)
    if not api_key:
        raise AuthError(f"environment variable {config.api_key_env} is not set")
    base_url = (
        config.base_url
        or os.environ.get(config.base_url_env)
        or DEFAULT_BASE_URLS.get(config.provider_name)
    )
    if not base_url:
        raise ProviderError(
            f"no base URL for provider {config.provider_name!r}; "
            f"pass --base-url or set {config.base_url_env}"
        )
    return OpenAICompatibleProvider(api_key, base_url)


@dataclass
class RateLimiter:
    """Shared cooldown: a 429 seen by one worker pauses all of them."""

    _until: float = 0.0
    _lock: threading.Lock = field(default_factory=threading.Lock)

    def pause(self, seconds: float) -> None:
        with self._lock:
            self._until = max(self._until, time.monotonic() + seconds)

    def remaining(self) -> float:
        with self._lock:
            return max(0.0, self._until - time.monotonic())


def _backoff(attempt: int, config: ProviderConfig, rng: random.Random) -> float:
    cap = min(config.backoff_max, config.backoff_base * 2 ** (attempt - 1))
    return cap / 2 + rng.uniform(0, cap / 2)


def classify(
    prompt: RenderedPrompt,
    config: ProviderConfig,
    provider: Provider | None = None,
    *,
    limiter: RateLimiter | None = None,
    sleep: Callable[[float], None] = time.sleep,
    rng: random.Random | None = None,
) -> Verdict:
    """Send one prompt, retrying transient failures, and parse the reply.

    Raises AuthError or ProviderError immediately, and RetriesExhaustedError
    once ``max_retries`` retries have failed.
    """
    provider = provider or get_provider(config)
    rng = rng or random.Random()
    attempt = 0
    while True:
        attempt += 1
        if limiter is not None and (wait := limiter.remaining()) > 0:
            sleep(wait)
        try:
            raw = provider.complete(prompt, config)
        except TransientProviderError as exc:
            if attempt > config.max_retries:
                raise RetriesExhaustedError(attempt, exc) from exc
            delay = _backoff(attempt, config, rng)
            if isinstance(exc, RateLimitError):
                if exc.retry_after is not None:
                    delay = max(delay, exc.retry_after)
                if limiter is not None:
                    limiter.pause(delay)
            log.debug("attempt %d for %s failed (%s); sleeping %.2fs", attempt, prompt.key, exc, delay)
            sleep(delay)
            continue
        return parse_verdict(raw).with_attempts(attempt)
