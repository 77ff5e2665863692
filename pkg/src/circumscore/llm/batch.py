"""Bounded-concurrency batch classification with a resumable checkpoint."""
from __future__ import annotations

import json
import logging
import threading
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable

from ..complexity import PromptStrategy
from ..prompts import RenderedPrompt
from .providers import (
    AuthError,
    Provider,
    ProviderConfig,
    RateLimiter,
    RetriesExhaustedError,
    classify,
    get_provider,
    sha256_text,
)
from .verdict import Verdict

__all__ = [
    "BatchRecord",
    "BatchResult",
    "Checkpoint",
    "CheckpointCorruptError",
    "AllItemsFailedError",
    "checkpoint_key",
    "run_batch",
]

log = logging.getLogger(__name__)


class CheckpointCorruptError(Exception):
    pass


class AllItemsFailedError(Exception):
    def __init__(self, result: "BatchResult"):
        first = result.failures[0].error if result.failures else "no items"
        super().__init__(f"all {len(result.records)} items failed; first error: {first}")
        self.result = result


def checkpoint_key(prompt: RenderedPrompt, model_name: str, temperature: float) -> str:
    # item ids are part of the key: two narratives with identical text must
    # not share a cached answer
    return sha256_text(json.dumps(
        [prompt.circumstance_id, prompt.narrative_id, prompt.text, model_name, temperature]
    ))


@dataclass(frozen=True)
class BatchRecord:
    circumstance_id: str
    narrative_id: str
    strategy: PromptStrategy
    verdict: Verdict | None = None
    error: str | None = None
    attempts: int = 0
    from_checkpoint: bool = False

    @property
    def key(self) -> tuple[str, str]:
        return (self.circumstance_id, self.narrative_id)

    @property
    def ok(self) -> bool:
        return self.verdict is not None

    def to_dict(self) -> dict:
        d = {
            "circumstance_id": self.circumstance_id,
            "narrative_id": self.narrative_id,
            "strategy": self.strategy.value,
        }
        if self.verdict is not None:
            v = self.verdict
            d.update(
                decision=v.decision.value,
                evidence=v.evidence,
                attempts=v.attempts,
                raw_sha256=sha256_text(v.raw_response),
            )
            if v.reason:
                d["parse_reason"] = v.reason
        else:
            d.update(decision=None, error=self.error, attempts=self.attempts)
        return d


@dataclass(frozen=True)
class BatchResult:
    records: list[BatchRecord]

    @property
    def failures(self) -> list[BatchRecord]:
        return [r for r in self.records if not r.ok]

    @property
    def verdicts(self) -> dict[tuple[str, str], Verdict]:
        return {r.key: r.verdict for r in self.records if r.verdict is not None}

    @property
    def partial(self) -> bool:
        return bool(self.failures)


class Checkpoint:
    """Append-only JSONL of completed verdicts keyed by :func:`checkpoint_key`."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._done: dict[str, Verdict] = {}
        if self.path.exists():
            self._load()

    def _load(self) -> None:
        with open(self.path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    rec = json.loads(line)
                    self._done[rec["key"]] = Verdict.from_dict(rec["verdict"])
                except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                    raise CheckpointCorruptError(
                        f"{self.path}:{lineno}: unreadable checkpoint line ({exc})"
                    ) from None

    def __len__(self) -> int:
        return len(self._done)

    def get(self, key: str) -> Verdict | None:
        return self._done.get(key)

    def add(self, key: str, prompt: RenderedPrompt, verdict: Verdict) -> None:
        line = json.dumps(
            {
                "key": key,
                "circumstance_id": prompt.circumstance_id,
                "narrative_id": prompt.narrative_id,
                "verdict": verdict.to_dict(),
            },
            ensure_ascii=False,
        )
        with self._lock:
            self._done[key] = verdict
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")


def run_batch(
    prompts: Iterable[RenderedPrompt],
    config: ProviderConfig,
    provider: Provider | None = None,
    *,
    checkpoint: Checkpoint | str | Path | None = None,
    sleep: Callable[[float], None] | None = None,
) -> BatchResult:
    """Classify ``prompts`` with at most ``config.max_concurrency`` requests in flight.

    Items that fail are recorded, not raised, unless every item fails
    (:class:`AllItemsFailedError`). Output is sorted by
    ``(circumstance_id, narrative_id)``. An :class:`AuthError` aborts the batch.
    """
    prompts = list(prompts)
    if not prompts:
        raise ValueError("run_batch needs at least one prompt")
    seen: set[tuple[str, str]] = set()
    for p in prompts:
        if p.key in seen:
            raise ValueError(f"duplicate prompt key {p.key}")
        seen.add(p.key)

    provider = provider or get_provider(config)
    if checkpoint is not None and not isinstance(checkpoint, Checkpoint):
        checkpoint = Checkpoint(checkpoint)
    limiter = RateLimiter()
    kwargs = {} if sleep is None else {"sleep": sleep}

    records: list[BatchRecord] = []
    todo: list[tuple[str, RenderedPrompt]] = []
    for p in prompts:
        key = checkpoint_key(p, config.model_name, config.temperature)
        cached = checkpoint.get(key) if checkpoint is not None else None
        if cached is not None:
            records.append(BatchRecord(p.circumstance_id, p.narrative_id, p.strategy,
                                       cached, attempts=cached.attempts, from_checkpoint=True))
        else:
            todo.append((key, p))
    if records:
        log.info("checkpoint supplied %d of %d items", len(records), len(prompts))

    def work(key: str, p: RenderedPrompt) -> BatchRecord:
        try:
            verdict = classify(p, config, provider, limiter=limiter, **kwargs)
        except AuthError:
            raise
        except RetriesExhaustedError as exc:
            return BatchRecord(p.circumstance_id, p.narrative_id, p.strategy,
                               error=str(exc), attempts=exc.attempts)
        except Exception as exc:  # noqa: BLE001 - one bad item must not sink the batch
            return BatchRecord(p.circumstance_id, p.narrative_id, p.strategy,
                               error=f"{type(exc).__name__}: {exc}", attempts=1)
        if checkpoint is not None:
            checkpoint.add(key, p, verdict)
        return BatchRecord(p.circumstance_id, p.narrative_id, p.strategy,
                           verdict, attempts=verdict.attempts)

    if todo:
        pool = ThreadPoolExecutor(max_workers=config.max_concurrency)
        try:
            futures = [pool.submit(work, key, p) for key, p in todo]
            for fut in as_completed(futures):
                records.append(fut.result())
        except BaseException:
            pool.shutdown(wait=True, cancel_futures=True)
            raise
        pool.shutdown(wait=True)

    records.sort(key=lambda r: r.key)
    result = BatchResult(records)
    if all(not r.ok for r in records):
        raise AllItemsFailedError(result)
    return result
