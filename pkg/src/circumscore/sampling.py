"""Streaming corpus reader and seeded balanced sampling.

Corpus files are JSONL, one narrative per line::

    {"narrative_id": "n0001", "text": "...", "labels": {"argument": true, ...}}

Sampling is reservoir sampling (Algorithm R), one reservoir per label
stratum, driven by a Mersenne Twister (``random.Random``) seeded from
``sha256(f"{seed}:{circumstance_id}")``. Each circumstance therefore has its
own stream and a multi-circumstance pass selects exactly what single
circumstance passes would.
"""
from __future__ import annotations

import hashlib
import json
import logging
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Iterator

__all__ = [
    "LabeledNarrative",
    "EvaluationSample",
    "CorpusError",
    "CorpusNotFoundError",
    "MalformedLineError",
    "UnknownCircumstanceError",
    "ZeroPositivesError",
    "SampleFileError",
    "CorpusReader",
    "load_corpus",
    "balanced_sample",
    "sample_many",
    "write_sample",
    "read_sample",
    "derive_seed",
]

log = logging.getLogger(__name__)


class CorpusError(Exception):
    pass


class CorpusNotFoundError(CorpusError):
    pass


class MalformedLineError(CorpusError):
    def __init__(self, path: str, lineno: int, why: str):
        super().__init__(f"{path}: line {lineno}: {why}")
        self.lineno = lineno


class UnknownCircumstanceError(CorpusError):
    pass


class ZeroPositivesError(CorpusError):
    pass


class SampleFileError(Exception):
    pass


@dataclass(frozen=True)
class LabeledNarrative:
    narrative_id: str
    text: str
    labels: dict[str, bool] = field(default_factory=dict)


@dataclass(frozen=True)
class EvaluationSample:
    circumstance_id: str
    entries: tuple[tuple[str, bool], ...]
    requested_pos: int
    requested_neg: int
    seed: int
    under_sampled: bool = False
    corpus_sha256: str | None = None
    available_pos: int | None = None
    available_neg: int | None = None

    @property
    def positives(self) -> list[str]:
        return [nid for nid, label in self.entries if label]

    @property
    def negatives(self) -> list[str]:
        return [nid for nid, label in self.entries if not label]

    @property
    def labels(self) -> dict[str, bool]:
        return dict(self.entries)

    def header(self) -> dict[str, Any]:
        return {
            "circumstance_id": self.circumstance_id,
            "seed": self.seed,
            "corpus_sha256": self.corpus_sha256,
            "requested_pos": self.requested_pos,
            "requested_neg": self.requested_neg,
            "under_sampled": self.under_sampled,
            "available_pos": self.available_pos,
            "available_neg": self.available_neg,
        }


def _parse_record(obj: Any) -> LabeledNarrative:
    if not isinstance(obj, dict):
        raise ValueError("expected a JSON object")
    nid, text, labels = obj.get("narrative_id"), obj.get("text"), obj.get("labels")
    if not isinstance(nid, str) or not nid:
        raise ValueError("narrative_id must be a nonempty string")
    if not isinstance(text, str):
        raise ValueError("text must be a string")
    if not isinstance(labels, dict) or not all(
        isinstance(k, str) and isinstance(v, bool) for k, v in labels.items()
    ):
        raise ValueError("labels must map circumstance ids to true/false")
    return LabeledNarrative(nid, text, labels)


class CorpusReader:
    """Iterate a JSONL corpus lazily.

    With ``strict=False`` malformed lines are skipped and counted in
    :attr:`skipped`. :attr:`sha256` is the digest of the file bytes, available
    once a pass has finished.
    """

    def __init__(self, path: str | Path, strict: bool = True):
        self.path = Path(path)
        self.strict = strict
        self.skipped = 0
        self.skipped_lines: list[int] = []
        self.sha256: str | None = None
        if not self.path.is_file():
            raise CorpusNotFoundError(f"corpus file not found: {self.path}")

    def __iter__(self) -> Iterator[LabeledNarrative]:
        digest = hashlib.sha256()
        seen: set[str] = set()
        self.skipped = 0
        self.skipped_lines = []
        with open(self.path, "rb") as fh:
            for lineno, raw in enumerate(fh, 1):
                digest.update(raw)
                if not raw.strip():
                    continue
                try:
                    rec = _parse_record(json.loads(raw.decode("utf-8")))
                    if rec.narrative_id in seen:
                        raise ValueError(f"duplicate narrative_id {rec.narrative_id!r}")
                except (ValueError, UnicodeDecodeError) as exc:
                    if self.strict:
                        raise MalformedLineError(str(self.path), lineno, str(exc)) from None
                    self.skipped += 1
                    self.skipped_lines.append(lineno)
                    log.warning("%s: skipping line %d (%s)", self.path, lineno, exc)
                    continue
                seen.add(rec.narrative_id)
                yield rec
        self.sha256 = digest.hexdigest()


def load_corpus(path: str | Path, strict: bool = True) -> CorpusReader:
    return CorpusReader(path, strict)


def derive_seed(seed: int, circumstance_id: str) -> int:
    h = hashlib.sha256(f"{seed}:{circumstance_id}".encode("utf-8")).digest()
    return int.from_bytes(h[:8], "big")


class _Reservoir:
    def __init__(self, k: int, rng: random.Random):
        self.k = k
        self.rng = rng
        self.seen = 0
        self.items: list[tuple[int, str]] = []

    def offer(self, order: int, nid: str) -> None:
        self.seen += 1
        if len(self.items) < self.k:
            self.items.append((order, nid))
            return
        j = self.rng.randrange(self.seen)
        if j < self.k:
            self.items[j] = (order, nid)

    def chosen(self) -> list[str]:
        return [nid for _, nid in sorted(self.items)]


class _Stratified:
    def __init__(self, circumstance_id: str, n_pos: int, n_neg: int, seed: int):
        rng = random.Random(derive_seed(seed, circumstance_id))
        self.pos = _Reservoir(n_pos, rng)
        self.neg = _Reservoir(n_neg, rng)

    def offer(self, order: int, rec: LabeledNarrative, label: bool) -> None:
        (self.pos if label else self.neg).offer(order, rec.narrative_id)


def sample_many(
    corpus: Iterable[LabeledNarrative] | str | Path,
    circumstance_ids: Iterable[str],
    n_pos: int = 100,
    n_neg: int = 100,
    seed: int = 0,
) -> dict[str, EvaluationSample]:
    """Draw one balanced sample per circumstance in a single corpus pass."""
    if n_pos < 1 or n_neg < 1:
        raise ValueError("n_pos and n_neg must be positive")
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    if isinstance(corpus, (str, Path)):
        corpus = load_corpus(corpus)
    ids = list(dict.fromkeys(circumstance_ids))
    strata = {cid: _Stratified(cid, n_pos, n_neg, seed) for cid in ids}
    for order, rec in enumerate(corpus):
        for cid, st in strata.items():
            label = rec.labels.get(cid)
            if label is not None:
                st.offer(order, rec, label)
    corpus_sha = getattr(corpus, "sha256", None)

    out: dict[str, EvaluationSample] = {}
    for cid, st in strata.items():
        if st.pos.seen + st.neg.seen == 0:
            raise UnknownCircumstanceError(f"no corpus record is labeled for {cid!r}")
        if st.pos.seen == 0:
            raise ZeroPositivesError(f"{cid!r} has no positive records; cannot evaluate")
        pos, neg = st.pos.chosen(), st.neg.chosen()
        out[cid] = EvaluationSample(
            circumstance_id=cid,
            entries=tuple([(n, True) for n in pos] + [(n, False) for n in neg]),
            requested_pos=n_pos,
            requested_neg=n_neg,
            seed=seed,
            under_sampled=len(pos) < n_pos or len(neg) < n_neg,
            corpus_sha256=corpus_sha,
            available_pos=st.pos.seen,
            available_neg=st.neg.seen,
        )
    return out


def balanced_sample(
    corpus: Iterable[LabeledNarrative] | str | Path,
    circumstance_id: str,
    n_pos: int = 100,
    n_neg: int = 100,
    seed: int = 0,
) -> EvaluationSample:
    """Uniform draw without replacement of ``n_pos`` positives and ``n_neg`` negatives.

    A short stratum is taken whole and the sample is flagged ``under_sampled``.
    """
    return sample_many(corpus, [circumstance_id], n_pos, n_neg, seed)[circumstance_id]


def write_sample(sample: EvaluationSample, path: str | Path, config_hash: str | None = None) -> None:
    header = sample.header()
    if config_hash is not None:
        header["config_hash"] = config_hash
    lines = [json.dumps(header, sort_keys=True)]
    lines += [json.dumps({"narrative_id": n, "label": lab}, sort_keys=True) for n, lab in sample.entries]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_sample(path: str | Path) -> tuple[EvaluationSample, dict[str, Any]]:
    """Read a sample file; returns the sample and its raw header record."""
    try:
        rows = [json.loads(ln) for ln in Path(path).read_text(encoding="utf-8").splitlines() if ln.strip()]
    except FileNotFoundError:
        raise SampleFileError(f"sample file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise SampleFileError(f"{path}: invalid JSON ({exc})") from None
    if not rows or "circumstance_id" not in rows[0]:
        raise SampleFileError(f"{path}: missing header record")
    h = rows[0]
    try:
        entries = tuple((r["narrative_id"], bool(r["label"])) for r in rows[1:])
        sample = EvaluationSample(
            circumstance_id=h["circumstance_id"],
            entries=entries,
            requested_pos=int(h["requested_pos"]),
            requested_neg=int(h["requested_neg"]),
            seed=int(h["seed"]),
            under_sampled=bool(h["under_sampled"]),
            corpus_sha256=h.get("corpus_sha256"),
            available_pos=h.get("available_pos"),
            available_neg=h.get("available_neg"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SampleFileError(f"{path}: bad record ({exc})") from None
    if len({n for n, _ in entries}) != len(entries):
        raise SampleFileError(f"{path}: duplicate narrative_id in sample")
    return sample, h
