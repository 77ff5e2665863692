"""Loader for the analysis fixture CSV (per-circumstance scores and F1 values).

Lines starting with ``#`` are comments. Columns::

    circumstance_id, score, training_count, f1_roberta, f1_simple,
    f1_complex, f1_gemini, f1_llama

Empty cells mean "not available".
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .analysis import BracketInput, StrategyInput

__all__ = ["FIXTURE_COLUMNS", "F1_COLUMNS", "FixtureRow", "FixtureError",
           "load_fixture", "published_fixture_path"]

FIXTURE_COLUMNS = (
    "circumstance_id", "score", "training_count",
    "f1_roberta", "f1_simple", "f1_complex", "f1_gemini", "f1_llama",
)
F1_COLUMNS = FIXTURE_COLUMNS[3:]


class FixtureError(ValueError):
    pass


@dataclass(frozen=True)
class FixtureRow:
    circumstance_id: str
    score: int | None
    training_count: int | None
    f1_roberta: float | None
    f1_simple: float | None
    f1_complex: float | None
    f1_gemini: float | None = None
    f1_llama: float | None = None

    def column(self, name: str) -> float | None:
        return getattr(self, name)

    def strategy_input(self) -> StrategyInput:
        if self.score is None or self.f1_simple is None or self.f1_complex is None:
            raise FixtureError(f"{self.circumstance_id}: needs score, f1_simple and f1_complex")
        return StrategyInput(self.circumstance_id, self.score, self.f1_simple, self.f1_complex)

    def bracket_input(self, hybrid_f1: float) -> BracketInput:
        return BracketInput(self.circumstance_id, self.training_count, hybrid_f1, self.f1_roberta)


def published_fixture_path() -> Path:
    return Path(str(resources.files("circumscore") / "data" / "published_results.csv"))


def _cell(value: str, cast, where: str):
    value = value.strip()
    if not value:
        return None
    try:
        return cast(value.replace(",", "") if cast is int else value)
    except ValueError:
        raise FixtureError(f"{where}: cannot parse {value!r}") from None


def load_fixture(path: str | Path | None = None) -> list[FixtureRow]:
    path = Path(path) if path is not None else published_fixture_path()
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise FixtureError(f"fixture not found: {path}") from None
    body = "\n".join(ln for ln in text.splitlines() if not ln.lstrip().startswith("#"))
    reader = csv.DictReader(io.StringIO(body))
    if reader.fieldnames is None or "circumstance_id" not in reader.fieldnames:
        raise FixtureError(f"{path}: missing header with circumstance_id")
    unknown = set(reader.fieldnames) - set(FIXTURE_COLUMNS)
    if unknown:
        raise FixtureError(f"{path}: unknown columns {sorted(unknown)}")
    rows: list[FixtureRow] = []
    seen: set[str] = set()
    for rec in reader:
        cid = (rec.get("circumstance_id") or "").strip()
        if not cid:
            raise FixtureError(f"{path}: row without circumstance_id")
        if cid in seen:
            raise FixtureError(f"{path}: duplicate circumstance_id {cid!r}")
        seen.add(cid)
        rows.append(FixtureRow(
            circumstance_id=cid,
            score=_cell(rec.get("score") or "", int, cid),
            training_count=_cell(rec.get("training_count") or "", int, cid),
            **{c: _cell(rec.get(c) or "", float, f"{cid}.{c}") for c in F1_COLUMNS},
        ))
    if not rows:
        raise FixtureError(f"{path}: no rows")
    return rows
