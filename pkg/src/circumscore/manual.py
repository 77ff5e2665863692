"""Coding-manual loading and validation.

A manual file is UTF-8 JSON::

    {"source_label": "...",
     "circumstances": [{"id": "argument", "name": "Argument",
                        "definition": "...", "guidance": "...",
                        "examples_yes": ["..."], "examples_no": ["..."],
                        "training_positive_count": 28438}, ...]}

``training_positive_count`` is optional. Unknown keys are rejected unless
``strict=False``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterator

__all__ = [
    "Circumstance",
    "Manual",
    "ManualError",
    "ManualNotFoundError",
    "ManualSyntaxError",
    "DuplicateIdError",
    "MissingFieldError",
    "InvalidFieldError",
    "load_manual",
    "parse_manual",
    "dump_manual",
    "validate_manual",
]

ID_PATTERN = re.compile(r"^[a-z0-9]+(?:-[a-z0-9]+)*$")

_TOP_KEYS = {"source_label", "circumstances"}
_REQUIRED = ("id", "name", "definition", "guidance", "examples_yes", "examples_no")
_OPTIONAL = ("training_positive_count",)


class ManualError(Exception):
    """Base class for manual loading failures."""


class ManualNotFoundError(ManualError):
    pass


class ManualSyntaxError(ManualError):
    def __init__(self, msg: str, line: int, column: int):
        super().__init__(f"{msg} (line {line}, column {column})")
        self.line = line
        self.column = column


class DuplicateIdError(ManualError):
    def __init__(self, circumstance_id: str):
        super().__init__(f"duplicate circumstance id {circumstance_id!r}")
        self.circumstance_id = circumstance_id


class MissingFieldError(ManualError):
    def __init__(self, field_name: str, entry: str):
        super().__init__(f"entry {entry}: missing required field {field_name!r}")
        self.field_name = field_name
        self.entry = entry


class InvalidFieldError(ManualError):
    pass


@dataclass(frozen=True)
class Circumstance:
    id: str
    name: str
    definition: str
    guidance: str
    examples_yes: tuple[str, ...] = ()
    examples_no: tuple[str, ...] = ()
    training_positive_count: int | None = None

    def __post_init__(self) -> None:
        if not self.id or not ID_PATTERN.match(self.id):
            raise InvalidFieldError(f"invalid circumstance id {self.id!r}")
        if not self.name.strip():
            raise InvalidFieldError(f"circumstance {self.id!r}: empty name")
        if self.training_positive_count is not None and self.training_positive_count < 0:
            raise InvalidFieldError(
                f"circumstance {self.id!r}: training_positive_count must be >= 0"
            )
        # accept lists from callers but store immutably
        object.__setattr__(self, "examples_yes", tuple(self.examples_yes))
        object.__setattr__(self, "examples_no", tuple(self.examples_no))

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "id": self.id,
            "name": self.name,
            "definition": self.definition,
            "guidance": self.guidance,
            "examples_yes": list(self.examples_yes),
            "examples_no": list(self.examples_no),
        }
        if self.training_positive_count is not None:
            d["training_positive_count"] = self.training_positive_count
        return d


@dataclass(frozen=True)
class Manual:
    circumstances: tuple[Circumstance, ...]
    source_label: str = ""
    _index: dict[str, Circumstance] = field(
        default_factory=dict, init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        object.__setattr__(self, "circumstances", tuple(self.circumstances))
        index: dict[str, Circumstance] = {}
        for c in self.circumstances:
            if c.id in index:
                raise DuplicateIdError(c.id)
            index[c.id] = c
        object.__setattr__(self, "_index", index)

    def __iter__(self) -> Iterator[Circumstance]:
        return iter(self.circumstances)

    def __len__(self) -> int:
        return len(self.circumstances)

    def __contains__(self, circumstance_id: object) -> bool:
        return circumstance_id in self._index

    def __getitem__(self, circumstance_id: str) -> Circumstance:
        try:
            return self._index[circumstance_id]
        except KeyError:
            raise KeyError(f"unknown circumstance {circumstance_id!r}") from None

    @property
    def ids(self) -> list[str]:
        return [c.id for c in self.circumstances]


def _entry_label(i: int, raw: dict[str, Any]) -> str:
    cid = raw.get("id")
    return f"#{i} ({cid!r})" if isinstance(cid, str) else f"#{i}"


def _string_list(value: Any, field_name: str, entry: str) -> tuple[str, ...]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise InvalidFieldError(f"entry {entry}: {field_name!r} must be a list of strings")
    return tuple(value)


def _parse_entry(i: int, raw: Any, strict: bool) -> Circumstance:
    if not isinstance(raw, dict):
        raise InvalidFieldError(f"entry #{i}: expected an object")
    entry = _entry_label(i, raw)
    for name in _REQUIRED:
        if name not in raw:
            raise MissingFieldError(name, entry)
    if strict:
        unknown = sorted(set(raw) - set(_REQUIRED) - set(_OPTIONAL))
        if unknown:
            raise InvalidFieldError(f"entry {entry}: unknown keys {unknown}")
    for name in ("id", "name", "definition", "guidance"):
        if not isinstance(raw[name], str):
            raise InvalidFieldError(f"entry {entry}: {name!r} must be a string")
    count = raw.get("training_positive_count")
    if count is not None and (isinstance(count, bool) or not isinstance(count, int)):
        raise InvalidFieldError(f"entry {entry}: training_positive_count must be an integer")
    return Circumstance(
        id=raw["id"],
        name=raw["name"],
        definition=raw["definition"],
        guidance=raw["guidance"],
        examples_yes=_string_list(raw["examples_yes"], "examples_yes", entry),
        examples_no=_string_list(raw["examples_no"], "examples_no", entry),
        training_positive_count=count,
    )


def parse_manual(text: str, *, strict: bool = True) -> Manual:
    """Parse manual JSON text. See the module docstring for the schema."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ManualSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise InvalidFieldError("manual must be a JSON object")
    if "circumstances" not in doc:
        raise MissingFieldError("circumstances", "<top level>")
    if strict:
        unknown = sorted(set(doc) - _TOP_KEYS)
        if unknown:
            raise InvalidFieldError(f"unknown top-level keys {unknown}")
    entries = doc["circumstances"]
    if not isinstance(entries, list):
        raise InvalidFieldError("'circumstances' must be a list")
    label = doc.get("source_label", "")
    if not isinstance(label, str):
        raise InvalidFieldError("'source_label' must be a string")
    return Manual(
        circumstances=tuple(_parse_entry(i, raw, strict) for i, raw in enumerate(entries)),
        source_label=label,
    )


def load_manual(path: str | Path, *, strict: bool = True) -> Manual:
    path = Path(path)
    try:
        data = path.read_bytes()
    except FileNotFoundError:
        raise ManualNotFoundError(f"manual file not found: {path}") from None
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ManualSyntaxError(f"invalid UTF-8: {exc.reason}", 1, exc.start + 1) from None
    return parse_manual(text, strict=strict)


def dump_manual(manual: Manual) -> str:
    doc = {
        "source_label": manual.source_label,
        "circumstances": [c.to_dict() for c in manual.circumstances],
    }
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


def validate_manual(manual: Manual) -> list[str]:
    """Return non-fatal warnings about entries that degrade scoring or analysis."""
    warnings: list[str] = []
    for c in manual:
        if not c.examples_no:
            warnings.append(f"{c.id}: no CODE-NO examples; score will be 0")
        if not c.guidance.strip():
            warnings.append(
                f"{c.id}: empty guidance; complex prompt degrades to near-simple"
            )
        if c.training_positive_count is None:
            warnings.append(
                f"{c.id}: no training_positive_count; excluded from bracket analysis"
            )
    return warnings
