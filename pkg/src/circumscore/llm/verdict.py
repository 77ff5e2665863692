"""Turning free-text model output into a Yes/No/Unparseable verdict."""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, replace
from typing import Any

__all__ = ["Decision", "Verdict", "parse_verdict"]

_FINAL = re.compile(r"final[\s_*]*coding[\s_*]*:", re.IGNORECASE)
_EVIDENCE = re.compile(r"evidence[\s_*]*:", re.IGNORECASE)
_WORD = re.compile(r"[A-Za-z]+")
_YES_NO = re.compile(r"(?<![A-Za-z0-9])(yes|no)(?![A-Za-z0-9])", re.IGNORECASE)
_ECHO = re.compile(r"^\W*yes\W+or\W+no\b", re.IGNORECASE)
_STRIP = " \t\"'`*_[]()<>.,;:!“”‘’"


class Decision(str, enum.Enum):
    YES = "Yes"
    NO = "No"
    UNPARSEABLE = "Unparseable"


@dataclass(frozen=True)
class Verdict:
    decision: Decision
    raw_response: str
    evidence: str | None = None
    attempts: int = 1
    reason: str | None = None

    def with_attempts(self, attempts: int) -> "Verdict":
        return replace(self, attempts=attempts)

    def to_dict(self) -> dict[str, Any]:
        return {
            "decision": self.decision.value,
            "evidence": self.evidence,
            "raw_response": self.raw_response,
            "attempts": self.attempts,
            "reason": self.reason,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Verdict":
        return cls(
            decision=Decision(d["decision"]),
            raw_response=d["raw_response"],
            evidence=d.get("evidence"),
            attempts=int(d.get("attempts", 1)),
            reason=d.get("reason"),
        )


def _decision_word(text: str) -> Decision | None:
    m = _WORD.search(text)
    if m is None:
        return None
    word = m.group(0).lower()
    if word == "yes":
        return Decision.YES
    if word == "no":
        return Decision.NO
    return None


def _evidence(lines: list[str]) -> str | None:
    for line in reversed(lines):
        m = _EVIDENCE.search(line)
        if m is None:
            continue
        quote = line[m.end():].strip(_STRIP)
        if not quote or quote.lower() == "none found":
            return None
        return quote
    return None


def parse_verdict(raw: str | bytes) -> Verdict:
    """Parse a model response.

    The last ``FINAL CODING:`` line wins; its first word must be yes or no
    (brackets, quotes and markdown emphasis are ignored). When the marker is
    alone on its line the next nonblank line is read instead. Without any
    marker the last whole-word "yes"/"no" in the response decides.
    """
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8", errors="replace")
    lines = raw.splitlines()
    evidence = _evidence(lines)

    for i in range(len(lines) - 1, -1, -1):
        matches = list(_FINAL.finditer(lines[i]))
        if not matches:
            continue
        tail = lines[i][matches[-1].end():]
        if not _WORD.search(tail):
            tail = next((ln for ln in lines[i + 1:] if ln.strip()), "")
        if _ECHO.match(tail):
            return Verdict(Decision.UNPARSEABLE, raw, evidence,
                           reason="FINAL CODING repeats the template placeholder")
        decision = _decision_word(tail)
        if decision is None:
            return Verdict(
                Decision.UNPARSEABLE, raw, evidence,
                reason="FINAL CODING marker not followed by yes/no",
            )
        return Verdict(decision, raw, evidence)

    hits = _YES_NO.findall(raw)
    if hits:
        decision = Decision.YES if hits[-1].lower() == "yes" else Decision.NO
        return Verdict(decision, raw, evidence, reason=None)
    return Verdict(Decision.UNPARSEABLE, raw, evidence, reason="no FINAL CODING marker and no yes/no")
