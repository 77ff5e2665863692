"""Complexity Score over a circumstance's CODE-NO examples.

Each negative example is checked against four rules:

=================  =====  =================================================
rule               delta  fires when
=================  =====  =================================================
POSITIVE_AND_BUT    +3    a positive word and the word "but" both occur
POSITIVE_ONLY       +2    a positive word occurs without "but"
CATEGORY_REDIRECT   +1    the phrase "use that" or "use other" occurs
SIMPLE_ABSENCE      -1    first word is "no" and fewer than 5 words total
=================  =====  =================================================

The first two are mutually exclusive; the last two stack freely. Word
tests are whole-token and case-insensitive, so "wash" never counts as
"was". A circumstance whose summed score exceeds the threshold (default 2)
gets the complex prompt.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable

from .manual import Circumstance

__all__ = [
    "POSITIVE_WORDS",
    "DEFAULT_THRESHOLD",
    "Rule",
    "RuleHit",
    "PromptStrategy",
    "ComplexityReport",
    "score_example",
    "complexity_score",
    "select_strategy",
    "score_circumstance",
    "score_all",
]

POSITIVE_WORDS = frozenset(
    {
        "used",
        "had",
        "was",
        "moved",
        "argued",
        "problems",
        "history",
        "mentioned",
        "occurred",
        "abuse",
        "stressor",
    }
)
DEFAULT_THRESHOLD = 2

_TOKEN = re.compile(r"[a-z0-9]+")
# left word boundary only: "because that" must not count as "use that"
_REDIRECT = re.compile(r"(?<![a-z0-9])use\s+(?:that|other)")


class Rule(enum.Enum):
    POSITIVE_AND_BUT = 3
    POSITIVE_ONLY = 2
    CATEGORY_REDIRECT = 1
    SIMPLE_ABSENCE = -1

    @property
    def delta(self) -> int:
        return self.value


class PromptStrategy(str, enum.Enum):
    SIMPLE = "simple"
    COMPLEX = "complex"

    @property
    def code(self) -> str:
        """One-letter code used in report tables (S/C)."""
        return self.value[0].upper()


@dataclass(frozen=True)
class RuleHit:
    rule: Rule
    example_index: int = 0

    @property
    def rule_id(self) -> str:
        return self.rule.name

    @property
    def delta(self) -> int:
        return self.rule.delta

    def to_dict(self) -> dict:
        return {"rule_id": self.rule_id, "delta": self.delta, "example_index": self.example_index}


@dataclass(frozen=True)
class ComplexityReport:
    circumstance_id: str
    total_score: int
    hits: tuple[RuleHit, ...]
    strategy: PromptStrategy | None = None
    threshold: int | None = None

    def with_strategy(self, threshold: int = DEFAULT_THRESHOLD) -> "ComplexityReport":
        return ComplexityReport(
            self.circumstance_id,
            self.total_score,
            self.hits,
            select_strategy(self.total_score, threshold),
            threshold,
        )

    def to_dict(self) -> dict:
        return {
            "id": self.circumstance_id,
            "score": self.total_score,
            "strategy": self.strategy.value if self.strategy else None,
            "hits": [h.to_dict() for h in self.hits],
        }


def score_example(example_text: str, example_index: int = 0) -> list[RuleHit]:
    text = example_text.lower()
    tokens = set(_TOKEN.findall(text))
    has_positive = not POSITIVE_WORDS.isdisjoint(tokens)
    has_but = "but" in tokens

    hits: list[RuleHit] = []
    if has_positive and has_but:
        hits.append(RuleHit(Rule.POSITIVE_AND_BUT, example_index))
    elif has_positive:
        hits.append(RuleHit(Rule.POSITIVE_ONLY, example_index))
    if _REDIRECT.search(text):
        hits.append(RuleHit(Rule.CATEGORY_REDIRECT, example_index))

    words = text.split()
    if words and len(words) < 5 and _TOKEN.findall(words[0]) == ["no"]:
        hits.append(RuleHit(Rule.SIMPLE_ABSENCE, example_index))
    return hits


def complexity_score(circumstance: Circumstance) -> ComplexityReport:
    """Score the CODE-NO examples of ``circumstance``; CODE-YES examples are ignored.

    The returned report carries no strategy; see :meth:`ComplexityReport.with_strategy`.
    """
    hits: list[RuleHit] = []
    for i, example in enumerate(circumstance.examples_no):
        hits.extend(score_example(example, i))
    return ComplexityReport(
        circumstance_id=circumstance.id,
        total_score=sum(h.delta for h in hits),
        hits=tuple(hits),
    )


def select_strategy(score: int, threshold: int = DEFAULT_THRESHOLD) -> PromptStrategy:
    return PromptStrategy.COMPLEX if score > threshold else PromptStrategy.SIMPLE


def score_circumstance(
    circumstance: Circumstance, threshold: int = DEFAULT_THRESHOLD
) -> ComplexityReport:
    return complexity_score(circumstance).with_strategy(threshold)


def score_all(
    circumstances: Iterable[Circumstance], threshold: int = DEFAULT_THRESHOLD
) -> list[ComplexityReport]:
    return [score_circumstance(c, threshold) for c in circumstances]
