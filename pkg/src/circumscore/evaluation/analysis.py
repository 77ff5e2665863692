"""Prompt-strategy analysis, hybrid/oracle macro F1 and prevalence brackets."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from ..complexity import DEFAULT_THRESHOLD, PromptStrategy, select_strategy
from ..llm.verdict import Decision, Verdict
from ..sampling import EvaluationSample
from .metrics import UnparseablePolicy

__all__ = [
    "DEFAULT_TIE_EPSILON",
    "BRACKET_EDGES",
    "BRACKET_LABELS",
    "StrategyInput",
    "StrategyAnalysisRow",
    "StrategyAnalysis",
    "BracketInput",
    "BracketRow",
    "DisagreementRow",
    "strategy_analysis",
    "hybrid_macro_f1",
    "oracle_macro_f1",
    "bracket_of",
    "bracket_analysis",
    "disagreement_report",
]

log = logging.getLogger(__name__)

DEFAULT_TIE_EPSILON = 0.02
# F1 values are typically given to three decimals; without slack a printed
# difference of exactly 0.020 can land a hair above epsilon in binary.
_TIE_SLACK = 1e-9

BRACKET_EDGES = (500, 2000, 5000, 15000)
BRACKET_LABELS = ("<500", "500–2,000", "2,000–5,000", "5,000–15,000", ">15,000")


@dataclass(frozen=True)
class StrategyInput:
    circumstance_id: str
    score: int
    f1_simple: float
    f1_complex: float


@dataclass(frozen=True)
class StrategyAnalysisRow:
    circumstance_id: str
    score: int
    f1_simple: float
    f1_complex: float
    oracle: PromptStrategy
    predicted: PromptStrategy
    correct: bool
    tie: bool

    @property
    def delta(self) -> float:
        return self.f1_complex - self.f1_simple


@dataclass(frozen=True)
class StrategyAnalysis:
    rows: list[StrategyAnalysisRow]
    accuracy_all: float
    accuracy_non_tie: float | None
    correct: int
    non_tie_correct: int
    non_tie_total: int

    def __iter__(self):
        # unpacks as (rows, accuracy_all, accuracy_non_tie)
        return iter((self.rows, self.accuracy_all, self.accuracy_non_tie))

    @property
    def total(self) -> int:
        return len(self.rows)


def _as_input(row: StrategyInput | Sequence) -> StrategyInput:
    if isinstance(row, StrategyInput):
        return row
    cid, score, f1_simple, f1_complex = row
    return StrategyInput(cid, int(score), float(f1_simple), float(f1_complex))


def strategy_analysis(
    rows: Iterable[StrategyInput | Sequence],
    tie_epsilon: float = DEFAULT_TIE_EPSILON,
    threshold: int = DEFAULT_THRESHOLD,
) -> StrategyAnalysis:
    """Compare the threshold rule's choice against the hindsight-best prompt.

    The oracle is Complex only when complex F1 is strictly higher, so exact
    ties go to Simple. Rows within ``tie_epsilon`` are flagged and left out
    of the non-tie accuracy.
    """
    inputs = [_as_input(r) for r in rows]
    if not inputs:
        raise ValueError("strategy_analysis needs at least one row")
    out: list[StrategyAnalysisRow] = []
    for r in inputs:
        predicted = select_strategy(r.score, threshold)
        oracle = PromptStrategy.COMPLEX if r.f1_complex > r.f1_simple else PromptStrategy.SIMPLE
        tie = abs(r.f1_complex - r.f1_simple) <= tie_epsilon + _TIE_SLACK
        out.append(StrategyAnalysisRow(r.circumstance_id, r.score, r.f1_simple, r.f1_complex,
                                       oracle, predicted, predicted is oracle, tie))
    correct = sum(r.correct for r in out)
    non_tie = [r for r in out if not r.tie]
    nt_correct = sum(r.correct for r in non_tie)
    return StrategyAnalysis(
        rows=out,
        accuracy_all=correct / len(out),
        accuracy_non_tie=nt_correct / len(non_tie) if non_tie else None,
        correct=correct,
        non_tie_correct=nt_correct,
        non_tie_total=len(non_tie),
    )


def hybrid_macro_f1(rows: Iterable[StrategyInput | Sequence], threshold: int = DEFAULT_THRESHOLD) -> float:
    """Macro F1 when each circumstance uses the prompt its score selects."""
    inputs = [_as_input(r) for r in rows]
    if not inputs:
        raise ValueError("hybrid_macro_f1 needs at least one row")
    picked = [
        r.f1_complex if select_strategy(r.score, threshold) is PromptStrategy.COMPLEX else r.f1_simple
        for r in inputs
    ]
    return math.fsum(picked) / len(picked)


def oracle_macro_f1(rows: Iterable[StrategyInput | Sequence]) -> float:
    inputs = [_as_input(r) for r in rows]
    if not inputs:
        raise ValueError("oracle_macro_f1 needs at least one row")
    return math.fsum(max(r.f1_simple, r.f1_complex) for r in inputs) / len(inputs)


@dataclass(frozen=True)
class BracketInput:
    circumstance_id: str
    training_count: int | None
    hybrid_f1: float
    baseline_f1: float | None = None


@dataclass(frozen=True)
class BracketRow:
    label: str
    n: int = 0
    hybrid_wins: int = 0
    baseline_wins: int = 0


def bracket_of(training_count: int) -> int:
    """Index into BRACKET_LABELS; each bracket includes its upper edge."""
    for i, edge in enumerate(BRACKET_EDGES):
        if training_count <= edge:
            return i
    return len(BRACKET_EDGES)


def bracket_analysis(rows: Iterable[BracketInput | Sequence]) -> list[BracketRow]:
    """Hybrid vs baseline wins per training-size bracket.

    A missing baseline F1 is a hybrid win; exact equality is a baseline win.
    Rows without a training count are skipped with a warning.
    """
    counts = [[0, 0, 0] for _ in BRACKET_LABELS]
    for raw in rows:
        r = raw if isinstance(raw, BracketInput) else BracketInput(*raw)
        if r.training_count is None:
            log.warning("%s: no training count; skipped in bracket analysis", r.circumstance_id)
            continue
        c = counts[bracket_of(r.training_count)]
        c[0] += 1
        if r.baseline_f1 is None or r.hybrid_f1 > r.baseline_f1:
            c[1] += 1
        else:
            c[2] += 1
    return [BracketRow(label, *c) for label, c in zip(BRACKET_LABELS, counts)]


@dataclass(frozen=True)
class DisagreementRow:
    narrative_id: str
    label: bool
    decisions: tuple[Decision, ...]
    evidence: tuple[str | None, ...]
    unanimous: bool

    @property
    def decision(self) -> Decision:
        return self.decisions[0]


def _predicted_yes(d: Decision, policy: UnparseablePolicy) -> bool | None:
    if d is Decision.UNPARSEABLE:
        if policy is UnparseablePolicy.DROP:
            return None
        return policy is UnparseablePolicy.AS_YES
    return d is Decision.YES


def disagreement_report(
    sample: EvaluationSample,
    verdicts: Mapping[str, Verdict] | Sequence[Mapping[str, Verdict]],
    policy: UnparseablePolicy = UnparseablePolicy.AS_NO,
) -> list[DisagreementRow]:
    """False positives and false negatives, for human review.

    ``verdicts`` is one run (narrative id -> Verdict) or a list of runs. An
    entry is listed when any run contradicts its label. With several runs,
    entries that every run gets wrong are flagged ``unanimous``.
    """
    runs = [verdicts] if isinstance(verdicts, Mapping) else list(verdicts)
    if not runs:
        raise ValueError("disagreement_report needs at least one run")
    out: list[DisagreementRow] = []
    for nid, label in sample.entries:
        vs = [run[nid] for run in runs if nid in run]
        if not vs:
            continue
        wrong = [_predicted_yes(v.decision, policy) not in (None, label) for v in vs]
        if any(wrong):
            out.append(DisagreementRow(
                nid, label,
                tuple(v.decision for v in vs),
                tuple(v.evidence for v in vs),
                unanimous=len(runs) > 1 and all(wrong) and len(vs) == len(runs),
            ))
    return out
