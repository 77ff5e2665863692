"""Markdown report rendering. Output is deterministic for identical input."""
from __future__ import annotations

from typing import Iterable, Sequence

from ..complexity import DEFAULT_THRESHOLD
from ..sampling import EvaluationSample
from .analysis import (
    DEFAULT_TIE_EPSILON,
    BracketRow,
    DisagreementRow,
    StrategyAnalysis,
    bracket_analysis,
    hybrid_macro_f1,
    oracle_macro_f1,
    strategy_analysis,
)
from .fixture import FixtureRow
from .metrics import F1_INTERVAL_METHOD, CircumstanceMetrics, MetricWithCI, macro_f1

__all__ = [
    "COLUMN_LABELS",
    "markdown_table",
    "overall_table",
    "f1_table",
    "strategy_table",
    "bracket_table",
    "metrics_table",
    "disagreement_table",
    "fixture_report",
    "hybrid_f1_for",
]

# fixture column -> (approach, model)
COLUMN_LABELS = {
    "f1_roberta": ("Training-based", "RoBERTa"),
    "f1_simple": ("Simple Prompt", "GPT-5.2"),
    "f1_complex": ("Complex Prompt", "GPT-5.2"),
    "f1_gemini": ("Complex Prompt", "Gemini 2.5 Pro"),
    "f1_llama": ("Complex Prompt", "Llama-3 70B"),
}


def _f(x: float | None, digits: int = 3) -> str:
    return "–" if x is None else f"{x:.{digits}f}"


def markdown_table(header: Sequence[str], rows: Iterable[Sequence[object]],
                   align: Sequence[str] | None = None) -> str:
    align = align or ["l"] * len(header)
    sep = {"l": ":---", "r": "---:", "c": ":---:"}
    lines = ["| " + " | ".join(header) + " |",
             "| " + " | ".join(sep[a] for a in align) + " |"]
    lines += ["| " + " | ".join(str(c) for c in row) + " |" for row in rows]
    return "\n".join(lines)


def hybrid_f1_for(row: FixtureRow, threshold: int = DEFAULT_THRESHOLD) -> float:
    assert row.score is not None and row.f1_simple is not None and row.f1_complex is not None
    return row.f1_complex if row.score > threshold else row.f1_simple


def _column_macro(rows: Sequence[FixtureRow], column: str) -> float | None:
    values = {r.circumstance_id: r.column(column) for r in rows}
    if all(v is None for v in values.values()):
        return None
    return macro_f1(values)


def overall_table(rows: Sequence[FixtureRow], threshold: int = DEFAULT_THRESHOLD) -> str:
    inputs = [r.strategy_input() for r in rows]
    body: list[tuple[str, str, str]] = [
        ("Oracle", COLUMN_LABELS["f1_simple"][1], _f(oracle_macro_f1(inputs))),
    ]
    for col in ("f1_roberta", "f1_simple", "f1_llama", "f1_gemini", "f1_complex"):
        value = _column_macro(rows, col)
        if value is not None:
            approach, model = COLUMN_LABELS[col]
            body.append((approach, model, _f(value)))
    body.append(("Hybrid Prompt", COLUMN_LABELS["f1_simple"][1],
                  _f(hybrid_macro_f1(inputs, threshold))))
    return markdown_table(["Approach", "Model", "Macro F1"], body, ["l", "l", "r"])


def f1_table(rows: Sequence[FixtureRow]) -> str:
    cols = [c for c in COLUMN_LABELS if any(r.column(c) is not None for r in rows)]
    header = ["Circumstance", "Training"] + [
        f"{COLUMN_LABELS[c][1]} ({COLUMN_LABELS[c][0].split()[0].lower()})" for c in cols
    ]
    body = [
        [r.circumstance_id, "–" if r.training_count is None else f"{r.training_count:,}"]
        + [_f(r.column(c)) for c in cols]
        for r in rows
    ]
    body.append(["**Macro F1**", ""] + [_f(_column_macro(rows, c)) for c in cols])
    return markdown_table(header, body, ["l", "r"] + ["r"] * len(cols))


def strategy_table(analysis: StrategyAnalysis) -> str:
    body = [
        (r.circumstance_id, r.score, _f(r.f1_simple), _f(r.f1_complex), f"{r.delta:+.3f}",
         r.oracle.code, r.predicted.code, "✓" if r.correct else "✗", "tie" if r.tie else "")
        for r in sorted(analysis.rows, key=lambda r: -r.score)
    ]
    table = markdown_table(
        ["Circumstance", "Score", "F1 simple", "F1 complex", "ΔF1", "Oracle", "Pred", "Result", "Tie"],
        body, ["l", "r", "r", "r", "r", "c", "c", "c", "c"],
    )
    nt = (f"{analysis.non_tie_correct}/{analysis.non_tie_total}"
          f" ({analysis.accuracy_non_tie:.0%})" if analysis.accuracy_non_tie is not None else "n/a")
    return (
        f"{table}\n\n"
        f"Accuracy: {analysis.correct}/{analysis.total} ({analysis.accuracy_all:.0%})\n\n"
        f"Accuracy excluding ties: {nt}"
    )


def bracket_table(brackets: Sequence[BracketRow], baseline_label: str = "RoBERTa") -> str:
    body = [(b.label, b.n, b.hybrid_wins, b.baseline_wins) for b in brackets]
    body.append(("**Total**", sum(b.n for b in brackets), sum(b.hybrid_wins for b in brackets),
                 sum(b.baseline_wins for b in brackets)))
    return markdown_table(["Training Instances", "n", "Hybrid", baseline_label], body,
                          ["l", "r", "r", "r"])


def fixture_report(
    rows: Sequence[FixtureRow],
    threshold: int = DEFAULT_THRESHOLD,
    tie_epsilon: float = DEFAULT_TIE_EPSILON,
) -> str:
    analysis = strategy_analysis([r.strategy_input() for r in rows], tie_epsilon, threshold)
    brackets = bracket_analysis([r.bracket_input(hybrid_f1_for(r, threshold)) for r in rows])
    return "\n\n".join([
        "# Strategy comparison",
        f"Threshold: score > {threshold} selects the complex prompt. Tie: |ΔF1| <= {tie_epsilon}.",
        "## Macro F1 by approach",
        overall_table(rows, threshold),
        "## Per-circumstance F1",
        f1_table(rows),
        "## Complexity Score strategy prediction",
        strategy_table(analysis),
        "## Hybrid vs baseline by training-set size",
        bracket_table(brackets),
    ]) + "\n"


def _ci(m: MetricWithCI | None) -> str:
    return "undefined" if m is None else m.fmt()


def metrics_table(results: Sequence[CircumstanceMetrics],
                  samples: dict[str, EvaluationSample] | None = None) -> str:
    samples = samples or {}
    body = []
    for m in results:
        s = samples.get(m.circumstance_id)
        flags = []
        if s is not None and s.under_sampled:
            flags.append(f"under-sampled ({len(s.positives)}+{len(s.negatives)})")
        if m.matrix.unparseable_count:
            flags.append(f"{m.matrix.unparseable_count} unparseable")
        body.append((m.circumstance_id, m.matrix.tp, m.matrix.fp, m.matrix.fn, m.matrix.tn,
                     _ci(m.precision), _ci(m.recall), _ci(m.f1), "; ".join(flags)))
    table = markdown_table(
        ["Circumstance", "TP", "FP", "FN", "TN", "Precision (95% CI)", "Recall (95% CI)",
         "F1 (95% CI)", "Flags"],
        body, ["l", "r", "r", "r", "r", "r", "r", "r", "l"],
    )
    defined = [m for m in results if m.f1 is not None]
    macro = _f(macro_f1(defined)) if defined else "undefined"
    return (f"{table}\n\nMacro F1: {macro} ({len(defined)} of {len(results)} circumstances defined)\n\n"
            f"Intervals: Wilson score, 95%. F1 interval: {F1_INTERVAL_METHOD}.")


def disagreement_table(circumstance_id: str, rows: Sequence[DisagreementRow]) -> str:
    if not rows:
        return f"No disagreements for {circumstance_id}."
    header = ["Narrative", "Label", "Decisions", "Evidence"]
    multi = any(len(r.decisions) > 1 for r in rows)
    if multi:
        header.append("Unanimous")
    body = []
    for r in rows:
        row = [r.narrative_id, "Yes" if r.label else "No", ", ".join(d.value for d in r.decisions),
               " / ".join((e or "–").replace("|", "\\|") for e in r.evidence)]
        if multi:
            row.append("yes" if r.unanimous else "")
        body.append(row)
    return markdown_table(header, body)
