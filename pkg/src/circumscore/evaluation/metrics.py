"""Confusion counts, precision/recall/F1 and Wilson score intervals."""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from ..llm.verdict import Decision, Verdict
from ..sampling import EvaluationSample

__all__ = [
    "Z_95",
    "UnparseablePolicy",
    "ConfusionMatrix",
    "MetricWithCI",
    "CircumstanceMetrics",
    "MissingVerdictError",
    "UndefinedMetricError",
    "confusion",
    "wilson_interval",
    "metrics",
    "macro_f1",
]

log = logging.getLogger(__name__)

Z_95 = 1.959964
F1_INTERVAL_METHOD = "wilson on tp/(tp+(fp+fn)/2), n = tp+(fp+fn)/2"


class UnparseablePolicy(str, enum.Enum):
    AS_NO = "as-no"
    AS_YES = "as-yes"
    DROP = "drop"


class MissingVerdictError(KeyError):
    def __init__(self, missing: list[str]):
        super().__init__(f"no verdict for narratives: {', '.join(missing)}")
        self.missing = missing

    def __str__(self) -> str:
        return self.args[0]


class UndefinedMetricError(ValueError):
    pass


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0
    unparseable_count: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def to_dict(self) -> dict[str, int]:
        return {"tp": self.tp, "fp": self.fp, "fn": self.fn, "tn": self.tn,
                "unparseable": self.unparseable_count}


@dataclass(frozen=True)
class MetricWithCI:
    point: float
    lower: float
    upper: float
    level: float = 0.95

    def to_dict(self) -> dict[str, float]:
        return {"point": self.point, "lower": self.lower, "upper": self.upper, "level": self.level}

    def fmt(self, digits: int = 3) -> str:
        return f"{self.point:.{digits}f} ({self.lower:.{digits}f}-{self.upper:.{digits}f})"


@dataclass(frozen=True)
class CircumstanceMetrics:
    circumstance_id: str
    matrix: ConfusionMatrix
    precision: MetricWithCI | None
    recall: MetricWithCI | None
    f1: MetricWithCI | None

    def to_dict(self) -> dict:
        def m(x: MetricWithCI | None):
            return x.to_dict() if x is not None else None

        return {
            "circumstance_id": self.circumstance_id,
            "matrix": self.matrix.to_dict(),
            "precision": m(self.precision),
            "recall": m(self.recall),
            "f1": m(self.f1),
            "undefined": [k for k in ("precision", "recall", "f1") if getattr(self, k) is None],
            "interval_method": {"precision": "wilson", "recall": "wilson", "f1": F1_INTERVAL_METHOD},
        }


def _decision(v: Verdict | Decision | str) -> Decision:
    if isinstance(v, Verdict):
        return v.decision
    return Decision(v)


def confusion(
    sample: EvaluationSample,
    verdicts: Mapping[str, Verdict | Decision | str],
    policy: UnparseablePolicy = UnparseablePolicy.AS_NO,
) -> ConfusionMatrix:
    """Tally verdicts (keyed by narrative id) against the sample labels.

    Unparseable answers are counted in ``unparseable_count`` and otherwise
    handled per ``policy``: predicted No (default), predicted Yes, or dropped.
    """
    missing = [nid for nid, _ in sample.entries if nid not in verdicts]
    if missing:
        raise MissingVerdictError(missing)
    tp = fp = fn = tn = bad = 0
    for nid, label in sample.entries:
        d = _decision(verdicts[nid])
        if d is Decision.UNPARSEABLE:
            bad += 1
            if policy is UnparseablePolicy.DROP:
                continue
            d = Decision.YES if policy is UnparseablePolicy.AS_YES else Decision.NO
        if d is Decision.YES:
            tp, fp = (tp + 1, fp) if label else (tp, fp + 1)
        else:
            fn, tn = (fn + 1, tn) if label else (fn, tn + 1)
    return ConfusionMatrix(tp, fp, fn, tn, bad)


def wilson_interval(successes: float, n: float, z: float = Z_95) -> tuple[float, float]:
    """Wilson score interval for ``successes`` out of ``n`` trials.

    ``n`` may be fractional (used for the F1 interval).
    """
    if n <= 0:
        raise ValueError(f"n must be positive, got {n}")
    if not 0 <= successes <= n:
        raise ValueError(f"successes must lie in [0, n], got {successes} of {n}")
    p = successes / n
    z2 = z * z
    denom = 1 + z2 / n
    center = (p + z2 / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def _with_ci(successes: float, n: float, z: float) -> MetricWithCI | None:
    if n <= 0:
        return None
    lo, hi = wilson_interval(successes, n, z)
    p = successes / n
    # guard the invariant lower <= point <= upper against last-ulp rounding
    return MetricWithCI(p, min(lo, p), max(hi, p))


def metrics(matrix: ConfusionMatrix, circumstance_id: str = "", z: float = Z_95) -> CircumstanceMetrics:
    """Precision, recall and F1 with 95% intervals; ``None`` marks an undefined metric."""
    tp, fp, fn = matrix.tp, matrix.fp, matrix.fn
    precision = _with_ci(tp, tp + fp, z)
    recall = _with_ci(tp, tp + fn, z)
    f1_n = tp + (fp + fn) / 2
    f1 = _with_ci(tp, f1_n, z)
    return CircumstanceMetrics(circumstance_id, matrix, precision, recall, f1)


def macro_f1(
    rows: Iterable[CircumstanceMetrics | MetricWithCI | float | None]
    | Mapping[str, MetricWithCI | float | None],
) -> float:
    """Unweighted mean of the defined F1 values; undefined entries are skipped.

    A mapping is read as circumstance id -> F1 so skipped ids can be named.
    """
    values: list[float] = []
    skipped: list[str] = []
    if isinstance(rows, Mapping):
        labelled = list(rows.items())
    else:
        labelled = [(None, r) for r in rows]
    for i, (name, row) in enumerate(labelled):
        if isinstance(row, CircumstanceMetrics):
            value = row.f1.point if row.f1 is not None else None
            label = row.circumstance_id or f"#{i}"
        elif isinstance(row, MetricWithCI):
            value, label = row.point, name or f"#{i}"
        else:
            value, label = row, name or f"#{i}"
        if value is None or (isinstance(value, float) and math.isnan(value)):
            skipped.append(label)
        else:
            values.append(float(value))
    if skipped:
        log.warning("macro F1 excludes undefined F1 for %s", ", ".join(skipped))
    if not values:
        raise UndefinedMetricError("macro F1 undefined: no row has a defined F1")
    return math.fsum(values) / len(values)
