"""Metrics, strategy analysis and reports."""
from .analysis import (
    BRACKET_EDGES,
    BRACKET_LABELS,
    DEFAULT_TIE_EPSILON,
    BracketInput,
    BracketRow,
    DisagreementRow,
    StrategyAnalysis,
    StrategyAnalysisRow,
    StrategyInput,
    bracket_analysis,
    bracket_of,
    disagreement_report,
    hybrid_macro_f1,
    oracle_macro_f1,
    strategy_analysis,
)
from .fixture import FixtureRow, load_fixture, published_fixture_path
from .metrics import (
    Z_95,
    CircumstanceMetrics,
    ConfusionMatrix,
    MetricWithCI,
    MissingVerdictError,
    UndefinedMetricError,
    UnparseablePolicy,
    confusion,
    macro_f1,
    metrics,
    wilson_interval,
)

__all__ = [
    "BRACKET_EDGES",
    "BRACKET_LABELS",
    "DEFAULT_TIE_EPSILON",
    "Z_95",
    "BracketInput",
    "BracketRow",
    "CircumstanceMetrics",
    "ConfusionMatrix",
    "DisagreementRow",
    "FixtureRow",
    "MetricWithCI",
    "MissingVerdictError",
    "StrategyAnalysis",
    "StrategyAnalysisRow",
    "StrategyInput",
    "UndefinedMetricError",
    "UnparseablePolicy",
    "bracket_analysis",
    "bracket_of",
    "confusion",
    "disagreement_report",
    "hybrid_macro_f1",
    "load_fixture",
    "macro_f1",
    "metrics",
    "oracle_macro_f1",
    "published_fixture_path",
    "strategy_analysis",
    "wilson_interval",
]
