"""Coding-manual driven prompt selection and evaluation for narrative circumstance coding."""
from .complexity import (
    DEFAULT_THRESHOLD,
    ComplexityReport,
    PromptStrategy,
    Rule,
    RuleHit,
    complexity_score,
    score_example,
    select_strategy,
)
from .manual import Circumstance, Manual, load_manual, validate_manual
from .prompts import RenderedPrompt, build_complex_prompt, build_simple_prompt, truncate_narrative

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_THRESHOLD",
    "Circumstance",
    "ComplexityReport",
    "Manual",
    "PromptStrategy",
    "RenderedPrompt",
    "Rule",
    "RuleHit",
    "build_complex_prompt",
    "build_simple_prompt",
    "complexity_score",
    "load_manual",
    "score_example",
    "select_strategy",
    "truncate_narrative",
    "validate_manual",
]
