"""Simple (name-only) and complex (full guideline) prompt rendering.

Both prompts share the same preamble, question line and
NARRATIVE/EVIDENCE/FINAL CODING footer. The complex prompt inserts the
definition, coding guidance and CODE YES / CODE NO example lists between the
question and the narrative. Empty sections render as ``None provided`` so the
response format is identical for every circumstance.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .complexity import PromptStrategy
from .manual import Circumstance

__all__ = [
    "DEFAULT_TRUNCATION",
    "EMPTY_SECTION",
    "PromptError",
    "RenderedPrompt",
    "truncate_narrative",
    "build_simple_prompt",
    "build_complex_prompt",
    "build_prompt",
]

DEFAULT_TRUNCATION = 3500
EMPTY_SECTION = "None provided"

PREAMBLE = """\
You are classifying death investigation narratives for the presence of specific circumstances.

Code "Yes" if the circumstance is mentioned, implied, or can be reasonably inferred from the narrative.
Code "No" if there is no mention or indication of the circumstance.

When in doubt, code "Yes".

---

Is there any mention of "{circumstance_name}" in this narrative?
"""

GUIDELINE_BLOCK = """\
DEFINITION: {nvdrs_definition}
CODING GUIDANCE: {detailed_guidance}
EXAMPLES - CODE "YES":{positive_examples}
EXAMPLES - CODE "NO":{negative_examples}
"""

RULE = "---\n"

FOOTER = """\
---
NARRATIVE: {narrative}
---

EVIDENCE: [Quote relevant text, or "None found"]
FINAL CODING: [Yes or No]"""


_SLOT = re.compile(r"\{([a-z_]+)\}")


class PromptError(ValueError):
    pass


def _fill(template: str, **values: str) -> str:
    # single pass: substituted text is never rescanned, so braces in
    # narratives or manual text come through untouched
    return _SLOT.sub(lambda m: values[m.group(1)], template)


@dataclass(frozen=True)
class RenderedPrompt:
    circumstance_id: str
    strategy: PromptStrategy
    text: str
    narrative_id: str = ""
    truncated: bool = False

    @property
    def key(self) -> tuple[str, str]:
        return (self.circumstance_id, self.narrative_id)

    def to_dict(self) -> dict:
        return {
            "circumstance_id": self.circumstance_id,
            "narrative_id": self.narrative_id,
            "strategy": self.strategy.value,
            "truncated": self.truncated,
            "prompt": self.text,
        }


def truncate_narrative(text: str, limit: int = DEFAULT_TRUNCATION) -> str:
    """Keep the first ``limit`` code points of ``text``."""
    if limit < 1:
        raise PromptError(f"truncation limit must be >= 1, got {limit}")
    return text[:limit]


def _section(text: str) -> str:
    return text if text.strip() else EMPTY_SECTION


def _example_list(examples: tuple[str, ...] | list[str]) -> str:
    if not examples:
        return " " + EMPTY_SECTION
    return "".join(f"\n- {ex}" for ex in examples)


def _frame(name: str, narrative: str, limit: int, middle: str = "") -> tuple[str, bool]:
    if not name.strip():
        raise PromptError("circumstance name must be nonempty")
    body = truncate_narrative(narrative, limit)
    head = _fill(PREAMBLE, circumstance_name=name) + "\n"
    footer = _fill(FOOTER, narrative=body)
    if middle:
        # the guideline block takes the place of the rule above NARRATIVE
        head = head + middle + "\n"
        footer = footer[len(RULE):]
    return head + footer, len(body) < len(narrative)


def build_simple_prompt(
    name: str,
    narrative: str,
    *,
    circumstance_id: str = "",
    narrative_id: str = "",
    limit: int = DEFAULT_TRUNCATION,
) -> RenderedPrompt:
    text, truncated = _frame(name, narrative, limit)
    return RenderedPrompt(circumstance_id, PromptStrategy.SIMPLE, text, narrative_id, truncated)


def build_complex_prompt(
    circumstance: Circumstance,
    narrative: str,
    *,
    narrative_id: str = "",
    limit: int = DEFAULT_TRUNCATION,
) -> RenderedPrompt:
    middle = _fill(
        GUIDELINE_BLOCK,
        nvdrs_definition=_section(circumstance.definition),
        detailed_guidance=_section(circumstance.guidance),
        positive_examples=_example_list(circumstance.examples_yes),
        negative_examples=_example_list(circumstance.examples_no),
    )
    text, truncated = _frame(circumstance.name, narrative, limit, middle)
    return RenderedPrompt(
        circumstance.id, PromptStrategy.COMPLEX, text, narrative_id, truncated
    )


def build_prompt(
    circumstance: Circumstance,
    narrative: str,
    strategy: PromptStrategy,
    *,
    narrative_id: str = "",
    limit: int = DEFAULT_TRUNCATION,
) -> RenderedPrompt:
    if strategy is PromptStrategy.COMPLEX:
        return build_complex_prompt(circumstance, narrative, narrative_id=narrative_id, limit=limit)
    return build_simple_prompt(
        circumstance.name,
        narrative,
        circumstance_id=circumstance.id,
        narrative_id=narrative_id,
        limit=limit,
    )
