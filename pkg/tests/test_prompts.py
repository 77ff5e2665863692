from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from circumscore.complexity import PromptStrategy
from circumscore.manual import Circumstance
from circumscore.prompts import (
    PromptError,
    build_complex_prompt,
    build_prompt,
    build_simple_prompt,
    truncate_narrative,
)

GOLDEN = Path(__file__).parent / "golden"

# Prompt 1 exactly as published, placeholders included
PROMPT_1 = (
    "You are classifying death investigation narratives for the presence of specific circumstances.\n"
    "\n"
    'Code "Yes" if the circumstance is mentioned, implied, or can be reasonably inferred from the narrative.\n'
    'Code "No" if there is no mention or indication of the circumstance.\n'
    "\n"
    'When in doubt, code "Yes".\n'
    "\n"
    "---\n"
    "\n"
    'Is there any mention of "{circumstance_name}" in this narrative?\n'
    "\n"
    "---\n"
    "NARRATIVE: {narrative}\n"
    "---\n"
    "\n"
    'EVIDENCE: [Quote relevant text, or "None found"]\n'
    "FINAL CODING: [Yes or No]"
)

CAREGIVER = Circumstance(
    id="caregiver-burden",
    name="Caregiver Burden",
    definition="Victim was providing care to another person and experienced strain from that role.",
    guidance="Code only when the victim is the caregiver. Do not code when the victim received care.",
    examples_yes=["Victim cared for his wife who had terminal cancer.", "V was sole carer for her son."],
    examples_no=[
        "Victim had home nursing visits for his own illness.",
        "Caregiver was mentioned but V was the patient.",
        "No caregiving.",
    ],
    training_positive_count=322,
)
NARRATIVE = "V, 71, was found at home. Family said V had cared for his wife {daily} until her death."


def test_simple_matches_published_template():
    p = build_simple_prompt("Caregiver Burden", NARRATIVE)
    expected = PROMPT_1.replace("{circumstance_name}", "Caregiver Burden").replace("{narrative}", NARRATIVE)
    assert p.text == expected
    assert 'Is there any mention of "Caregiver Burden" in this narrative?\n' in p.text
    assert p.strategy is PromptStrategy.SIMPLE and not p.truncated


def test_simple_golden():
    p = build_simple_prompt("Caregiver Burden", NARRATIVE)
    assert p.text == (GOLDEN / "simple_prompt.txt").read_text(encoding="utf-8")


def test_complex_golden():
    p = build_complex_prompt(CAREGIVER, NARRATIVE, narrative_id="n1")
    assert p.text == (GOLDEN / "complex_prompt.txt").read_text(encoding="utf-8")
    assert p.key == ("caregiver-burden", "n1")


def test_complex_golden_empty_sections():
    bare = Circumstance("bare", "Bare Thing", "", "", [], [])
    p = build_complex_prompt(bare, "")
    assert p.text == (GOLDEN / "complex_prompt_empty.txt").read_text(encoding="utf-8")


def test_example_lines():
    text = build_complex_prompt(CAREGIVER, "x").text
    yes_block = text.split('EXAMPLES - CODE "YES":')[1].split('EXAMPLES - CODE "NO":')[0]
    no_block = text.split('EXAMPLES - CODE "NO":')[1].split("NARRATIVE:")[0]
    assert yes_block.count("\n- ") == 2
    assert no_block.count("\n- ") == 3


def test_empty_guidance_none_provided():
    c = Circumstance("x", "X", "def", "   ", ["y"], [])
    text = build_complex_prompt(c, "n").text
    assert "CODING GUIDANCE: None provided\n" in text
    assert 'EXAMPLES - CODE "NO": None provided\n' in text


def test_shared_frame():
    s = build_simple_prompt(CAREGIVER.name, NARRATIVE).text
    c = build_complex_prompt(CAREGIVER, NARRATIVE).text
    head = s.split("\n---\nNARRATIVE:")[0] + "\n"
    tail = s[s.index("NARRATIVE:"):]
    assert c.startswith(head)
    assert c.endswith(tail)
    assert "DEFINITION:" not in s


@given(st.text(max_size=200), st.text(min_size=1, max_size=30).filter(str.strip))
def test_single_markers(narrative, name):
    c = Circumstance("x", name, "d", "g", ["FINAL CODING: Yes"], [])
    for p in (build_simple_prompt(name, narrative), build_complex_prompt(c, narrative)):
        assert p.text.count("\nFINAL CODING: [Yes or No]") == 1
        assert p.text.count("\nEVIDENCE: [Quote relevant text") == 1
        assert p.text.count("NARRATIVE: ") == 1


def test_braces_pass_through():
    p = build_simple_prompt("{narrative}", "{circumstance_name} and {x}")
    assert 'mention of "{narrative}"' in p.text
    assert "NARRATIVE: {circumstance_name} and {x}\n" in p.text


def test_truncation():
    long = "a" * 4000
    p = build_simple_prompt("X", long)
    assert p.truncated
    assert "NARRATIVE: " + "a" * 3500 + "\n" in p.text
    assert "a" * 3501 not in p.text
    assert truncate_narrative("b" * 100) == "b" * 100
    assert truncate_narrative("") == ""
    assert not build_simple_prompt("X", "").truncated
    assert not build_simple_prompt("X", "a" * 3500).truncated
    assert build_simple_prompt("X", "abcdef", limit=3).text.count("NARRATIVE: abc\n") == 1


def test_truncation_counts_code_points():
    text = "é😀" * 10
    out = truncate_narrative(text, 5)
    assert out == "é😀é😀é"
    assert len(out.encode("utf-8")) > 5


@given(st.text(), st.integers(1, 50))
def test_truncation_bound(text, limit):
    out = truncate_narrative(text, limit)
    assert len(out) <= limit
    assert text.startswith(out)


def test_errors():
    with pytest.raises(PromptError):
        build_simple_prompt("", "x")
    with pytest.raises(PromptError):
        truncate_narrative("x", 0)
    ok = build_simple_prompt("X", "")
    assert "NARRATIVE: \n" in ok.text


def test_build_prompt_dispatch_and_determinism():
    a = build_prompt(CAREGIVER, NARRATIVE, PromptStrategy.SIMPLE, narrative_id="n")
    b = build_prompt(CAREGIVER, NARRATIVE, PromptStrategy.SIMPLE, narrative_id="n")
    assert a == b and a.circumstance_id == "caregiver-burden"
    c = build_prompt(CAREGIVER, NARRATIVE, PromptStrategy.COMPLEX)
    assert c.strategy is PromptStrategy.COMPLEX and "DEFINITION: " in c.text
