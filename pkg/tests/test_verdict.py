from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from circumscore.llm.verdict import Decision, Verdict, parse_verdict

Y, N, U = Decision.YES, Decision.NO, Decision.UNPARSEABLE

CASES = [
    # exact template
    ("EVIDENCE: None found\nFINAL CODING: No", N),
    ('EVIDENCE: "wife had cancer"\nFINAL CODING: Yes', Y),
    ("FINAL CODING: Yes", Y),
    ("FINAL CODING: No", N),
    # casing
    ("final coding: yes", Y),
    ("Final Coding: NO", N),
    ("FINAL CODING: yEs", Y),
    ("fInAl CoDiNg: nO", N),
    # brackets and punctuation
    ("final coding: [Yes]", Y),
    ("FINAL CODING: [No]", N),
    ("FINAL CODING: (Yes)", Y),
    ("FINAL CODING: Yes.", Y),
    ("FINAL CODING: No!", N),
    ('FINAL CODING: "Yes"', Y),
    ("FINAL CODING: 'no'", N),
    ("FINAL CODING: <Yes>", Y),
    ("FINAL CODING:Yes", Y),
    ("FINAL CODING:   No  ", N),
    ("FINAL CODING: Yes - the narrative says so", Y),
    ("FINAL CODING: No, nothing indicates this.", N),
    # markdown emphasis
    ("**FINAL CODING:** Yes", Y),
    ("**FINAL CODING: No**", N),
    ("__Final Coding__: yes", Y),
    ("*FINAL CODING*: *No*", N),
    ("### FINAL CODING: Yes", Y),
    ("FINAL_CODING: No", N),
    # verbosity and restatement: last marker wins
    ("Let me think. FINAL CODING: Yes\n...on reflection...\nFINAL CODING: No", N),
    ("FINAL CODING: No\nFINAL CODING: Yes", Y),
    ("The answer is no.\n\nEVIDENCE: \"argued with wife\"\nFINAL CODING: Yes\n\nHope this helps!", Y),
    ("I will end with FINAL CODING: [Yes or No].\nEVIDENCE: None found\nFINAL CODING: No", N),
    # marker alone on its line
    ("FINAL CODING:\nYes", Y),
    ("FINAL CODING:\n\n  No", N),
    ("FINAL CODING: **\nYes", Y),
    # marker present but no answer
    ("FINAL CODING: Maybe", U),
    ("FINAL CODING: [Yes or No]", U),
    ("FINAL CODING: unclear", U),
    ("FINAL CODING:", U),
    ("FINAL CODING: N/A", U),
    ("FINAL CODING: Nope", U),
    ("FINAL CODING: Yesterday", U),
    # no marker: last standalone yes/no
    ("Yes", Y),
    ("no", N),
    ("Answer: Yes", Y),
    ("I first thought yes, but the answer is no.", N),
    ("Yes. No. Yes.", Y),
    ("The narrative is ambiguous.", U),
    ("", U),
    ("Nobody knows; yesterday was noted.", U),
    ("   \n\t ", U),
    ("NO_EVIDENCE yes-man", Y),
]


def test_case_count():
    assert len(CASES) == 50


@pytest.mark.parametrize("raw, expected", CASES)
def test_table(raw, expected):
    v = parse_verdict(raw)
    assert v.decision is expected
    assert v.raw_response == raw
    if expected is U:
        assert v.reason


def test_evidence():
    assert parse_verdict("EVIDENCE: None found\nFINAL CODING: No").evidence is None
    assert parse_verdict('EVIDENCE: "None found"\nFINAL CODING: No').evidence is None
    v = parse_verdict('EVIDENCE: "wife had cancer"\nFINAL CODING: Yes')
    assert v.evidence == "wife had cancer"
    v = parse_verdict("EVIDENCE: first\nEVIDENCE: [second quote]\nFINAL CODING: Yes")
    assert v.evidence == "second quote"
    assert parse_verdict("FINAL CODING: Yes").evidence is None


def test_bytes_input():
    v = parse_verdict(b"FINAL CODING: Yes \xff")
    assert v.decision is Y
    assert isinstance(v.raw_response, str)


def test_round_trip_dict():
    v = parse_verdict('EVIDENCE: "x"\nFINAL CODING: maybe').with_attempts(3)
    assert Verdict.from_dict(v.to_dict()) == v


@given(st.text())
def test_total_on_text(raw):
    v = parse_verdict(raw)
    assert v.decision in (Y, N, U)
    if v.decision is U:
        assert v.reason
    if v.evidence is not None:
        assert v.evidence in raw


def test_fuzz_100k():
    rng = random.Random(20240501)
    pieces = ["FINAL CODING:", "final_coding:", "EVIDENCE:", "Yes", "no", "[", "]", "\n", " ",
              "**", '"', "None found", "maybe", "\r\n", "\x00", "é", "😀"]
    seen = set()
    for i in range(100_000):
        if i % 2:
            raw = bytes(rng.getrandbits(8) for _ in range(rng.randrange(40)))
        else:
            raw = "".join(rng.choice(pieces) for _ in range(rng.randrange(12)))
        v = parse_verdict(raw)
        assert v.decision in (Y, N, U)
        seen.add(v.decision)
    assert seen == {Y, N, U}
