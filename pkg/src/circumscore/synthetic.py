"""Deterministic synthetic manual, corpus and mock script for offline runs.

``python -m circumscore.synthetic DIR`` writes ``manual.json``,
``corpus.jsonl`` and ``mock_script.jsonl`` into DIR. Nothing here is real
case data.
"""
from __future__ import annotations

import json
import random
import sys
from pathlib import Path

from .manual import Circumstance, Manual, dump_manual

__all__ = ["demo_manual", "demo_corpus", "demo_script", "write_demo"]


def demo_manual() -> Manual:
    return Manual(
        source_label="synthetic demo manual (invented text)",
        circumstances=(
            Circumstance(
                id="caregiver-burden",
                name="Caregiver Burden",
                definition="Victim was providing care to another person and experienced strain from that role.",
                guidance="Code only when the victim is the caregiver. Do not code when the victim received care.",
                examples_yes=["Victim cared for his wife who had terminal cancer and was exhausted."],
                examples_no=[
                    "Victim had home nursing visits for his own illness but no caregiving role.",
                    "No caregiving mentioned.",
                ],
                training_positive_count=322,
            ),
            Circumstance(
                id="argument",
                name="Argument",
                definition="An argument or heated verbal exchange occurred shortly before the death.",
                guidance="Requires a described dispute. Ongoing tension alone is not enough; use other relationship codes.",
                examples_yes=["Victim argued with roommate about rent the evening before."],
                examples_no=[
                    "Argued constantly but no specific incident",
                    "Couple had relationship problems; use other relationship category.",
                ],
                training_positive_count=28438,
            ),
            Circumstance(
                id="financial-problem",
                name="Financial Problem",
                definition="Victim was experiencing financial difficulties.",
                guidance="Code debts, bankruptcy or inability to pay bills.",
                examples_yes=["Victim was three months behind on the mortgage."],
                examples_no=["No financial difficulties."],
                training_positive_count=14597,
            ),
        ),
    )


_POSITIVE_TEXT = {
    "caregiver-burden": "V had been the sole caregiver for a parent with dementia and told friends he was worn out.",
    "argument": "Witness stated V and her partner had a loud argument about money an hour before the incident.",
    "financial-problem": "Family reported V had lost his job and could not pay rent; eviction notices were found.",
}
_NEGATIVE_TEXT = {
    "caregiver-burden": "V lived alone and was visited by a home health aide for his own mobility problems.",
    "argument": "Neighbors reported nothing unusual; V had spent the evening watching television.",
    "financial-problem": "V was employed full time and family described no money concerns.",
}


def demo_corpus(n_per_circumstance: int = 20, seed: int = 7) -> list[dict]:
    """Each narrative is labeled for exactly one circumstance, half of them positive."""
    rng = random.Random(seed)
    records = []
    ids = [c.id for c in demo_manual()]
    for ci, cid in enumerate(ids):
        for j in range(n_per_circumstance):
            positive = j % 2 == 0
            base = (_POSITIVE_TEXT if positive else _NEGATIVE_TEXT)[cid]
            filler = rng.choice(["Scene was secured.", "ME report attached.", "LE interviewed family."])
            records.append({
                "narrative_id": f"syn-{ci:02d}-{j:03d}",
                "text": f"{base} {filler}",
                "labels": {cid: positive},
            })
    return records


def demo_script(corpus: list[dict], seed: int = 11, error_rate: float = 0.15) -> list[dict]:
    """Scripted mock replies: mostly correct, some flipped, one unparseable."""
    rng = random.Random(seed)
    script = []
    for i, rec in enumerate(corpus):
        (label,) = rec["labels"].values()
        if i == 3:
            response = "I cannot determine this from the text provided."
        else:
            say_yes = label if rng.random() >= error_rate else not label
            evidence = f'"{rec["text"].split(";")[0].split(".")[0]}"' if say_yes else "None found"
            response = f"EVIDENCE: {evidence}\nFINAL CODING: {'Yes' if say_yes else 'No'}"
        script.append({"match": {"narrative_id": rec["narrative_id"]}, "response": response})
    return script


def write_demo(directory: str | Path) -> dict[str, Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    corpus = demo_corpus()
    paths = {
        "manual": directory / "manual.json",
        "corpus": directory / "corpus.jsonl",
        "mock_script": directory / "mock_script.jsonl",
    }
    paths["manual"].write_text(dump_manual(demo_manual()), encoding="utf-8")
    paths["corpus"].write_text("".join(json.dumps(r) + "\n" for r in corpus), encoding="utf-8")
    paths["mock_script"].write_text(
        "".join(json.dumps(r) + "\n" for r in demo_script(corpus)), encoding="utf-8"
    )
    return paths


if __name__ == "__main__":
    if len(sys.argv) != 2:
        sys.exit("usage: python -m circumscore.synthetic OUT_DIR")
    for name, path in write_demo(sys.argv[1]).items():
        print(f"{name}: {path}")
