from __future__ import annotations

import json
from pathlib import Path

import pytest

GOLDEN = Path(__file__).parent / "golden"


def entry(cid: str, **over) -> dict:
    d = {
        "id": cid,
        "name": cid.replace("-", " ").title(),
        "definition": f"Definition of {cid}.",
        "guidance": f"Guidance for {cid}.",
        "examples_yes": [f"{cid} example yes"],
        "examples_no": ["No such thing."],
        "training_positive_count": 100,
    }
    d.update(over)
    return d


@pytest.fixture
def write_manual(tmp_path: Path):
    def _write(entries: list[dict], name: str = "manual.json", **top) -> Path:
        doc = {"source_label": "test manual", "circumstances": entries, **top}
        path = tmp_path / name
        path.write_text(json.dumps(doc, indent=2), encoding="utf-8")
        return path

    return _write


@pytest.fixture
def write_corpus(tmp_path: Path):
    def _write(records: list[dict], name: str = "corpus.jsonl") -> Path:
        path = tmp_path / name
        path.write_text("".join(json.dumps(r) + "\n" for r in records), encoding="utf-8")
        return path

    return _write


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
