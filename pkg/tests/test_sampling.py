from __future__ import annotations

import hashlib
import json
from collections import Counter

import pytest

from circumscore.sampling import (
    CorpusNotFoundError,
    MalformedLineError,
    SampleFileError,
    UnknownCircumstanceError,
    ZeroPositivesError,
    balanced_sample,
    derive_seed,
    load_corpus,
    read_sample,
    sample_many,
    write_sample,
)


def rec(nid: str, **labels: bool) -> dict:
    return {"narrative_id": nid, "text": f"text {nid}", "labels": labels}


def strata(n_pos: int, n_neg: int, cid: str = "c") -> list[dict]:
    out = [rec(f"p{i:05d}", **{cid: True}) for i in range(n_pos)]
    out += [rec(f"n{i:05d}", **{cid: False}) for i in range(n_neg)]
    # interleave so stream order mixes strata
    out.sort(key=lambda r: r["narrative_id"][1:])
    return out


def test_stream_in_order(write_corpus):
    path = write_corpus([rec("a", c=True), rec("b"), rec("c", c=False)])
    reader = load_corpus(path)
    assert [r.narrative_id for r in reader] == ["a", "b", "c"]
    assert reader.sha256 is not None and len(reader.sha256) == 64


def test_malformed_strict_and_lenient(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text(json.dumps(rec("a")) + "\n{not json\n" + json.dumps(rec("c")) + "\n", encoding="utf-8")
    with pytest.raises(MalformedLineError) as err:
        list(load_corpus(path))
    assert err.value.lineno == 2
    reader = load_corpus(path, strict=False)
    assert [r.narrative_id for r in reader] == ["a", "c"]
    assert reader.skipped == 1 and reader.skipped_lines == [2]


@pytest.mark.parametrize("line", [
    '{"narrative_id": "x", "text": "t"}',
    '{"narrative_id": "", "text": "t", "labels": {}}',
    '{"narrative_id": "x", "text": 3, "labels": {}}',
    '{"narrative_id": "x", "text": "t", "labels": {"c": "yes"}}',
    '["x"]',
])
def test_malformed_records(tmp_path, line):
    path = tmp_path / "c.jsonl"
    path.write_text(line + "\n", encoding="utf-8")
    with pytest.raises(MalformedLineError):
        list(load_corpus(path))


def test_duplicate_narrative_id(write_corpus):
    with pytest.raises(MalformedLineError):
        list(load_corpus(write_corpus([rec("a"), rec("a")])))


def test_missing_corpus(tmp_path):
    with pytest.raises(CorpusNotFoundError):
        load_corpus(tmp_path / "nope.jsonl")


def test_balanced(write_corpus):
    s = balanced_sample(write_corpus(strata(500, 5000)), "c", 100, 100, seed=42)
    assert len(s.entries) == 200
    assert len(s.positives) == 100 and len(s.negatives) == 100
    assert not s.under_sampled
    assert all(n.startswith("p") for n in s.positives) and all(n.startswith("n") for n in s.negatives)
    assert len(set(s.labels)) == 200
    assert (s.available_pos, s.available_neg) == (500, 5000)


def test_under_sampled(write_corpus):
    s = balanced_sample(write_corpus(strata(18, 5000)), "c", 100, 100, seed=42)
    assert len(s.positives) == 18 and len(s.negatives) == 100
    assert s.under_sampled


def test_determinism_and_seed_sensitivity(write_corpus):
    path = write_corpus(strata(300, 300))
    a = balanced_sample(path, "c", seed=42)
    assert balanced_sample(path, "c", seed=42) == a
    assert set(balanced_sample(path, "c", seed=43).entries) != set(a.entries)


def test_sample_file_bytes(write_corpus, tmp_path):
    path = write_corpus(strata(50, 60))
    out1, out2 = tmp_path / "s1.jsonl", tmp_path / "s2.jsonl"
    write_sample(balanced_sample(path, "c", 10, 10, seed=7), out1, "cfg")
    write_sample(balanced_sample(path, "c", 10, 10, seed=7), out2, "cfg")
    assert out1.read_bytes() == out2.read_bytes()
    sample, header = read_sample(out1)
    assert header["config_hash"] == "cfg"
    assert header["corpus_sha256"] == hashlib.sha256(path.read_bytes()).hexdigest()
    assert sample == balanced_sample(path, "c", 10, 10, seed=7)
    assert set(header) >= {"circumstance_id", "seed", "corpus_sha256", "requested_pos",
                           "requested_neg", "under_sampled"}


def test_stratum_purity(write_corpus):
    records = strata(40, 40, "a") + [rec(f"x{i}", a=i % 3 == 0, b=i % 2 == 0) for i in range(60)]
    path = write_corpus(records)
    truth = {r["narrative_id"]: r["labels"] for r in records}
    for cid, s in sample_many(path, ["a", "b"], 20, 20, seed=5).items():
        for nid, label in s.entries:
            assert truth[nid][cid] is label


def test_errors(write_corpus):
    path = write_corpus([rec("a", c=False), rec("b", c=False), rec("z", d=True)])
    with pytest.raises(UnknownCircumstanceError):
        balanced_sample(path, "missing")
    with pytest.raises(ZeroPositivesError):
        balanced_sample(path, "c")
    with pytest.raises(ValueError):
        balanced_sample(path, "d", n_pos=0)


def test_cross_circumstance_reuse_and_independence(write_corpus):
    records = [rec(f"r{i:03d}", a=i % 2 == 0, b=i % 2 == 0) for i in range(200)]
    path = write_corpus(records)
    both = sample_many(path, ["a", "b"], 10, 10, seed=1)
    assert both["a"] == balanced_sample(path, "a", 10, 10, seed=1)
    # per-circumstance generators are independent, so the draws differ
    assert both["a"].entries != both["b"].entries


def test_derive_seed_portable():
    # first 8 bytes of sha256("42:argument"), big-endian
    expected = int(hashlib.sha256(b"42:argument").hexdigest()[:16], 16)
    assert derive_seed(42, "argument") == expected


def test_uniformity(write_corpus):
    path = write_corpus([rec(f"p{i}", c=True) for i in range(10)] + [rec("n0", c=False)])
    reader = list(load_corpus(path))
    counts = Counter()
    for seed in range(1000):
        s = balanced_sample(reader, "c", n_pos=5, n_neg=1, seed=seed)
        counts.update(s.positives)
    sigma = (1000 * 0.5 * 0.5) ** 0.5
    assert set(counts) == {f"p{i}" for i in range(10)}
    for n in counts.values():
        assert abs(n - 500) <= 3 * sigma


def test_read_sample_errors(tmp_path):
    with pytest.raises(SampleFileError):
        read_sample(tmp_path / "none.jsonl")
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"narrative_id": "a", "label": true}\n', encoding="utf-8")
    with pytest.raises(SampleFileError):
        read_sample(bad)
