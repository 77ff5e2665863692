from __future__ import annotations

import json

import pytest
from hypothesis import given, strategies as st

from circumscore.manual import (
    Circumstance,
    DuplicateIdError,
    InvalidFieldError,
    Manual,
    ManualNotFoundError,
    ManualSyntaxError,
    MissingFieldError,
    dump_manual,
    load_manual,
    parse_manual,
    validate_manual,
)

from conftest import entry


def test_load_preserves_order(write_manual):
    ids = [f"c{i:02d}" for i in range(25)][::-1]
    m = load_manual(write_manual([entry(i) for i in ids]))
    assert len(m) == 25
    assert m.ids == ids
    assert m["c07"].name == "C07"
    assert "c07" in m and "nope" not in m


def test_duplicate_id_named(write_manual):
    path = write_manual([entry("argument"), entry("other"), entry("argument")])
    with pytest.raises(DuplicateIdError) as err:
        load_manual(path)
    assert err.value.circumstance_id == "argument"
    assert "argument" in str(err.value)


def test_missing_field(write_manual):
    bad = entry("argument")
    del bad["definition"]
    with pytest.raises(MissingFieldError) as err:
        load_manual(write_manual([entry("a"), bad]))
    assert err.value.field_name == "definition"
    assert "argument" in err.value.entry


def test_missing_file(tmp_path):
    with pytest.raises(ManualNotFoundError):
        load_manual(tmp_path / "absent.json")


def test_syntax_error_position(tmp_path):
    path = tmp_path / "m.json"
    path.write_text('{"source_label": "x",\n  "circumstances": [,]}\n', encoding="utf-8")
    with pytest.raises(ManualSyntaxError) as err:
        load_manual(path)
    assert err.value.line == 2
    assert err.value.column > 0


def test_unknown_keys_strict_and_lenient(write_manual):
    path = write_manual([entry("a", notes="extra")])
    with pytest.raises(InvalidFieldError):
        load_manual(path)
    assert load_manual(path, strict=False).ids == ["a"]


def test_empty_example_lists_allowed(write_manual):
    m = load_manual(write_manual([entry("a", examples_yes=[], examples_no=[])]))
    assert m["a"].examples_no == ()


@pytest.mark.parametrize(
    "over",
    [
        {"id": ""},
        {"id": "Has Caps"},
        {"name": ""},
        {"training_positive_count": -1},
        {"training_positive_count": 1.5},
        {"training_positive_count": True},
        {"examples_no": "not a list"},
        {"examples_yes": [1, 2]},
    ],
)
def test_invalid_fields(write_manual, over):
    with pytest.raises(InvalidFieldError):
        load_manual(write_manual([entry("a", **over)]))


def test_validate_warnings():
    full = Circumstance("full", "Full", "d", "g", ["y"], ["n"], 5)
    assert validate_manual(Manual((full,))) == []
    bare = Circumstance("bare", "Bare", "d", "  ", [], [], None)
    w = validate_manual(Manual((bare,)))
    assert len(w) == 3
    assert any("score will be 0" in x for x in w)
    assert any("complex prompt degrades to near-simple" in x for x in w)
    assert any("excluded from bracket analysis" in x for x in w)


def test_manual_constructor_rejects_duplicates():
    c = Circumstance("a", "A", "", "", [], [])
    with pytest.raises(DuplicateIdError):
        Manual((c, c))


_text = st.text(alphabet=st.characters(blacklist_categories=("Cs",)), max_size=40)
_circ = st.builds(
    lambda i, name, d, g, yes, no, n: Circumstance(f"c-{i}", name or "x", d, g, yes, no, n),
    st.integers(0, 10**6),
    _text.filter(lambda s: s.strip()),
    _text,
    _text,
    st.lists(_text, max_size=3),
    st.lists(_text, max_size=3),
    st.none() | st.integers(0, 10**6),
)


@given(st.lists(_circ, max_size=5, unique_by=lambda c: c.id), _text)
def test_round_trip(circs, label):
    m = Manual(tuple(circs), label)
    text = dump_manual(m)
    again = parse_manual(text)
    assert again == m
    assert dump_manual(again) == text


def test_load_is_deterministic(write_manual):
    path = write_manual([entry("a"), entry("b", training_positive_count=None)])
    assert load_manual(path) == load_manual(path)
    assert json.loads(dump_manual(load_manual(path)))["circumstances"][1].get("training_positive_count") is None
