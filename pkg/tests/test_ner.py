import io

import pytest
from hypothesis import given
from hypothesis import strategies as st

from subjfusion.errors import ConfigError, FormatError, UnknownIdError
from subjfusion.ner import (
    NUMBER_LABEL, PERSON_ORG_LOC, TEMPORAL, EntitySpan, PatternNer, load_external_annotations,
    make_ner, pattern_annotate,
)
from subjfusion.textprep import tokenize


def ents(text):
    toks = tokenize(text)
    return [(" ".join(t.text for t in toks[e.start:e.end]), e.label) for e in pattern_annotate(toks)]


def test_sentence_initial_name():
    assert ents("Mary is tall") == [("Mary", PERSON_ORG_LOC)]


def test_name_and_measure():
    assert ents("Mary is 180cm tall") == [("Mary", PERSON_ORG_LOC), ("180cm", NUMBER_LABEL)]


def test_nothing_to_find():
    assert ents("it is good") == []


@pytest.mark.parametrize("text, expected", [
    ("The report came", []),
    ("I think John Smith is nice", [("John Smith", PERSON_ORG_LOC)]),
    ("in May 2024 it rained", [("May", PERSON_ORG_LOC), ("2024", TEMPORAL)]),
    ("it may rain", []),
    ("about 300 birds", [("300", NUMBER_LABEL)]),
    ("the New York office", [("New York", PERSON_ORG_LOC)]),
    ('"Anna" left', [("Anna", PERSON_ORG_LOC)]),
])
def test_rules(text, expected):
    assert ents(text) == expected


words = st.sampled_from(["Mary", "paris", "Paris", "the", "The", "it", "I", "a", "2024", "12", "7cm",
                         "May", "may", "Monday", "big", "!", ",", "NASA", "new", "York"])


@given(st.lists(words, max_size=15))
def test_spans_sorted_disjoint_nonempty(parts):
    spans = pattern_annotate(tokenize(" ".join(parts)))
    for s in spans:
        assert s.start < s.end
    for a, b in zip(spans, spans[1:]):
        assert a.end <= b.start


@given(st.lists(words, max_size=12), st.integers(min_value=0), st.sampled_from(["small", "ran", "very", "x"]))
def test_inserting_plain_word_never_reduces_count(parts, pos, extra):
    pos = pos % (len(parts) + 1)
    before = len(pattern_annotate(tokenize(" ".join(parts))))
    after = len(pattern_annotate(tokenize(" ".join(parts[:pos] + [extra] + parts[pos:]))))
    assert after >= before


@given(st.lists(words, max_size=12))
def test_provider_deterministic(parts):
    toks = tokenize(" ".join(parts))
    ner = PatternNer()
    assert ner.annotate(toks) == ner.annotate(toks)


def test_file_provider_roundtrip():
    ner = load_external_annotations('{"id": "s1", "entities": [[0, 1, "number"]]}\n')
    assert ner.annotate(tokenize("42 is a number"), "s1") == [EntitySpan(0, 1, NUMBER_LABEL)]


def test_file_provider_empty_stream_knows_nothing():
    ner = load_external_annotations(io.StringIO(""))
    with pytest.raises(UnknownIdError):
        ner.annotate(tokenize("x"), "s1")


def test_file_provider_unknown_id_named():
    ner = load_external_annotations('{"id": "s1", "entities": []}\n')
    with pytest.raises(UnknownIdError, match="zzz"):
        ner.annotate(tokenize("x"), "zzz")


@pytest.mark.parametrize("text", [
    '{"id": "s1", "entities": [[0, 1, "number"]]}\n{"id": "s2", "entities": [[0, 1\n',
    '{"id": "s1"}\n{"id": "s2"}\n',
])
def test_malformed_json_reports_line(text):
    with pytest.raises(FormatError, match="line"):
        load_external_annotations(text)


def test_bad_label_and_overlap_rejected():
    with pytest.raises(FormatError, match="unknown entity label"):
        load_external_annotations('{"id": "s", "entities": [[0, 1, "ORG"]]}\n')
    with pytest.raises(FormatError, match="overlapping"):
        load_external_annotations('{"id": "s", "entities": [[0, 2, "number"], [1, 3, "number"]]}\n')


def test_span_beyond_sentence_rejected():
    ner = load_external_annotations('{"id": "s", "entities": [[3, 5, "number"]]}\n')
    with pytest.raises(FormatError, match="exceeds"):
        ner.annotate(tokenize("one two"), "s")


def test_selector(tmp_path):
    assert make_ner("pattern").name == "pattern"
    path = tmp_path / "ann.jsonl"
    path.write_text('{"id": "a", "entities": []}\n')
    assert "a" in make_ner(f"file:{path}")
    with pytest.raises(ConfigError):
        make_ner("spacy")
