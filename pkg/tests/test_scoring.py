import csv
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from subjfusion.errors import EmptySentenceError
from subjfusion.lexicon import Lexicon, VagoCategory, load_lexicon
from subjfusion.ner import FileNer
from subjfusion.scoring import (
    analysis_record, analyze, apply_cancellations, compute_scores, exact_scores, vago_terms,
)

F = Fraction


def scores(text, lex):
    return exact_scores(analyze(text, lex))


def test_mary_is_tall(l0):
    assert scores("Mary is tall", l0) == (F(1, 3), F(1, 3), F(1, 2), F(1, 2))


def test_measure_phrase_cancels(l0):
    a = analyze("Mary is 180cm tall", l0)
    assert [m.cancelled for m in a.matches] == [True]
    assert a.counts.vd == 0
    assert exact_scores(a) == (0, 0, 1, 1)


def test_measure_phrase_with_separate_unit(l0):
    a = analyze("the tower is 30 m tall", l0)
    assert a.matches[0].cancelled


def test_number_too_far_back_does_not_cancel(l0):
    a = analyze("5 of them are very tall", l0)
    assert not a.matches[0].cancelled


def test_quotes_cancel_subjectivity_only(l0):
    a = analyze('He said Mary is "beautiful"', l0)
    assert a.counts.vc == 1 and a.counts.vc_subj == 0
    assert a.counts.vague == 1 and a.counts.subjective == 0


def test_no_rule_applies(l0):
    a = analyze("Mary is tall", l0)
    assert apply_cancellations(a) == a
    assert not any(m.cancelled for m in a.matches)


def test_zero_denominators_are_neutral():
    assert scores("it is nice here", Lexicon()) == (0, 0, F(1, 2), F(1, 2))


def test_exclamation_counts_as_subjective_not_as_word(l0):
    assert scores("Mary is beautiful!", l0)[:2] == (F(1, 3), F(2, 3))


def test_punctuation_heavy_sentence_capped(l0):
    assert scores("tall !!!", l0)[:2] == (1, 1)


def test_empty_sentence_raises(l0):
    with pytest.raises(EmptySentenceError):
        compute_scores(analyze("!!", l0))


def test_vago_terms(l0):
    assert vago_terms(analyze("Mary is tall", l0)) == ["tall"]
    assert vago_terms(analyze("Mary is 180cm tall", l0)) == []
    assert vago_terms(analyze("nothing here", l0)) == []
    assert vago_terms(analyze("good good !", l0)) == ["good", "good", "!"]


def test_external_entities_feed_detail(l0):
    ner = FileNer({"s": []})
    assert exact_scores(analyze("Mary is tall", l0, ner, "s"))[2] == 0


def test_record_shape(l0):
    rec = analysis_record("x", analyze("Mary is beautiful!", l0))
    assert rec["n_words"] == 3 and rec["entities"] == 1
    assert rec["counts"]["VC"] == 1 and rec["counts"]["ES"] == 1
    assert rec["scores"] == [1 / 3, 2 / 3, 0.5, 1 / 3]
    assert rec["terms"] == ["beautiful", "!"]


def _expected(fixtures_dir):
    with open(fixtures_dir / "oracle_expected.tsv", encoding="utf-8") as fh:
        rows = csv.DictReader((l for l in fh if not l.startswith("#")), delimiter="\t")
        return {r["sentence_id"]: r for r in rows}


def test_oracle_counts(fixtures_dir, l0):
    from subjfusion.corpus_io import read_corpus_path
    expected = _expected(fixtures_dir)
    for rec in read_corpus_path(fixtures_dir / "oracle_corpus.tsv"):
        a = analyze(rec.text, l0)
        assert a.n_words == int(expected[rec.id]["n_words"]), rec.text
        assert len(a.entities) == int(expected[rec.id]["n_entities"]), rec.text


# --- properties over a small vocabulary with known categories -------------

LEX = load_lexicon("tall\tVD\nnice\tVC\nsome\tVG\nabout\tVA\n!\tES\nwow\tES\n")
VOCAB = ["tall", "nice", "some", "about", "!", "wow", "Anna", "7", "and", "the", "x", '"']
sentences = st.lists(st.sampled_from(VOCAB), min_size=1, max_size=15).map(" ".join)


@given(sentences)
def test_scores_in_unit_interval(text):
    a = analyze(text, LEX)
    if a.n_words == 0:
        return
    for s in compute_scores(a).as_list():
        assert 0.0 <= s <= 1.0


@given(sentences)
def test_padding_dilutes_ratios(text):
    a = analyze(text, LEX)
    if a.n_words == 0:
        return
    b = analyze(text + " blah", LEX)
    s, t = exact_scores(a), exact_scores(b)
    for i in (0, 1):
        # strict only below the cap of 1
        assert t[i] <= s[i]
        if 0 < s[i] < 1:
            assert t[i] < s[i]
    assert b.counts == a.counts
    assert (t[2], t[3]) == (s[2], s[3])


@pytest.mark.parametrize("word, subjective, objective", [
    ("tall", True, False), ("nice", True, False), ("wow", True, False),
    ("some", False, True), ("about", False, True),
])
def test_single_category_partition(word, subjective, objective):
    c = analyze(f"x {word} x", LEX).counts
    assert (c.subjective > 0) == subjective
    assert (c.objective > 0) == objective


@given(sentences)
def test_effective_counts_bounded_by_raw(text):
    a = analyze(text, LEX)
    raw = {cat: sum(1 for m in a.matches if m.category is cat) for cat in VagoCategory}
    c = a.counts
    assert c.va <= raw[VagoCategory.VA] and c.vg <= raw[VagoCategory.VG]
    assert c.vd <= raw[VagoCategory.VD] and c.vc <= raw[VagoCategory.VC] and c.es <= raw[VagoCategory.ES]
    assert c.vd_subj <= c.vd and c.vc_subj <= c.vc and c.es_subj <= c.es
