"""Sentence-level vagueness, subjectivity, detail and objectivity ratios."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import EmptySentenceError
from .lexicon import Lexicon, TermMatch, VagoCategory, match_terms
from .ner import EntitySpan, PatternNer
from .textprep import NUMBER, QuoteSpan, Token, detect_quotes, tokenize, word_count

VA, VG, VD, VC, ES = VagoCategory

# measure phrases: a number this many tokens before an adjective cancels it
MEASURE_WINDOW = 2
NEUTRAL = Fraction(1, 2)


@dataclass(frozen=True)
class CategoryCounts:
    """Effective counts after cancellations.

    ``va`` .. ``es`` exclude measure-cancelled matches; the ``*_subj``
    fields additionally exclude quoted matches and feed the subjectivity
    totals only.
    """

    va: int = 0
    vg: int = 0
    vd: int = 0
    vc: int = 0
    es: int = 0
    vd_subj: int = 0
    vc_subj: int = 0
    es_subj: int = 0
    ne: int = 0

    @property
    def vague(self):
        return self.va + self.vg + self.vd + self.vc

    @property
    def subjective(self):
        return self.es_subj + self.vd_subj + self.vc_subj

    @property
    def objective(self):
        return self.ne + self.va + self.vg

    def as_dict(self):
        return {
            "VA": self.va, "VG": self.vg, "VD": self.vd, "VC": self.vc, "ES": self.es,
            "NE": self.ne, "V": self.vague, "S": self.subjective, "O": self.objective,
        }


@dataclass(frozen=True)
class SentenceAnalysis:
    tokens: tuple[Token, ...]
    matches: tuple[TermMatch, ...]
    entities: tuple[EntitySpan, ...]
    quotes: tuple[QuoteSpan, ...]
    n_words: int
    counts: CategoryCounts = field(default_factory=CategoryCounts)


@dataclass(frozen=True)
class VagoScores:
    vagueness: float
    subjectivity: float
    detail_vs_vagueness: float
    objectivity_vs_subjectivity: float

    def as_list(self):
        return [self.vagueness, self.subjectivity, self.detail_vs_vagueness,
                self.objectivity_vs_subjectivity]


def count_categories(matches, n_entities) -> CategoryCounts:
    raw = {c: 0 for c in VagoCategory}
    subj = {c: 0 for c in VagoCategory}
    for m in matches:
        if m.cancelled:
            continue
        raw[m.category] += 1
        if not m.quoted:
            subj[m.category] += 1
    return CategoryCounts(
        va=raw[VA], vg=raw[VG], vd=raw[VD], vc=raw[VC], es=raw[ES],
        vd_subj=subj[VD], vc_subj=subj[VC], es_subj=subj[ES], ne=n_entities,
    )


def apply_cancellations(analysis: SentenceAnalysis) -> SentenceAnalysis:
    """Mark measure-phrase cancellations and recompute the counts.

    A degree or combinatorial adjective with a number token among the two
    preceding tokens ("180cm tall", "30 years old") is cancelled outright.
    Quoted matches are not cancelled; they are only dropped from the
    subjectivity counts when the counts are recomputed.
    """
    tokens = analysis.tokens
    matches = []
    for m in analysis.matches:
        cancelled = m.cancelled
        if m.category in (VD, VC):
            window = tokens[max(0, m.start - MEASURE_WINDOW):m.start]
            cancelled = cancelled or any(t.kind == NUMBER for t in window)
        matches.append(dataclasses.replace(m, cancelled=cancelled))
    return dataclasses.replace(
        analysis,
        matches=tuple(matches),
        counts=count_categories(matches, len(analysis.entities)),
    )


def analyze(text: str, lexicon: Lexicon, ner=None, sentence_id=None) -> SentenceAnalysis:
    """Tokenize, match, annotate and apply cancellations for one sentence."""
    ner = ner or PatternNer()
    tokens = tokenize(text)
    quotes = detect_quotes(tokens)
    matches = match_terms(tokens, quotes, lexicon)
    entities = ner.annotate(tokens, sentence_id)
    analysis = SentenceAnalysis(
        tokens=tuple(tokens),
        matches=tuple(matches),
        entities=tuple(entities),
        quotes=tuple(quotes),
        n_words=word_count(tokens),
    )
    return apply_cancellations(analysis)


def _share(x, y):
    total = x + y
    return NEUTRAL if total == 0 else Fraction(x, total)


def _per_word(count, n):
    # punctuation markers count in numerators but not in n, so cap at 1
    return min(Fraction(count, n), Fraction(1))


def exact_scores(analysis: SentenceAnalysis) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    n = analysis.n_words
    if n <= 0:
        raise EmptySentenceError("sentence has no word tokens")
    c = analysis.counts
    return (
        _per_word(c.vague, n),
        _per_word(c.subjective, n),
        _share(c.ne, c.vague),
        _share(c.objective, c.subjective),
    )


def compute_scores(analysis: SentenceAnalysis) -> VagoScores:
    return VagoScores(*(float(x) for x in exact_scores(analysis)))


def vago_terms(analysis: SentenceAnalysis) -> list[str]:
    return [m.entry.text for m in analysis.matches if not m.cancelled]


def score_text(text, lexicon, ner=None, sentence_id=None) -> VagoScores:
    return compute_scores(analyze(text, lexicon, ner, sentence_id))


def analysis_record(sentence_id, analysis: SentenceAnalysis) -> dict:
    """JSON-ready record written by the ``analyze`` command."""
    return {
        "id": sentence_id,
        "n_words": analysis.n_words,
        "counts": analysis.counts.as_dict(),
        "scores": compute_scores(analysis).as_list(),
        "terms": vago_terms(analysis),
        "entities": len(analysis.entities),
    }
