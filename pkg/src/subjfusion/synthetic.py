"""Synthetic lexicons and corpora for tests, benchmarks and demo scripts.

Terms and filler words are pronounceable pseudo-words, so nothing here
depends on real lexical data.
"""

from __future__ import annotations

import numpy as np

from .fusion import LabeledExample
from .lexicon import Lexicon, LexiconEntry, VagoCategory, surface_tokens
from .scoring import analyze, exact_scores

# per-category sizes of a full-scale English lexicon
DEFAULT_COUNTS = {"VA": 9, "VG": 35, "VD": 57, "VC": 1500, "ES": 13}

_ONSETS = "b c d f g h j k l m n p r s t v w z br dr gr pl st tr".split()
_VOWELS = "a e i o u ai ea io ou".split()


def _pseudo_words(rng, n, syllables=(2, 3), forbidden=frozenset()):
    out, seen = [], set(forbidden)
    while len(out) < n:
        k = rng.integers(syllables[0], syllables[1] + 1)
        w = "".join(_ONSETS[rng.integers(len(_ONSETS))] + _VOWELS[rng.integers(len(_VOWELS))]
                    for _ in range(k))
        if w not in seen:
            seen.add(w)
            out.append(w)
    return out


def synthetic_lexicon(counts=None, seed=0, multiword_rate=0.1) -> Lexicon:
    """Lexicon of pseudo-word terms with the requested per-category sizes."""
    counts = dict(DEFAULT_COUNTS if counts is None else counts)
    rng = np.random.default_rng(seed)
    words = iter(_pseudo_words(rng, 2 * sum(counts.values())))
    entries = []
    for label, n in counts.items():
        cat = VagoCategory(label)
        for _ in range(n):
            term = next(words)
            if rng.random() < multiword_rate:
                term += " " + next(words)
            entries.append(LexiconEntry(surface_tokens(term), cat))
    return Lexicon(entries)


def lexicon_tsv(lexicon: Lexicon) -> str:
    return "".join(f"{e.text}\t{e.category.value}\n" for e in lexicon.entries)


class SentenceFactory:
    """Random sentences mixing lexicon terms, filler words, names and numbers."""

    def __init__(self, lexicon: Lexicon, seed=0, n_fillers=400, n_names=60):
        self.rng = np.random.default_rng(seed)
        taken = {tok for e in lexicon.entries for tok in e.surface}
        self.fillers = _pseudo_words(self.rng, n_fillers, (1, 3), forbidden=taken)
        names = _pseudo_words(self.rng, n_names, (2, 3), forbidden=taken | set(self.fillers))
        self.names = [n.capitalize() for n in names]
        self.by_cat = {c: [e.text for e in lexicon.entries if e.category is c] for c in VagoCategory}

    def _pick(self, seq):
        return seq[self.rng.integers(len(seq))]

    def sentence(self, n_subjective=None, length=(6, 12)):
        rng = self.rng
        words = [self._pick(self.fillers) for _ in range(rng.integers(length[0], length[1] + 1))]
        if n_subjective is None:
            n_subjective = int(rng.integers(0, 4))
        inserts = []
        for _ in range(n_subjective):
            cat = (VagoCategory.VC, VagoCategory.VD, VagoCategory.ES)[rng.choice(3, p=[0.7, 0.2, 0.1])]
            if self.by_cat[cat]:
                inserts.append(self._pick(self.by_cat[cat]))
        for _ in range(rng.integers(0, 3)):
            cat = (VagoCategory.VA, VagoCategory.VG)[rng.integers(2)]
            if self.by_cat[cat]:
                inserts.append(self._pick(self.by_cat[cat]))
        for _ in range(rng.integers(0, 3)):
            inserts.append(self._pick(self.names) if rng.random() < 0.6 else str(rng.integers(1, 2000)))
        for w in inserts:
            words.insert(int(rng.integers(1, len(words) + 1)), w)
        return " ".join(words)


def synthetic_labeled_corpus(n, lexicon: Lexicon, seed=0, threshold=0.025, noise=0.01, prefix="s"):
    """Sentences labeled SUBJ when lexicon subjectivity plus Gaussian noise exceeds ``threshold``.

    Half of the sentences carry no subjective term, the rest carry one to
    three, so the label is mostly a function of the lexicon scores.
    """
    factory = SentenceFactory(lexicon, seed)
    rng = np.random.default_rng([seed, 7])
    out = []
    for i in range(n):
        k = 0 if rng.random() < 0.5 else int(rng.integers(1, 4))
        text = factory.sentence(n_subjective=k)
        subj = float(exact_scores(analyze(text, lexicon))[1])
        label = int(subj + rng.normal(0.0, noise) > threshold)
        out.append(LabeledExample(f"{prefix}{i}", text, label))
    return out


def random_sentences(n, lexicon: Lexicon, seed=0):
    factory = SentenceFactory(lexicon, seed)
    return [factory.sentence() for _ in range(n)]
