"""Vagueness/subjectivity lexicon: loading and longest-match lookup."""

from __future__ import annotations

import enum
import io
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .errors import FormatError
from .textprep import QuoteSpan, Token, tokenize


class VagoCategory(str, enum.Enum):
    VA = "VA"  # approximation
    VG = "VG"  # generality
    VD = "VD"  # degree
    VC = "VC"  # combinatorial
    ES = "ES"  # explicit subjectivity

    @property
    def is_vague(self):
        return self is not VagoCategory.ES

    @property
    def is_subjective(self):
        return self in _SUBJECTIVE


_SUBJECTIVE = frozenset({VagoCategory.VD, VagoCategory.VC, VagoCategory.ES})
CATEGORIES = tuple(VagoCategory)


@dataclass(frozen=True)
class LexiconEntry:
    surface: tuple[str, ...]
    category: VagoCategory

    @property
    def text(self):
        return " ".join(self.surface)

    def __len__(self):
        return len(self.surface)


@dataclass
class TermMatch:
    entry: LexiconEntry
    start: int
    end: int
    quoted: bool = False
    cancelled: bool = False

    @property
    def token_range(self):
        return self.start, self.end

    @property
    def category(self):
        return self.entry.category


def surface_tokens(term: str) -> tuple[str, ...]:
    return tuple(t.text.lower() for t in tokenize(term))


class Lexicon:
    """An immutable set of entries indexed by first surface token.

    When the same surface is listed under several categories, the first one
    added wins at match time; all entries still count in the histogram.
    """

    def __init__(self, entries: Iterable[LexiconEntry] = ()):
        seen = {}
        for e in entries:
            seen.setdefault(e, None)
        self._entries = tuple(seen)
        self._index: dict[str, list[LexiconEntry]] = {}
        winners = {}
        for e in self._entries:
            winners.setdefault(e.surface, e)
        for e in winners.values():
            self._index.setdefault(e.surface[0], []).append(e)
        for bucket in self._index.values():
            bucket.sort(key=len, reverse=True)
        self._max_len = max((len(e) for e in self._entries), default=0)

    @property
    def entries(self):
        return self._entries

    @property
    def histogram(self) -> dict[VagoCategory, int]:
        counts = Counter(e.category for e in self._entries)
        return {c: counts.get(c, 0) for c in CATEGORIES}

    def __len__(self):
        return len(self._entries)

    def __contains__(self, term):
        return self.lookup(term) is not None

    def candidates(self, first: str) -> list[LexiconEntry]:
        return self._index.get(first, [])

    def lookup(self, term: str):
        """Entry that a match on ``term`` would produce, or None."""
        surface = surface_tokens(term)
        if not surface:
            return None
        for e in self.candidates(surface[0]):
            if e.surface == surface:
                return e
        return None


def load_lexicon(source) -> Lexicon:
    """Read a ``term<TAB>category`` file.

    ``source`` is any iterable of lines (an open file, a list of strings).
    Blank lines and lines starting with ``#`` are skipped. Terms are
    lowercased and tokenized the same way sentences are, so ``at most`` and
    ``!`` are both valid entries.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    entries = []
    for lineno, raw in enumerate(source, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise FormatError(f"expected 2 tab-separated fields, got {len(fields)}", lineno)
        term, label = fields[0].strip(), fields[1].strip()
        try:
            category = VagoCategory(label.upper())
        except ValueError:
            raise FormatError(f"unknown category {label}", lineno) from None
        surface = surface_tokens(term)
        if not surface:
            raise FormatError("empty term", lineno)
        entries.append(LexiconEntry(surface, category))
    return Lexicon(entries)


def load_lexicon_path(path) -> Lexicon:
    with open(path, encoding="utf-8", newline="") as fh:
        return load_lexicon(fh)


def match_terms(tokens: list[Token], quotes: list[QuoteSpan], lex: Lexicon) -> list[TermMatch]:
    """Greedy left-to-right, longest-first scan of ``tokens`` against ``lex``."""
    lowered = [t.text.lower() for t in tokens]
    n = len(lowered)
    matches = []
    i = 0
    while i < n:
        hit = None
        for entry in lex.candidates(lowered[i]):
            k = len(entry)
            if i + k <= n and tuple(lowered[i:i + k]) == entry.surface:
                hit = entry
                break
        if hit is None:
            i += 1
            continue
        end = i + len(hit)
        quoted = any(q.covers(i, end) for q in quotes)
        matches.append(TermMatch(hit, i, end, quoted=quoted))
        i = end
    return matches


FIXTURE_L0 = """\
# small illustrative lexicon used in tests and demos
approximately\tVA
some\tVG
many\tVG
at most\tVG
tall\tVD
old\tVD
beautiful\tVC
intelligent\tVC
good\tVC
skilled\tVC
!\tES
I\tES
of course\tES
"""


def fixture_lexicon() -> Lexicon:
    return load_lexicon(FIXTURE_L0)
