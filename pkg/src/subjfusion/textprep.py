"""Tokenization, quotation spans and bracket cleanup for single sentences.

Token spans are character offsets into the NFC-normalized input; use
:func:`normalize` to obtain the string the spans refer to.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from typing import NamedTuple

WORD = "word"
NUMBER = "number"
PUNCT = "punctuation"

# alphanumeric runs; apostrophes/hyphens join letters, '.'/',' join digits only
_ALNUM = r"[^\W_]+(?:(?:['’\-]|(?<=\d)[.,](?=\d))[^\W_]+)*"
_TOKEN_RE = re.compile(rf"{_ALNUM}|[^\w\s]|_")

_STRAIGHT = '"'
_CURLY_PAIRS = {"“": "”", "„": "”"}


@dataclass(frozen=True)
class Token:
    text: str
    start: int
    end: int
    kind: str

    @property
    def span(self):
        return self.start, self.end

    @property
    def is_wordlike(self):
        return self.kind != PUNCT


class QuoteSpan(NamedTuple):
    """Half-open token-index interval of the material between two quote marks."""

    open: int
    close: int

    def covers(self, start, end):
        return self.open <= start and end <= self.close


def normalize(text: str) -> str:
    return unicodedata.normalize("NFC", text)


def _kind(text):
    if text[0].isdecimal():
        return NUMBER
    if not any(c.isalnum() for c in text):
        return PUNCT
    return WORD


def tokenize(text: str) -> list[Token]:
    """Split a sentence into word, number and punctuation tokens.

    Every non-space character ends up in exactly one token. Punctuation is
    emitted one character per token, so ``"beautiful!"`` yields two tokens
    and the ``!`` stays available for lexicon matching. Digits glued to
    letters stay together (``180cm`` is a single number token).
    """
    text = normalize(text)
    return [
        Token(m.group(), m.start(), m.end(), _kind(m.group()))
        for m in _TOKEN_RE.finditer(text)
    ]


def word_count(tokens) -> int:
    """Number of word and number tokens; punctuation does not count."""
    return sum(1 for t in tokens if t.kind != PUNCT)


def detect_quotes(tokens) -> list[QuoteSpan]:
    """Pair quotation marks left to right.

    A straight ``"`` closes only a straight ``"``; a curly opener closes only
    on its matching curly closer. Marks of the other style seen while a quote
    is open are treated as ordinary punctuation (no nesting). An opener that
    is never closed yields nothing, nor does an empty pair.
    """
    spans = []
    opener = None
    closer = None
    for i, tok in enumerate(tokens):
        ch = tok.text
        if opener is None:
            if ch == _STRAIGHT:
                opener, closer = i, _STRAIGHT
            elif ch in _CURLY_PAIRS:
                opener, closer = i, _CURLY_PAIRS[ch]
        elif ch == closer:
            if i - opener > 1:
                spans.append(QuoteSpan(opener + 1, i))
            opener = closer = None
    return spans


_BRACKET_RUN = re.compile(r"[\s\[\]]*[\[\]][\s\[\]]*")


def clean_brackets(text: str) -> str:
    """Remove square brackets, collapsing the whitespace around them.

    Whitespace adjacent to removed brackets is merged into a single space,
    or dropped entirely at either end of the string. Text without brackets
    is returned untouched.
    """
    if "[" not in text and "]" not in text:
        return text

    def repl(m):
        if m.start() == 0 or m.end() == len(text):
            return ""
        return " " if any(c.isspace() for c in m.group()) else ""

    return _BRACKET_RUN.sub(repl, text)
