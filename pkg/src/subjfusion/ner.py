"""Named-entity counting.

Two providers share one interface, ``annotate(tokens, sentence_id=None)``:
a built-in pattern recognizer and a reader for annotations produced
elsewhere (e.g. by spaCy) and stored as JSON lines.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass

from .errors import ConfigError, FormatError, UnknownIdError
from .textprep import NUMBER, WORD

PERSON_ORG_LOC = "person_or_org_or_loc"
TEMPORAL = "temporal"
NUMBER_LABEL = "number"
LABELS = frozenset({PERSON_ORG_LOC, TEMPORAL, NUMBER_LABEL})

# never entities, at sentence start or elsewhere
FUNCTION_WORDS = frozenset(
    {"the", "a", "an", "this", "that", "it", "he", "she", "they", "we", "you", "i"}
)

MONTHS = frozenset(
    "january february march april may june july august september october november december".split()
)
WEEKDAYS = frozenset("monday tuesday wednesday thursday friday saturday sunday".split())
_DATE_WORDS = MONTHS | WEEKDAYS


@dataclass(frozen=True)
class EntitySpan:
    start: int
    end: int
    label: str

    @property
    def token_range(self):
        return self.start, self.end


def _capitalized(tok):
    return tok.kind == WORD and tok.text[0].isupper() and tok.text.lower() not in FUNCTION_WORDS


def _is_temporal(tok):
    if tok.kind == NUMBER:
        return len(tok.text) == 4 and tok.text.isdecimal()
    return tok.text[0].isupper() and tok.text.lower() in _DATE_WORDS


def pattern_annotate(tokens) -> list[EntitySpan]:
    """Rule-based stand-in for a statistical recognizer.

    Rules, in priority order when spans overlap:

    1. maximal runs of capitalized word tokens (sentence-initial included)
       that are not function words -> person_or_org_or_loc;
    2. capitalized month/weekday names and 4-digit numbers -> temporal;
    3. any number token -> number.
    """
    taken = [False] * len(tokens)
    spans = []

    i = 0
    while i < len(tokens):
        if _capitalized(tokens[i]):
            j = i + 1
            while j < len(tokens) and _capitalized(tokens[j]):
                j += 1
            spans.append(EntitySpan(i, j, PERSON_ORG_LOC))
            taken[i:j] = [True] * (j - i)
            i = j
        else:
            i += 1

    for label, rule in ((TEMPORAL, _is_temporal), (NUMBER_LABEL, lambda t: t.kind == NUMBER)):
        for i, tok in enumerate(tokens):
            if not taken[i] and rule(tok):
                spans.append(EntitySpan(i, i + 1, label))
                taken[i] = True

    spans.sort(key=lambda s: s.start)
    return spans


class PatternNer:
    name = "pattern"

    def annotate(self, tokens, sentence_id=None):
        return pattern_annotate(tokens)


class FileNer:
    """Serves stored entity spans by sentence id."""

    def __init__(self, spans_by_id, name="file"):
        self._spans = spans_by_id
        self.name = name

    def __contains__(self, sentence_id):
        return sentence_id in self._spans

    def annotate(self, tokens, sentence_id=None):
        if sentence_id not in self._spans:
            raise UnknownIdError(sentence_id, "entity annotations")
        spans = self._spans[sentence_id]
        if spans and spans[-1].end > len(tokens):
            raise FormatError(
                f"entity span {spans[-1].token_range} exceeds {len(tokens)} tokens "
                f"for sentence {sentence_id!r}"
            )
        return list(spans)


def load_external_annotations(source, name="file") -> FileNer:
    if isinstance(source, str):
        source = io.StringIO(source)
    table = {}
    for lineno, line in enumerate(source, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            sid = obj["id"]
            raw = obj["entities"]
            spans = [EntitySpan(int(s), int(e), str(lab)) for s, e, lab in raw]
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"malformed annotation line ({exc})", lineno) from None
        for sp in spans:
            if sp.label not in LABELS:
                raise FormatError(f"unknown entity label {sp.label}", lineno)
            if not 0 <= sp.start < sp.end:
                raise FormatError(f"empty or negative span {sp.token_range}", lineno)
        spans.sort(key=lambda s: s.start)
        for a, b in zip(spans, spans[1:]):
            if b.start < a.end:
                raise FormatError(f"overlapping spans {a.token_range} and {b.token_range}", lineno)
        table[sid] = spans
    return FileNer(table, name)


def make_ner(selector: str):
    """Build a provider from ``pattern`` or ``file:<path>``."""
    if selector == "pattern":
        return PatternNer()
    if selector.startswith("file:"):
        path = selector[len("file:"):]
        with open(path, encoding="utf-8") as fh:
            return load_external_annotations(fh, name=selector)
    raise ConfigError(f"unknown NER selector {selector!r} (expected 'pattern' or 'file:<path>')")
