"""Sentence corpora in the ``sentence_id<TAB>sentence[<TAB>label]`` layout."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .errors import FormatError
from .lexicon import Lexicon, match_terms, surface_tokens
from .textprep import clean_brackets, detect_quotes, tokenize

LABELS = {"SUBJ": 1, "OBJ": 0}
ID_COL, TEXT_COL, LABEL_COL = "sentence_id", "sentence", "label"


@dataclass(frozen=True)
class CorpusRecord:
    id: str
    text: str
    label: str | None = None

    @property
    def y(self) -> int:
        return LABELS[self.label]


def _reader(source):
    if isinstance(source, str):
        source = io.StringIO(source)
    return csv.reader(source, delimiter="\t", quoting=csv.QUOTE_NONE, quotechar=None)


def read_header(source):
    """Return (header fields, row iterator); header is None for empty input."""
    rows = _reader(source)
    header = next(rows, None)
    return header, rows


def load_corpus(source, labeled: bool, clean: bool = False) -> list[CorpusRecord]:
    """Parse a corpus, validating ids, texts and labels.

    Columns are located by header name, so extra columns (annotator ids,
    conflict flags) are ignored. ``clean`` strips square brackets left over
    from machine translation.
    """
    header, rows = read_header(source)
    return _parse(header, rows, labeled, clean)


def _parse(header, rows, labeled, clean):
    if header is None:
        return []
    header = [h.strip().lstrip("\ufeff") for h in header]
    wanted = [ID_COL, TEXT_COL] + ([LABEL_COL] if labeled else [])
    missing = [c for c in wanted if c not in header]
    if missing:
        raise FormatError(f"missing column(s) {', '.join(missing)} in header", 1)
    cols = [header.index(c) for c in wanted]

    records = []
    seen = set()
    for lineno, row in enumerate(rows, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != len(header):
            raise FormatError(f"expected {len(header)} fields, got {len(row)}", lineno)
        sid, text = row[cols[0]], row[cols[1]]
        if sid in seen:
            raise FormatError(f"duplicate sentence id {sid!r}", lineno)
        seen.add(sid)
        if clean:
            text = clean_brackets(text)
        if not text.strip():
            raise FormatError(f"empty sentence for id {sid!r}", lineno)
        label = None
        if labeled:
            label = row[cols[2]].strip()
            if label not in LABELS:
                raise FormatError(f"unknown label {label!r} (expected SUBJ or OBJ)", lineno)
        records.append(CorpusRecord(sid, text, label))
    return records


def read_corpus_path(path, clean=False, require_labels=False):
    """Load a corpus file, deciding labeled/unlabeled from its header."""
    with open(path, encoding="utf-8", newline="") as fh:
        header, rows = read_header(fh)
        labeled = header is not None and LABEL_COL in (h.strip().lstrip("\ufeff") for h in header)
        if require_labels and header is not None and not labeled:
            raise FormatError(f"{path}: corpus has no {LABEL_COL!r} column")
        return _parse(header, rows, labeled, clean)


def write_corpus(records, sink, labeled: bool):
    w = csv.writer(sink, delimiter="\t", quoting=csv.QUOTE_NONE, quotechar=None, lineterminator="\n")
    w.writerow([ID_COL, TEXT_COL, LABEL_COL] if labeled else [ID_COL, TEXT_COL])
    for r in records:
        w.writerow([r.id, r.text, r.label] if labeled else [r.id, r.text])


def audit_term(corpus, term: str, lexicon: Lexicon) -> tuple[int, int]:
    """Count sentences containing ``term`` and how many of them are OBJ.

    A lexicon term is detected through the regular matcher, so it is found
    exactly where scoring would see it; any other term is searched as a raw
    token subsequence.
    """
    entry = lexicon.lookup(term)
    needle = surface_tokens(term)
    n_containing = n_objective = 0
    for rec in corpus:
        if rec.label is None:
            raise ValueError(f"audit needs a labeled corpus (sentence {rec.id!r} has no label)")
        tokens = tokenize(rec.text)
        if entry is not None:
            found = any(m.entry == entry for m in match_terms(tokens, detect_quotes(tokens), lexicon))
        else:
            low = [t.text.lower() for t in tokens]
            k = len(needle)
            found = k > 0 and any(tuple(low[i:i + k]) == needle for i in range(len(low) - k + 1))
        if found:
            n_containing += 1
            n_objective += rec.label == "OBJ"
    return n_containing, n_objective


class IdentityTranslator:
    """Translation hook. Non-English corpora are expected pre-translated."""

    name = "identity"

    def translate(self, text: str, source_lang: str = "en") -> str:
        return text
