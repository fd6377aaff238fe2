"""Lexicon-based vagueness/subjectivity scoring and a hybrid subjectivity classifier."""

from .lexicon import Lexicon, VagoCategory, fixture_lexicon, load_lexicon
from .scoring import VagoScores, analyze, compute_scores, score_text, vago_terms
from .textprep import clean_brackets, detect_quotes, tokenize

__all__ = [
    "Lexicon", "VagoCategory", "VagoScores", "analyze", "clean_brackets", "compute_scores",
    "detect_quotes", "fixture_lexicon", "load_lexicon", "score_text", "tokenize", "vago_terms",
]
__version__ = "0.1.0"
