"""Sentence vector providers.

``HashEmbedder`` is a deterministic bag-of-tokens feature hasher used for
tests and offline runs. ``FileEmbedder`` serves vectors computed elsewhere
(a fine-tuned encoder, a frozen sentence encoder) keyed by sentence id.
"""

from __future__ import annotations

import hashlib
import io
import json
from functools import lru_cache

import numpy as np

from .errors import ConfigError, FormatError, UnknownIdError
from .textprep import PUNCT, tokenize

DEFAULT_DIM = 768


@lru_cache(maxsize=1 << 16)
def _token_hash(token: str, seed: int) -> int:
    # blake2b keyed with the seed: stable across platforms and interpreter runs
    key = (seed & 0xFFFFFFFFFFFFFFFF).to_bytes(8, "little")
    digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8, key=key).digest()
    return int.from_bytes(digest, "little")


def hash_embed(text: str, dim: int = DEFAULT_DIM, seed: int = 0) -> np.ndarray:
    """Signed feature hashing of lowercased word tokens, L2-normalized.

    Each token contributes +1 or -1 (top hash bit) at index ``hash % dim``.
    Text without word tokens maps to the zero vector.
    """
    if dim < 1:
        raise ConfigError(f"embedding dim must be >= 1, got {dim}")
    vec = np.zeros(dim)
    for tok in tokenize(text):
        if tok.kind == PUNCT:
            continue
        h = _token_hash(tok.text.lower(), seed)
        vec[h % dim] += -1.0 if h >> 63 else 1.0
    norm = np.linalg.norm(vec)
    if norm > 0:
        vec /= norm
    return vec


class HashEmbedder:
    def __init__(self, dim: int = DEFAULT_DIM, seed: int = 0):
        if dim < 1:
            raise ConfigError(f"embedding dim must be >= 1, got {dim}")
        self.dim = dim
        self.seed = seed
        self.name = f"hash:{dim}:{seed}"
        # vectors are computed from text, so augmentation happens on the fly
        self.augmented = None

    def embed(self, sentence_id, text):
        return hash_embed(text, self.dim, self.seed)


class FileEmbedder:
    """Vectors looked up by sentence id; the text argument is ignored.

    ``augmented`` is True/False when the file declares whether term
    augmentation was applied before encoding, None when it does not say.
    """

    def __init__(self, vectors: dict, dim: int, name="file", augmented=None):
        self._vectors = vectors
        self.dim = dim
        self.name = name
        self.augmented = augmented

    def __contains__(self, sentence_id):
        return sentence_id in self._vectors

    def embed(self, sentence_id, text=None):
        try:
            return self._vectors[sentence_id]
        except KeyError:
            raise UnknownIdError(sentence_id, f"embeddings {self.name}") from None


def load_embedding_file(source, name="file") -> FileEmbedder:
    """Read ``{"id": ..., "vector": [...]}`` lines (optional ``"augmented"`` flag)."""
    if isinstance(source, str):
        source = io.StringIO(source)
    vectors = {}
    dim = None
    flags = set()
    for lineno, line in enumerate(source, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            sid = obj["id"]
            vec = np.asarray(obj["vector"], dtype=float)
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"malformed embedding line ({exc})", lineno) from None
        if vec.ndim != 1 or vec.size == 0:
            raise FormatError("vector must be a non-empty flat list", lineno)
        if not np.all(np.isfinite(vec)):
            raise FormatError("vector has non-finite entries", lineno)
        if dim is None:
            dim = vec.size
        elif vec.size != dim:
            raise FormatError(f"inconsistent vector lengths: {dim} vs {vec.size}", lineno)
        if "augmented" in obj:
            flags.add(bool(obj["augmented"]))
        vec.setflags(write=False)
        vectors[sid] = vec
    if len(flags) > 1:
        raise FormatError("mixed 'augmented' flags in embedding file")
    return FileEmbedder(vectors, dim or 0, name, flags.pop() if flags else None)


def make_embedder(selector: str):
    """Parse ``hash:<dim>:<seed>`` (dim/seed optional) or ``file:<path>``."""
    if selector.startswith("file:"):
        path = selector[len("file:"):]
        with open(path, encoding="utf-8") as fh:
            return load_embedding_file(fh, name=selector)
    if selector == "hash" or selector.startswith("hash:"):
        parts = selector.split(":")[1:]
        try:
            dim = int(parts[0]) if parts and parts[0] else DEFAULT_DIM
            seed = int(parts[1]) if len(parts) > 1 else 0
        except ValueError:
            raise ConfigError(f"bad hash embedder selector {selector!r}") from None
        if len(parts) > 2:
            raise ConfigError(f"bad hash embedder selector {selector!r}")
        return HashEmbedder(dim, seed)
    raise ConfigError(f"unknown embedding selector {selector!r} (expected hash:<dim>:<seed> or file:<path>)")
