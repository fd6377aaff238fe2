"""Hybrid classifier: projected sentence embeddings plus lexicon scores.

The active embeddings are concatenated and linearly projected (no bias) to
``proj_dim`` dimensions, the four lexicon scores are appended, and a
logistic head produces P(subjective). Only the projection and the head are
trained; embeddings come from providers and are treated as fixed inputs.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .errors import ConfigError, DegenerateDataError, DivergenceError, ShapeError
from .scoring import analyze, compute_scores, vago_terms

SUBJ, OBJ = "SUBJ", "OBJ"
N_SCORES = 4

# preset names follow the encoder roles of the original comparison; the
# encoders themselves are whatever providers are plugged in as A and B
VARIANTS = {
    "roberta": dict(use_embed_a=True, use_embed_b=False, use_vago_terms=False, use_vago_scores=False),
    "roberta+sbert": dict(use_embed_a=True, use_embed_b=True, use_vago_terms=False, use_vago_scores=False),
    "roberta+terms": dict(use_embed_a=True, use_embed_b=False, use_vago_terms=True, use_vago_scores=False),
    "roberta+scores": dict(use_embed_a=True, use_embed_b=False, use_vago_terms=False, use_vago_scores=True),
    "roberta+sbert+scores": dict(use_embed_a=True, use_embed_b=True, use_vago_terms=False, use_vago_scores=True),
    "roberta+sbert+terms+scores": dict(use_embed_a=True, use_embed_b=True, use_vago_terms=True, use_vago_scores=True),
}
DEFAULT_VARIANT = "roberta+sbert+scores"


@dataclass(frozen=True)
class FusionConfig:
    use_embed_a: bool = True
    use_embed_b: bool = True
    use_vago_scores: bool = True
    use_vago_terms: bool = False
    proj_dim: int = 5
    separator: str = "[SEP]"
    epochs: int = 30
    batch_size: int = 6
    learning_rate: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        if not (self.use_embed_a or self.use_embed_b):
            raise ConfigError("at least one embedding must be enabled")
        if self.use_vago_terms and not self.use_embed_a:
            raise ConfigError("term augmentation feeds embedding A, which is disabled")
        if self.proj_dim < 1:
            raise ConfigError(f"proj_dim must be >= 1, got {self.proj_dim}")
        if self.batch_size < 1:
            raise ConfigError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.epochs < 0:
            raise ConfigError(f"epochs must be >= 0, got {self.epochs}")
        if not self.separator:
            raise ConfigError("separator must be non-empty")

    @classmethod
    def from_variant(cls, name: str, **overrides) -> "FusionConfig":
        try:
            flags = VARIANTS[name]
        except KeyError:
            raise ConfigError(f"unknown variant {name!r}; choose from {', '.join(VARIANTS)}") from None
        return cls(**{**flags, **overrides})

    @classmethod
    def from_dict(cls, d: dict) -> "FusionConfig":
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in known})

    @property
    def variant(self):
        flags = {k: getattr(self, k) for k in VARIANTS[DEFAULT_VARIANT]}
        for name, preset in VARIANTS.items():
            if preset == flags:
                return name
        return None


@dataclass
class FusionModel:
    projection: np.ndarray
    head_weights: np.ndarray
    head_bias: float
    config: FusionConfig
    dim_a: int = 0
    dim_b: int = 0
    threshold: float = 0.5
    embedders: dict = field(default_factory=dict)

    @property
    def input_dim(self):
        return self.dim_a * self.config.use_embed_a + self.dim_b * self.config.use_embed_b

    @property
    def head_dim(self):
        return self.config.proj_dim + N_SCORES * self.config.use_vago_scores

    def params(self):
        return {"projection": self.projection, "head_weights": self.head_weights,
                "head_bias": np.array(self.head_bias)}

    def copy(self):
        return FusionModel(self.projection.copy(), self.head_weights.copy(), float(self.head_bias),
                           self.config, self.dim_a, self.dim_b, self.threshold, dict(self.embedders))

    def to_dict(self):
        return {
            "config": asdict(self.config),
            "variant": self.config.variant,
            "augmented_terms": self.config.use_vago_terms,
            "dims": {"a": self.dim_a, "b": self.dim_b,
                     "projection_input": self.input_dim, "head_input": self.head_dim},
            "embedders": self.embedders,
            "projection": self.projection.tolist(),
            "head_weights": self.head_weights.tolist(),
            "head_bias": float(self.head_bias),
            "threshold": self.threshold,
        }

    @classmethod
    def from_dict(cls, d):
        config = FusionConfig.from_dict(d["config"])
        model = cls(
            projection=np.asarray(d["projection"], dtype=float).reshape(config.proj_dim, -1),
            head_weights=np.asarray(d["head_weights"], dtype=float),
            head_bias=float(d["head_bias"]),
            config=config,
            dim_a=int(d["dims"].get("a", 0)),
            dim_b=int(d["dims"].get("b", 0)),
            threshold=float(d.get("threshold", 0.5)),
            embedders=dict(d.get("embedders", {})),
        )
        check_model(model)
        return model

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=1)
            fh.write("\n")

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def check_model(model: FusionModel):
    expected = (model.config.proj_dim, model.input_dim)
    if model.projection.shape != expected:
        raise ShapeError(f"projection shape {model.projection.shape}, expected {expected}")
    if model.head_weights.shape != (model.head_dim,):
        raise ShapeError(f"head weights length {model.head_weights.shape[0]}, expected {model.head_dim}")
    for name, value in model.params().items():
        if not np.all(np.isfinite(value)):
            raise ShapeError(f"non-finite values in {name}")


def init_model(config: FusionConfig, dim_a: int = 0, dim_b: int = 0) -> FusionModel:
    """Uniform(-0.1, 0.1) weights from ``config.seed``; zero bias."""
    rng = np.random.default_rng(config.seed)
    in_dim = dim_a * config.use_embed_a + dim_b * config.use_embed_b
    if in_dim == 0:
        raise ConfigError("enabled embeddings have zero total dimension")
    head_dim = config.proj_dim + N_SCORES * config.use_vago_scores
    return FusionModel(
        projection=rng.uniform(-0.1, 0.1, size=(config.proj_dim, in_dim)),
        head_weights=rng.uniform(-0.1, 0.1, size=head_dim),
        head_bias=0.0,
        config=config,
        dim_a=dim_a if config.use_embed_a else 0,
        dim_b=dim_b if config.use_embed_b else 0,
    )


def sigmoid(z):
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def augment_with_terms(text: str, terms, separator: str = "[SEP]") -> str:
    if not separator:
        raise ConfigError("separator must be non-empty")
    tail = " ".join(terms)
    return f"{text} {separator} {tail}" if tail else f"{text} {separator}"


@dataclass(frozen=True)
class LabeledExample:
    id: str
    text: str
    label: int

    def __post_init__(self):
        if self.label not in (0, 1):
            raise ValueError(f"label must be 0 (OBJ) or 1 (SUBJ), got {self.label!r}")


@dataclass
class Features:
    ids: list
    embeddings: np.ndarray  # (n, input_dim)
    scores: np.ndarray  # (n, 4) or (n, 0)

    def __len__(self):
        return len(self.ids)


def featurize(items, config: FusionConfig, embed_a=None, embed_b=None, lexicon=None, ner=None) -> Features:
    """Build model inputs for ``(id, text)`` pairs.

    With ``use_vago_terms`` the text given to provider A is the sentence
    followed by the separator and the detected lexicon terms.
    """
    items = list(items)
    if config.use_embed_a and embed_a is None:
        raise ConfigError("variant needs embedding provider A")
    if config.use_embed_b and embed_b is None:
        raise ConfigError("variant needs embedding provider B")
    needs_lexicon = config.use_vago_scores or config.use_vago_terms
    if needs_lexicon and lexicon is None:
        raise ConfigError("variant uses lexicon features but no lexicon was given")

    rows, score_rows = [], []
    for sid, text in items:
        analysis = analyze(text, lexicon, ner, sid) if needs_lexicon else None
        parts = []
        if config.use_embed_a:
            text_a = augment_with_terms(text, vago_terms(analysis), config.separator) \
                if config.use_vago_terms else text
            parts.append(_checked(embed_a.embed(sid, text_a), embed_a.dim, "A"))
        if config.use_embed_b:
            parts.append(_checked(embed_b.embed(sid, text), embed_b.dim, "B"))
        rows.append(np.concatenate(parts))
        if config.use_vago_scores:
            score_rows.append(compute_scores(analysis).as_list())

    width = (embed_a.dim if config.use_embed_a else 0) + (embed_b.dim if config.use_embed_b else 0)
    emb = np.vstack(rows) if rows else np.zeros((0, width))
    n_scores = N_SCORES if config.use_vago_scores else 0
    scores = np.asarray(score_rows, dtype=float).reshape(len(items), n_scores)
    return Features([sid for sid, _ in items], emb, scores)


def _checked(vec, dim, which):
    vec = np.asarray(vec, dtype=float)
    if vec.shape != (dim,):
        raise ShapeError(f"embedding {which}: expected length {dim}, got {vec.shape[0]}")
    return vec


def _logits(model, emb, scores):
    hidden = emb @ model.projection.T
    head_in = np.hstack([hidden, scores]) if model.config.use_vago_scores else hidden
    return head_in @ model.head_weights + model.head_bias, hidden, head_in


def _check_features(model, emb, scores):
    if emb.ndim != 2 or emb.shape[1] != model.input_dim:
        raise ShapeError(f"embedding input: expected width {model.input_dim}, got {emb.shape[-1]}")
    want = N_SCORES if model.config.use_vago_scores else 0
    if scores.shape[1] != want:
        raise ShapeError(f"score input: expected {want} scores, got {scores.shape[1]}")


def predict_proba(model: FusionModel, features: Features) -> np.ndarray:
    _check_features(model, features.embeddings, features.scores)
    z, _, _ = _logits(model, features.embeddings, features.scores)
    return sigmoid(z)


def forward(model: FusionModel, embed_a=None, embed_b=None, scores=None) -> float:
    """P(subjective) for a single sentence."""
    cfg = model.config
    parts = []
    for on, vec, dim, which in ((cfg.use_embed_a, embed_a, model.dim_a, "A"),
                                (cfg.use_embed_b, embed_b, model.dim_b, "B")):
        if on:
            if vec is None:
                raise ShapeError(f"embedding {which} is required by this model")
            parts.append(_checked(vec, dim, which))
        elif vec is not None:
            raise ShapeError(f"embedding {which} given but the model does not use it")
    if cfg.use_vago_scores:
        if scores is None:
            raise ShapeError("lexicon scores are required by this model")
        s = np.asarray(scores.as_list() if hasattr(scores, "as_list") else scores, dtype=float)
        if s.shape != (N_SCORES,):
            raise ShapeError(f"expected {N_SCORES} scores, got {s.shape[0]}")
    else:
        if scores is not None:
            raise ShapeError("scores given but the model does not use them")
        s = np.zeros(0)
    z, _, _ = _logits(model, np.concatenate(parts)[None, :], s[None, :])
    return float(sigmoid(z)[0])


def predict(model: FusionModel, threshold: float, embed_a=None, embed_b=None, scores=None) -> str:
    """SUBJ when P(subjective) >= threshold."""
    if not 0.0 <= threshold <= 1.0:
        raise ConfigError(f"threshold must be in [0, 1], got {threshold}")
    return SUBJ if forward(model, embed_a, embed_b, scores) >= threshold else OBJ


def loss_and_grads(model: FusionModel, emb, scores, y):
    """Mean binary cross-entropy and its gradient for every parameter."""
    y = np.asarray(y, dtype=float)
    n = len(y)
    z, hidden, head_in = _logits(model, emb, scores)
    loss = float(np.mean(np.logaddexp(0.0, z) - y * z))
    dz = (sigmoid(z) - y) / n
    k = model.config.proj_dim
    d_hidden = np.outer(dz, model.head_weights[:k])
    grads = {
        "projection": d_hidden.T @ emb,
        "head_weights": head_in.T @ dz,
        "head_bias": np.array(dz.sum()),
    }
    return loss, grads


def bce_loss(model, emb, scores, y) -> float:
    z, _, _ = _logits(model, emb, scores)
    y = np.asarray(y, dtype=float)
    return float(np.mean(np.logaddexp(0.0, z) - y * z))


@dataclass
class TrainResult:
    model: FusionModel
    losses: list  # full-data mean BCE after each epoch
    initial_loss: float


def fit(config: FusionConfig, features: Features, labels, dim_a=0, dim_b=0) -> TrainResult:
    """Mini-batch gradient descent on the projection and head.

    The last short batch of an epoch is kept. All randomness (init and
    per-epoch shuffles) comes from ``config.seed``.
    """
    y = np.asarray(labels, dtype=float)
    if len(y) == 0:
        raise DegenerateDataError("no training examples")
    if len(y) != len(features):
        raise ShapeError(f"{len(features)} feature rows but {len(y)} labels")
    if np.all(y == y[0]):
        raise DegenerateDataError(f"training data has a single class ({SUBJ if y[0] else OBJ})")

    model = init_model(config, dim_a, dim_b)
    emb, scores = features.embeddings, features.scores
    _check_features(model, emb, scores)
    initial = bce_loss(model, emb, scores, y)
    with np.errstate(over="ignore", invalid="ignore"):
        losses = _descend(model, config, emb, scores, y)
    return TrainResult(model, losses, initial)


def _descend(model, config, emb, scores, y):
    rng = np.random.default_rng([config.seed, 1])
    lr = config.learning_rate
    losses = []
    for epoch in range(1, config.epochs + 1):
        order = rng.permutation(len(y))
        for lo in range(0, len(y), config.batch_size):
            idx = order[lo:lo + config.batch_size]
            _, g = loss_and_grads(model, emb[idx], scores[idx], y[idx])
            model.projection -= lr * g["projection"]
            model.head_weights -= lr * g["head_weights"]
            model.head_bias -= lr * float(g["head_bias"])
        loss = bce_loss(model, emb, scores, y)
        if not math.isfinite(loss) or not all(np.all(np.isfinite(p)) for p in model.params().values()):
            raise DivergenceError(epoch, loss)
        losses.append(loss)
    return losses


def train(config: FusionConfig, data, embed_a=None, embed_b=None, lexicon=None, ner=None) -> TrainResult:
    """Featurize ``LabeledExample``s and fit a model."""
    data = list(data)
    if not data:
        raise DegenerateDataError("no training examples")
    features = featurize(((ex.id, ex.text) for ex in data), config, embed_a, embed_b, lexicon, ner)
    result = fit(
        config, features, [ex.label for ex in data],
        dim_a=embed_a.dim if config.use_embed_a else 0,
        dim_b=embed_b.dim if config.use_embed_b else 0,
    )
    result.model.embedders = {
        k: p.name for k, p, on in (("a", embed_a, config.use_embed_a), ("b", embed_b, config.use_embed_b)) if on
    }
    return result
