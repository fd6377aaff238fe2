"""Command-line entry point: ``subjfusion <command> [options]``."""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import corpus_io, evaluation, fusion
from .embeddings import DEFAULT_DIM, make_embedder
from .errors import ConfigError, DivergenceError, FormatError, ShapeError, UnknownIdError
from .lexicon import CATEGORIES, Lexicon, load_lexicon_path
from .ner import make_ner
from .scoring import analysis_record, analyze

# every library error derives from one of these
HANDLED = (OSError, ValueError, UnknownIdError, DivergenceError)


@dataclass
class RunConfig:
    command: str
    lexicon: str | None = None
    ner: str = "pattern"
    embed_a: str | None = None
    embed_b: str | None = None
    variant: str | None = None
    threshold: float | None = None
    grid_step: float = 0.05
    seed: int = 0
    clean_brackets: bool = False
    out: str | None = None
    corpus: str | None = None
    model: str | None = None
    scores: str | None = None
    term: str | None = None
    epochs: int = 30
    batch_size: int = 6
    learning_rate: float = 1e-3
    loss_csv: str | None = None
    roc_csv: str | None = None
    predictions: str | None = None
    sweep: bool = False

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        known = set(cls.__dataclass_fields__)
        return cls(**{k: v for k, v in vars(ns).items() if k in known})

    def fusion_config(self) -> fusion.FusionConfig:
        return fusion.FusionConfig.from_variant(
            self.variant or fusion.DEFAULT_VARIANT,
            epochs=self.epochs, batch_size=self.batch_size,
            learning_rate=self.learning_rate, seed=self.seed,
        )

    def check_paths(self):
        inputs = {os.path.abspath(p) for p in (self.lexicon, self.corpus, self.model, self.scores) if p}
        for sel in (self.embed_a, self.embed_b, self.ner):
            if sel and sel.startswith("file:"):
                inputs.add(os.path.abspath(sel[5:]))
        for out in (self.out, self.loss_csv, self.roc_csv, self.predictions):
            if out and os.path.abspath(out) in inputs:
                raise ConfigError(f"output path {out} would overwrite an input")


def _lexicon(cfg, required=True) -> Lexicon | None:
    if cfg.lexicon is None:
        if required:
            raise ConfigError("--lexicon is required for this command")
        return None
    return load_lexicon_path(cfg.lexicon)


def _open_out(path):
    return open(path, "w", encoding="utf-8", newline="") if path else _Stdout()


class _Stdout:
    def __enter__(self):
        return sys.stdout

    def __exit__(self, *exc):
        sys.stdout.flush()


def _dumps(obj):
    return json.dumps(obj, ensure_ascii=False)


def cmd_analyze(cfg: RunConfig) -> int:
    lex = _lexicon(cfg)
    ner = make_ner(cfg.ner)
    records = corpus_io.read_corpus_path(cfg.corpus, clean=cfg.clean_brackets)
    with _open_out(cfg.out) as fh:
        for rec in records:
            fh.write(_dumps(analysis_record(rec.id, analyze(rec.text, lex, ner, rec.id))) + "\n")
    return 0


def _providers(cfg, fc, recorded=None):
    recorded = recorded or {}
    sel_a = cfg.embed_a or recorded.get("a") or f"hash:{DEFAULT_DIM}:{cfg.seed}"
    sel_b = cfg.embed_b or recorded.get("b") or f"hash:{DEFAULT_DIM}:{cfg.seed + 1}"
    a = make_embedder(sel_a) if fc.use_embed_a else None
    b = make_embedder(sel_b) if fc.use_embed_b else None
    if a is not None and a.augmented is not None and a.augmented != fc.use_vago_terms:
        state = "term-augmented" if a.augmented else "plain"
        raise ConfigError(
            f"embedding file {sel_a} holds {state} vectors but variant "
            f"{fc.variant} expects augmented={fc.use_vago_terms}"
        )
    return a, b


def _labeled(cfg):
    records = corpus_io.read_corpus_path(cfg.corpus, clean=cfg.clean_brackets, require_labels=True)
    return [fusion.LabeledExample(r.id, r.text, r.y) for r in records]


def cmd_train(cfg: RunConfig) -> int:
    if not cfg.out:
        raise ConfigError("train needs --out for the model file")
    fc = cfg.fusion_config()
    lex = _lexicon(cfg, required=fc.use_vago_scores or fc.use_vago_terms)
    ner = make_ner(cfg.ner)
    embed_a, embed_b = _providers(cfg, fc)
    data = _labeled(cfg)
    result = fusion.train(fc, data, embed_a, embed_b, lex, ner)
    if cfg.threshold is not None:
        result.model.threshold = cfg.threshold
    result.model.save(cfg.out)

    loss_path = cfg.loss_csv or os.path.splitext(cfg.out)[0] + ".losses.csv"
    with open(loss_path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["epoch", "loss"])
        w.writerow([0, repr(result.initial_loss)])
        for i, loss in enumerate(result.losses, start=1):
            w.writerow([i, repr(loss)])
    final = result.losses[-1] if result.losses else result.initial_loss
    print(f"initial loss {result.initial_loss:.6f}  final loss {final:.6f}  "
          f"({len(result.losses)} epochs, head input {result.model.head_dim})")
    return 0


def _model_scores(cfg):
    """Load model + corpus and return (model, examples, probabilities)."""
    model = fusion.FusionModel.load(cfg.model)
    fc = model.config
    if cfg.variant and cfg.variant != fc.variant:
        raise ConfigError(f"--variant {cfg.variant} does not match the model's variant {fc.variant}")
    lex = _lexicon(cfg, required=fc.use_vago_scores or fc.use_vago_terms)
    ner = make_ner(cfg.ner)
    embed_a, embed_b = _providers(cfg, fc, model.embedders)
    for which, prov, want in (("A", embed_a, model.dim_a), ("B", embed_b, model.dim_b)):
        if prov is not None and prov.dim != want:
            raise ShapeError(f"embedding {which} has dim {prov.dim} but the model expects {want}")
    data = _labeled(cfg)
    feats = fusion.featurize(((ex.id, ex.text) for ex in data), fc, embed_a, embed_b, lex, ner)
    return model, data, fusion.predict_proba(model, feats)


def cmd_evaluate(cfg: RunConfig) -> int:
    model, data, probs = _model_scores(cfg)
    y = [ex.label for ex in data]
    threshold = model.threshold if cfg.threshold is None else cfg.threshold
    report = evaluation.evaluate_scores(y, probs, threshold).to_dict()
    if cfg.sweep:
        best, f1 = evaluation.sweep_threshold(y, probs, evaluation.default_grid(cfg.grid_step))
        report["sweep"] = {"threshold": best, "macro_f1": f1, "grid_step": cfg.grid_step}
    with _open_out(cfg.out) as fh:
        fh.write(json.dumps(report, indent=1) + "\n")
    if cfg.roc_csv and report["roc"]:
        with open(cfg.roc_csv, "w", encoding="utf-8", newline="") as fh:
            evaluation.write_roc_csv(report["roc"], fh)
    if cfg.predictions:
        with open(cfg.predictions, "w", encoding="utf-8", newline="") as fh:
            _write_scores(fh, data, probs)
    return 0


def _write_scores(fh, data, probs):
    w = csv.writer(fh, delimiter="\t", lineterminator="\n")
    w.writerow(["sentence_id", "label", "score"])
    for ex, p in zip(data, probs):
        w.writerow([ex.id, fusion.SUBJ if ex.label else fusion.OBJ, repr(float(p))])


def read_scores(path):
    """Read a ``sentence_id<TAB>label<TAB>score`` file into (labels, scores)."""
    y, s = [], []
    with open(path, encoding="utf-8", newline="") as fh:
        rows = csv.DictReader(fh, delimiter="\t")
        if rows.fieldnames is None or not {"label", "score"} <= set(rows.fieldnames):
            raise FormatError(f"{path}: expected columns sentence_id, label, score")
        for lineno, row in enumerate(rows, start=2):
            if row["label"] not in corpus_io.LABELS:
                raise FormatError(f"unknown label {row['label']!r}", lineno)
            try:
                s.append(float(row["score"]))
            except (TypeError, ValueError):
                raise FormatError(f"bad score {row['score']!r}", lineno) from None
            y.append(corpus_io.LABELS[row["label"]])
    return np.array(y), np.array(s)


def cmd_sweep(cfg: RunConfig) -> int:
    if cfg.scores:
        y, probs = read_scores(cfg.scores)
    elif cfg.model and cfg.corpus:
        _, data, probs = _model_scores(cfg)
        y = [ex.label for ex in data]
    else:
        raise ConfigError("sweep needs --scores, or --model with --corpus")
    grid = evaluation.default_grid(cfg.grid_step)
    best, f1 = evaluation.sweep_threshold(y, probs, grid)
    with _open_out(cfg.out) as fh:
        fh.write(_dumps({"threshold": best, "macro_f1": f1, "grid_step": cfg.grid_step}) + "\n")
    return 0


def cmd_audit(cfg: RunConfig) -> int:
    if not cfg.term:
        raise ConfigError("audit needs --term")
    lex = _lexicon(cfg)
    records = corpus_io.read_corpus_path(cfg.corpus, clean=cfg.clean_brackets, require_labels=True)
    n, n_obj = corpus_io.audit_term(records, cfg.term, lex)
    with _open_out(cfg.out) as fh:
        fh.write(_dumps({"term": cfg.term, "n_containing": n, "n_objective": n_obj}) + "\n")
    return 0


_CATEGORY_NAMES = {
    "VA": "Approximation", "VG": "Generality", "VD": "Degree vagueness",
    "VC": "Combinatorial vagueness", "ES": "Explicit subjectivity",
}


def cmd_lexicon_stats(cfg: RunConfig) -> int:
    lex = _lexicon(cfg)
    hist = lex.histogram
    with _open_out(cfg.out) as fh:
        for cat in CATEGORIES:
            fh.write(f"{_CATEGORY_NAMES[cat.value]:<26}{cat.value:<4}{hist[cat]:>8,}\n")
        fh.write(f"{'All categories':<30}{len(lex):>8,}\n")
    return 0


COMMANDS = {
    "analyze": cmd_analyze,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "sweep": cmd_sweep,
    "audit": cmd_audit,
    "lexicon-stats": cmd_lexicon_stats,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("pipeline options")
    g.add_argument("--lexicon", help="lexicon TSV (term<TAB>category)")
    g.add_argument("--ner", default="pattern", help="'pattern' or 'file:<annotations.jsonl>'")
    g.add_argument("--embed-a", help="provider A: hash:<dim>:<seed> or file:<vectors.jsonl>")
    g.add_argument("--embed-b", help="provider B: hash:<dim>:<seed> or file:<vectors.jsonl>")
    g.add_argument("--variant", choices=list(fusion.VARIANTS), help="feature preset")
    g.add_argument("--threshold", type=float, help="decision threshold on P(SUBJ)")
    g.add_argument("--grid-step", type=float, default=0.05, help="threshold grid step (default 0.05)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--clean-brackets", action="store_true", help="strip [ and ] from sentences")
    g.add_argument("--out", help="output file (stdout when omitted, where allowed)")

    parser = argparse.ArgumentParser(prog="subjfusion", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="per-sentence lexicon scores as JSON lines")
    p.add_argument("--corpus", required=True)

    p = sub.add_parser("train", parents=[common], help="train the fusion classifier")
    p.add_argument("--corpus", required=True)
    p.add_argument("--epochs", type=int, default=30)
    p.add_argument("--batch-size", type=int, default=6)
    p.add_argument("--lr", dest="learning_rate", type=float, default=1e-3)
    p.add_argument("--loss-csv", help="per-epoch loss trace (default: <out>.losses.csv)")

    p = sub.add_parser("evaluate", parents=[common], help="score a labeled corpus with a model")
    p.add_argument("--model", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--sweep", action="store_true", help="also report the best grid threshold")
    p.add_argument("--roc-csv")
    p.add_argument("--predictions", help="write sentence_id/label/score TSV")

    p = sub.add_parser("sweep", parents=[common], help="best macro-F1 threshold on a grid")
    p.add_argument("--scores", help="sentence_id/label/score TSV")
    p.add_argument("--model")
    p.add_argument("--corpus")

    p = sub.add_parser("audit", parents=[common], help="how often sentences with a term are OBJ")
    p.add_argument("--corpus", required=True)
    p.add_argument("--term", required=True)

    sub.add_parser("lexicon-stats", parents=[common], help="entries per category")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig.from_args(args)
    try:
        cfg.check_paths()
        return COMMANDS[cfg.command](cfg)
    except BrokenPipeError:
        # downstream reader closed early (e.g. `| head`); not an error
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    except HANDLED as exc:
        print(f"subjfusion {cfg.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
