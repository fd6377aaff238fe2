#!/usr/bin/env python3
"""Train every feature preset on synthetic data and print a comparison table.

Thresholds are picked on the training split (macro-F1 sweep) and applied to
a held-out split. Hash embedders stand in for the transformer encoders, so
only the relative ordering of the presets is meaningful.

    python scripts/run_variants.py --seeds 3 --dim 16
"""

import argparse
import time

import numpy as np

from subjfusion.embeddings import HashEmbedder
from subjfusion.evaluation import metrics, sweep_threshold
from subjfusion.fusion import VARIANTS, FusionConfig, featurize, predict_proba, train
from subjfusion.synthetic import synthetic_labeled_corpus, synthetic_lexicon


def run(variant, tr, te, lex, emb_a, emb_b, args, seed):
    cfg = FusionConfig.from_variant(variant, learning_rate=args.lr, epochs=args.epochs,
                                    batch_size=args.batch_size, seed=seed)
    model = train(cfg, tr, emb_a, emb_b, lex).model

    def probs(data):
        return predict_proba(model, featurize([(e.id, e.text) for e in data], cfg, emb_a, emb_b, lex))

    thr, _ = sweep_threshold([e.label for e in tr], probs(tr))
    r = metrics([e.label for e in te], probs(te) >= thr)
    return r.macro_f1, r.subj_f1, thr


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=3)
    ap.add_argument("--n", type=int, default=400, help="examples per split")
    ap.add_argument("--dim", type=int, default=16, help="hash embedding size")
    ap.add_argument("--lr", type=float, default=3.0)
    ap.add_argument("--epochs", type=int, default=30)
    ap.add_argument("--batch-size", type=int, default=6)
    args = ap.parse_args()

    lex = synthetic_lexicon(seed=0)
    emb_a, emb_b = HashEmbedder(args.dim, 0), HashEmbedder(args.dim, 1)
    results = {v: [] for v in VARIANTS}
    t0 = time.perf_counter()
    for s in range(args.seeds):
        tr = synthetic_labeled_corpus(args.n, lex, seed=10 * s + 1)
        te = synthetic_labeled_corpus(args.n, lex, seed=10 * s + 2, prefix="t")
        for v in VARIANTS:
            results[v].append(run(v, tr, te, lex, emb_a, emb_b, args, s))

    print(f"{'preset':<30}{'macro F1':>10}{'SUBJ F1':>10}{'thr':>7}")
    for v, rows in results.items():
        m = np.mean(rows, axis=0)
        print(f"{v:<30}{m[0]:>10.4f}{m[1]:>10.4f}{m[2]:>7.2f}")
    print(f"({args.seeds} seeds, {time.perf_counter() - t0:.1f}s)")


if __name__ == "__main__":
    main()
