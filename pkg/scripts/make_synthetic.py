#!/usr/bin/env python3
"""Write a synthetic lexicon plus labeled train/dev corpora for CLI experiments.

    python scripts/make_synthetic.py out/ --n-train 400 --n-dev 400 --seed 0
"""

import argparse
from pathlib import Path

from subjfusion.corpus_io import CorpusRecord, write_corpus
from subjfusion.synthetic import DEFAULT_COUNTS, lexicon_tsv, synthetic_labeled_corpus, synthetic_lexicon


def dump(path, data):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        write_corpus([CorpusRecord(e.id, e.text, "SUBJ" if e.label else "OBJ") for e in data], fh, labeled=True)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("outdir", type=Path)
    ap.add_argument("--n-train", type=int, default=400)
    ap.add_argument("--n-dev", type=int, default=400)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--noise", type=float, default=0.01)
    args = ap.parse_args()

    args.outdir.mkdir(parents=True, exist_ok=True)
    lex = synthetic_lexicon(DEFAULT_COUNTS, seed=args.seed)
    (args.outdir / "lexicon.tsv").write_text(lexicon_tsv(lex), encoding="utf-8")
    train = synthetic_labeled_corpus(args.n_train, lex, seed=10 * args.seed + 1, noise=args.noise)
    dev = synthetic_labeled_corpus(args.n_dev, lex, seed=10 * args.seed + 2, noise=args.noise, prefix="d")
    dump(args.outdir / "train.tsv", train)
    dump(args.outdir / "dev.tsv", dev)
    n_subj = sum(e.label for e in train)
    print(f"wrote {len(lex)} terms, {len(train)} train ({n_subj} SUBJ), {len(dev)} dev to {args.outdir}")


if __name__ == "__main__":
    main()
