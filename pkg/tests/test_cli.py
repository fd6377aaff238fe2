import csv
import json
from fractions import Fraction

import numpy as np
import pytest

from subjfusion.cli import main
from subjfusion.corpus_io import CorpusRecord, write_corpus
from subjfusion.fusion import FusionModel, FusionConfig, init_model
from subjfusion.lexicon import FIXTURE_L0
from subjfusion.synthetic import synthetic_labeled_corpus, synthetic_lexicon, lexicon_tsv


@pytest.fixture
def l0_path(tmp_path):
    p = tmp_path / "l0.tsv"
    p.write_text(FIXTURE_L0, encoding="utf-8")
    return str(p)


@pytest.fixture(scope="module")
def synth(tmp_path_factory):
    d = tmp_path_factory.mktemp("synth")
    lex = synthetic_lexicon({"VA": 5, "VG": 10, "VD": 20, "VC": 100, "ES": 5}, seed=1)
    (d / "lex.tsv").write_text(lexicon_tsv(lex), encoding="utf-8")
    data = synthetic_labeled_corpus(120, lex, seed=3)
    with open(d / "train.tsv", "w", encoding="utf-8", newline="") as fh:
        write_corpus([CorpusRecord(e.id, e.text, "SUBJ" if e.label else "OBJ") for e in data], fh, labeled=True)
    return d


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_oracle_corpus(capsys, fixtures_dir, l0_path):
    code, out, _ = run(capsys, "analyze", "--lexicon", l0_path, "--corpus", fixtures_dir / "oracle_corpus.tsv")
    assert code == 0
    lines = [json.loads(x) for x in out.splitlines()]
    assert len(lines) == 30
    with open(fixtures_dir / "oracle_expected.tsv", encoding="utf-8") as fh:
        rows = list(csv.DictReader((r for r in fh if not r.startswith("#")), delimiter="\t"))
    expected = {r["sentence_id"]: r for r in rows}
    keys = ["vagueness", "subjectivity", "detail_vs_vagueness", "objectivity_vs_subjectivity"]
    for rec in lines:
        want = [float(Fraction(expected[rec["id"]][k])) for k in keys]
        assert rec["scores"] == pytest.approx(want, abs=1e-12)


def test_analyze_missing_lexicon_names_path(capsys, fixtures_dir, tmp_path):
    missing = tmp_path / "nope.tsv"
    code, _, err = run(capsys, "analyze", "--lexicon", missing, "--corpus", fixtures_dir / "oracle_corpus.tsv")
    assert code != 0
    assert str(missing) in err


def test_analyze_empty_corpus(capsys, tmp_path, l0_path):
    c = tmp_path / "empty.tsv"
    c.write_text("sentence_id\tsentence\n")
    code, out, _ = run(capsys, "analyze", "--lexicon", l0_path, "--corpus", c)
    assert code == 0 and out == ""


def test_lexicon_stats(capsys, fixtures_dir):
    code, out, _ = run(capsys, "lexicon-stats", "--lexicon", fixtures_dir / "lexicon_full_size.tsv")
    assert code == 0
    assert "1,500" in out and out.splitlines()[-1].split()[-1] == "1,614"


def test_audit(capsys, tmp_path, l0_path):
    c = tmp_path / "c.tsv"
    c.write_text("sentence_id\tsentence\tlabel\n1\tMany came\tOBJ\n2\tToo many\tSUBJ\n3\tmany more\tOBJ\n4\tnone\tOBJ\n")
    code, out, _ = run(capsys, "audit", "--lexicon", l0_path, "--corpus", c, "--term", "many")
    assert code == 0
    assert json.loads(out) == {"term": "many", "n_containing": 3, "n_objective": 2}


def test_output_cannot_overwrite_input(capsys, l0_path, fixtures_dir):
    code, _, err = run(capsys, "analyze", "--lexicon", l0_path, "--corpus",
                       fixtures_dir / "oracle_corpus.tsv", "--out", l0_path)
    assert code == 1 and "overwrite" in err


def _train(capsys, synth, out, *extra):
    return run(capsys, "train", "--lexicon", synth / "lex.tsv", "--corpus", synth / "train.tsv",
               "--embed-a", "hash:16:0", "--embed-b", "hash:16:1", "--out", out, *extra)


def test_train_and_evaluate(capsys, synth, tmp_path):
    model = tmp_path / "m.json"
    code, out, _ = _train(capsys, synth, model, "--variant", "roberta+scores", "--lr", "1")
    assert code == 0 and "final loss" in out
    trace = list(csv.reader(open(tmp_path / "m.losses.csv")))
    assert trace[0] == ["epoch", "loss"] and len(trace) == 32
    assert float(trace[-1][1]) < float(trace[1][1])

    report = tmp_path / "r.json"
    roc = tmp_path / "roc.csv"
    preds = tmp_path / "p.tsv"
    code, _, err = run(capsys, "evaluate", "--lexicon", synth / "lex.tsv", "--corpus", synth / "train.tsv",
                       "--model", model, "--out", report, "--sweep", "--roc-csv", roc, "--predictions", preds)
    assert code == 0, err
    rep = json.loads(report.read_text())
    assert rep["macro_f1"] > 0.8
    assert rep["roc"][0] == [0.0, 0.0] and rep["roc"][-1] == [1.0, 1.0]
    assert "sweep" in rep and 0 <= rep["sweep"]["threshold"] <= 1

    code, out, _ = run(capsys, "sweep", "--scores", preds)
    assert code == 0
    assert json.loads(out)["threshold"] == rep["sweep"]["threshold"]


def test_train_full_variant_records_nine_inputs(capsys, synth, tmp_path):
    model = tmp_path / "m.json"
    code, _, _ = _train(capsys, synth, model, "--variant", "roberta+sbert+scores", "--epochs", "1")
    assert code == 0
    assert json.loads(model.read_text())["dims"]["head_input"] == 9


def test_train_zero_epochs_is_init(capsys, synth, tmp_path):
    model = tmp_path / "m.json"
    code, _, _ = _train(capsys, synth, model, "--variant", "roberta", "--epochs", "0", "--seed", "5")
    assert code == 0
    m = FusionModel.load(model)
    init = init_model(FusionConfig.from_variant("roberta", epochs=0, seed=5), dim_a=16)
    assert np.array_equal(m.projection, init.projection)


def test_train_single_class_fails(capsys, tmp_path, l0_path):
    c = tmp_path / "c.tsv"
    c.write_text("sentence_id\tsentence\tlabel\na\tx y\tOBJ\nb\ty z\tOBJ\n")
    code, _, err = run(capsys, "train", "--lexicon", l0_path, "--corpus", c, "--out", tmp_path / "m.json")
    assert code == 1 and "single class" in err


def test_evaluate_dim_mismatch(capsys, synth, tmp_path):
    model = tmp_path / "m.json"
    _train(capsys, synth, model, "--variant", "roberta", "--epochs", "1")
    code, _, err = run(capsys, "evaluate", "--corpus", synth / "train.tsv", "--model", model,
                       "--embed-a", "hash:32:0")
    assert code == 1
    assert "32" in err and "16" in err


def test_evaluate_augmentation_mismatch(capsys, synth, tmp_path):
    model = tmp_path / "m.json"
    _train(capsys, synth, model, "--variant", "roberta", "--epochs", "1")
    vecs = tmp_path / "v.jsonl"
    ids = [line.split("\t")[0] for line in (synth / "train.tsv").read_text().splitlines()[1:]]
    vecs.write_text("".join(json.dumps({"id": i, "vector": [0.0] * 16, "augmented": True}) + "\n" for i in ids))
    code, _, err = run(capsys, "evaluate", "--corpus", synth / "train.tsv", "--model", model,
                       "--embed-a", f"file:{vecs}")
    assert code == 1 and "augment" in err


def test_sweep_scores_file(capsys, tmp_path):
    s = tmp_path / "s.tsv"
    s.write_text("sentence_id\tlabel\tscore\na\tSUBJ\t0.9\nb\tSUBJ\t0.8\nc\tOBJ\t0.2\nd\tOBJ\t0.1\n")
    code, out, _ = run(capsys, "sweep", "--scores", s)
    assert code == 0
    assert json.loads(out)["threshold"] == 0.25 and json.loads(out)["macro_f1"] == 1.0


def test_bad_variant_rejected_by_parser(capsys, l0_path, tmp_path):
    with pytest.raises(SystemExit):
        main(["train", "--variant", "bert", "--corpus", "x", "--lexicon", l0_path])
