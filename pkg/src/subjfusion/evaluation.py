"""Macro F1, ROC points and decision-threshold sweeps.

Labels are integers: 1 = SUBJ (the positive class), 0 = OBJ. A sentence is
predicted SUBJ when its score is >= the threshold.
"""

from __future__ import annotations

import csv
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ConfigError, DegenerateDataError, ShapeError


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self):
        return self.tp + self.fp + self.fn + self.tn

    def swapped(self):
        return ConfusionCounts(tp=self.tn, fp=self.fn, fn=self.fp, tn=self.tp)


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float


@dataclass
class EvalReport:
    macro_f1: float
    subj_f1: float
    per_class: dict
    confusion: ConfusionCounts
    threshold: float | None = None
    roc: list = field(default_factory=list)

    def to_dict(self):
        return {
            "macro_f1": self.macro_f1,
            "subj_f1": self.subj_f1,
            "threshold": self.threshold,
            "roc": [list(p) for p in self.roc],
            "per_class": {k: asdict(v) for k, v in self.per_class.items()},
            "confusion": asdict(self.confusion),
        }


def _as_labels(y, name):
    arr = np.asarray(y)
    if arr.ndim != 1:
        raise ShapeError(f"{name} must be one-dimensional")
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ValueError(f"{name} must contain only 0/1 labels")
    return arr.astype(bool)


def confusion(y_true, y_pred) -> ConfusionCounts:
    t = _as_labels(y_true, "y_true")
    p = _as_labels(y_pred, "y_pred")
    if t.shape != p.shape:
        raise ShapeError(f"length mismatch: {t.size} labels vs {p.size} predictions")
    if t.size == 0:
        raise ShapeError("empty label list")
    return ConfusionCounts(
        tp=int(np.sum(t & p)), fp=int(np.sum(~t & p)),
        fn=int(np.sum(t & ~p)), tn=int(np.sum(~t & ~p)),
    )


def _ratio(num, den):
    return Fraction(num, den) if den else Fraction(0)


def _class_f1(c: ConfusionCounts):
    precision = _ratio(c.tp, c.tp + c.fp)
    recall = _ratio(c.tp, c.tp + c.fn)
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else Fraction(0)
    return precision, recall, f1


def macro_f1_from_counts(c: ConfusionCounts) -> Fraction:
    return (_class_f1(c)[2] + _class_f1(c.swapped())[2]) / 2


def metrics(y_true, y_pred) -> EvalReport:
    """Per-class precision/recall/F1 and their macro average.

    Undefined ratios (0/0) are reported as 0. Values are computed as exact
    rationals and rounded once to float.
    """
    c = confusion(y_true, y_pred)
    subj = _class_f1(c)
    obj = _class_f1(c.swapped())
    return EvalReport(
        macro_f1=float((subj[2] + obj[2]) / 2),
        subj_f1=float(subj[2]),
        per_class={
            "SUBJ": ClassMetrics(*(float(x) for x in subj)),
            "OBJ": ClassMetrics(*(float(x) for x in obj)),
        },
        confusion=c,
    )


def roc_curve(y_true, scores) -> list[tuple[float, float]]:
    """(fpr, tpr) for every distinct score used as a threshold, plus the endpoints."""
    t = _as_labels(y_true, "y_true")
    s = np.asarray(scores, dtype=float)
    if s.shape != t.shape:
        raise ShapeError(f"length mismatch: {t.size} labels vs {s.size} scores")
    n_pos = int(t.sum())
    n_neg = t.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DegenerateDataError("ROC needs both classes present")

    order = np.argsort(-s, kind="stable")
    s_sorted, t_sorted = s[order], t[order]
    tp = np.cumsum(t_sorted)
    fp = np.cumsum(~t_sorted)
    # last index of each run of equal scores = everything with score >= that value
    last = np.flatnonzero(np.r_[s_sorted[1:] != s_sorted[:-1], True])
    points = {(0.0, 0.0), (1.0, 1.0)}
    points.update(zip((fp[last] / n_neg).tolist(), (tp[last] / n_pos).tolist()))
    return sorted(points)


def default_grid(step=0.05) -> list[float]:
    """Thresholds 0, step, 2*step, ... up to 1 inclusive."""
    step_q = Fraction(str(step))
    if step_q <= 0 or step_q > 1:
        raise ConfigError(f"grid step must be in (0, 1], got {step}")
    n = int(1 / step_q)
    return [float(i * step_q) for i in range(n + 1)]


def sweep_threshold(y_true, scores, grid=None) -> tuple[float, float]:
    """Grid threshold with the best macro F1; ties go to the lowest threshold."""
    grid = default_grid() if grid is None else list(grid)
    if not grid:
        raise ConfigError("threshold grid is empty")
    if any(not 0.0 <= g <= 1.0 for g in grid):
        raise ConfigError("threshold grid values must lie in [0, 1]")
    t = _as_labels(y_true, "y_true")
    s = np.asarray(scores, dtype=float)
    if s.shape != t.shape:
        raise ShapeError(f"length mismatch: {t.size} labels vs {s.size} scores")

    best = None
    for g in sorted(grid):
        f1 = macro_f1_from_counts(confusion(t, s >= g))
        if best is None or f1 > best[1]:
            best = (g, f1)
    return best[0], float(best[1])


def evaluate_scores(y_true, scores, threshold) -> EvalReport:
    report = metrics(y_true, np.asarray(scores) >= threshold)
    report.threshold = threshold
    t = np.asarray(y_true)
    if 0 < t.sum() < t.size:
        report.roc = roc_curve(y_true, scores)
    return report


def write_roc_csv(points, sink):
    w = csv.writer(sink, lineterminator="\n")
    w.writerow(["fpr", "tpr"])
    for fpr, tpr in points:
        w.writerow([repr(fpr), repr(tpr)])
