"""The 12 performance measures computed from predicted probabilities and outcomes.

Nine threshold-dependent measures come from a confusion matrix binarized at
0.5 (strictly above = predicted defective); AUC, Brier, and log loss read the
probability vector directly. Any 0/0 denominator yields 0 and sets a
degeneracy flag instead of raising.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import rankdata

MEASURES = (
    "precision", "recall", "fmeasure", "gmean", "gmeasure", "balance",
    "mcc", "tnr", "fpr", "auc", "brier", "logloss",
)

MAXIMIZED_MEASURES = frozenset(
    ("precision", "recall", "fmeasure", "gmean", "gmeasure", "balance", "mcc", "tnr", "auc")
)
MINIMIZED_MEASURES = frozenset(("fpr", "brier", "logloss"))

LOGLOSS_EPS = 1e-15


@dataclass(frozen=True)
class PredictionVector:
    """Paired predicted probabilities and binary outcomes for one test set."""

    p: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        y = np.asarray(self.y, dtype=int)
        if p.ndim != 1 or y.shape != p.shape:
            raise ValueError("p and y must be 1-D and of equal length")
        if p.size < 1:
            raise ValueError("prediction vector must be non-empty")
        if (p < 0).any() or (p > 1).any():
            raise ValueError("probabilities must lie in [0, 1]")
        if not np.isin(y, (0, 1)).all():
            raise ValueError("outcomes must be 0 or 1")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "y", y)


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @property
    def pd(self) -> float:
        """Recall / probability of detection; 0 when no defective rows."""
        return self.tp / (self.tp + self.fn) if (self.tp + self.fn) > 0 else 0.0

    @property
    def pf(self) -> float:
        """False positive rate / probability of false alarm; 0 when no clean rows."""
        return self.fp / (self.fp + self.tn) if (self.fp + self.tn) > 0 else 0.0


@dataclass(frozen=True)
class PerformanceVector:
    """One value per measure, in the fixed CSV column order of MEASURES."""

    precision: float
    recall: float
    fmeasure: float
    gmean: float
    gmeasure: float
    balance: float
    mcc: float
    tnr: float
    fpr: float
    auc: float
    brier: float
    logloss: float
    degenerate: tuple = field(default=())

    def as_dict(self) -> dict:
        return {m: getattr(self, m) for m in MEASURES}

    def as_row(self) -> list:
        return [getattr(self, m) for m in MEASURES]


def confusion_at_threshold(v: PredictionVector, threshold: float = 0.5) -> ConfusionMatrix:
    """Binarize at the threshold: predicted defective iff p > threshold."""
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must lie in (0, 1)")
    pred = v.p > threshold
    actual = v.y == 1
    return ConfusionMatrix(
        tp=int(np.sum(pred & actual)),
        fp=int(np.sum(pred & ~actual)),
        tn=int(np.sum(~pred & ~actual)),
        fn=int(np.sum(~pred & actual)),
    )


def _ratio(num: float, den: float, name: str, degenerate: list) -> float:
    if den == 0:
        degenerate.append(name)
        return 0.0
    return num / den


def threshold_measures(c: ConfusionMatrix) -> tuple[dict, list]:
    """The nine threshold-dependent measures plus the list of degenerate ones."""
    degenerate: list = []
    tp, fp, tn, fn = c.tp, c.fp, c.tn, c.fn
    precision = _ratio(tp, tp + fp, "precision", degenerate)
    recall = _ratio(tp, tp + fn, "recall", degenerate)
    fmeasure = _ratio(2.0 * precision * recall, precision + recall, "fmeasure", degenerate)
    pd, pf = c.pd, c.pf
    tnr = _ratio(tn, tn + fp, "tnr", degenerate)
    fpr = _ratio(fp, fp + tn, "fpr", degenerate)
    gmean = math.sqrt(pd * tnr)
    gmeasure = _ratio(2.0 * pd * (1.0 - pf), pd + (1.0 - pf), "gmeasure", degenerate)
    balance = 1.0 - math.sqrt((pf ** 2 + (1.0 - pd) ** 2) / 2.0)
    mcc_num = float(tp) * tn - float(fp) * fn
    mcc_den = math.sqrt(float(tp + fp) * (tp + fn) * (tn + fp) * (tn + fn))
    mcc = _ratio(mcc_num, mcc_den, "mcc", degenerate)
    values = {
        "precision": precision, "recall": recall, "fmeasure": fmeasure,
        "gmean": gmean, "gmeasure": gmeasure, "balance": balance,
        "mcc": mcc, "tnr": tnr, "fpr": fpr,
    }
    return values, degenerate


def auc(v: PredictionVector) -> float:
    """Probability a random defective outranks a random clean module, ties at 1/2.

    Rank formulation of the Mann-Whitney statistic: U / (n_pos * n_neg).
    """
    pos = v.y == 1
    n_pos = int(pos.sum())
    n_neg = v.p.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC undefined: prediction vector has a single outcome class")
    ranks = rankdata(v.p, method="average")
    u = float(ranks[pos].sum()) - n_pos * (n_pos + 1) / 2.0
    return u / (n_pos * n_neg)


def brier(v: PredictionVector) -> float:
    """Mean squared distance between probability and outcome."""
    return float(np.mean((v.p - v.y) ** 2))


def logloss(v: PredictionVector) -> float:
    """Mean negative log likelihood, probabilities clamped away from 0 and 1."""
    p = np.clip(v.p, LOGLOSS_EPS, 1.0 - LOGLOSS_EPS)
    return float(-np.mean(v.y * np.log(p) + (1 - v.y) * np.log(1.0 - p)))


def evaluate_predictions(v: PredictionVector, threshold: float = 0.5) -> PerformanceVector:
    """All 12 measures for one prediction vector."""
    values, degenerate = threshold_measures(confusion_at_threshold(v, threshold))
    return PerformanceVector(
        auc=auc(v),
        brier=brier(v),
        logloss=logloss(v),
        degenerate=tuple(degenerate),
        **values,
    )
