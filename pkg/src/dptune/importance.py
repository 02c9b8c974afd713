"""Generic permutation variable importance and rank-shift analysis.

A variable's importance is the increase in misclassification rate (threshold
0.5) when only that variable's test-set values are shuffled. Scores accumulate
across bootstrap repetitions and are ranked with the effect-size-aware test.
"""

from dataclasses import dataclass, field

import numpy as np

from ._seeds import derive_rng
from .classifiers import TrainedModel, predict_proba
from .dataset import Dataset
from .stats import RankTable, scott_knott_esd

CLASSIFICATION_THRESHOLD = 0.5


@dataclass
class ImportanceScores:
    """Per-variable importance values, one list entry per repetition."""

    variables: tuple
    per_variable: dict = field(default_factory=dict)

    def __post_init__(self):
        for v in self.variables:
            self.per_variable.setdefault(v, [])

    def append_repetition(self, scores: dict) -> None:
        if set(scores) != set(self.variables):
            raise ValueError("repetition scores do not cover the variable universe")
        for v in self.variables:
            self.per_variable[v].append(scores[v])

    @property
    def repetitions(self) -> int:
        return len(next(iter(self.per_variable.values()))) if self.per_variable else 0


@dataclass(frozen=True)
class RankShiftRow:
    variable: str
    rank_optimized: int
    rank_default: int
    shift: int


@dataclass(frozen=True)
class RankShiftTable:
    rows: tuple
    # fraction of the variables at rank k in the optimized model that sit at
    # rank k in the default model too, keyed by k
    overlap: dict


def _misclassification(m: TrainedModel, features: np.ndarray, labels: np.ndarray) -> float:
    predicted = predict_proba(m, features) > CLASSIFICATION_THRESHOLD
    return float(np.mean(predicted != (labels == 1)))


def permutation_importance(m: TrainedModel, test: Dataset, rng_seed: int) -> dict:
    """Importance per variable: misclass(column permuted) - misclass(clean)."""
    if test.n_rows == 0:
        raise ValueError("test set is empty")
    if test.feature_names != m.feature_names:
        raise ValueError(
            f"column mismatch: model was trained on {m.feature_names}, "
            f"got {test.feature_names}"
        )
    clean_rate = _misclassification(m, test.features, test.labels)
    scores = {}
    for j, name in enumerate(test.feature_names):
        rng = derive_rng(rng_seed, "perm", j)
        permuted = test.features.copy()
        permuted[:, j] = test.features[rng.permutation(test.n_rows), j]
        scores[name] = _misclassification(m, permuted, test.labels) - clean_rate
    return scores


def rank_variables(scores: ImportanceScores) -> RankTable:
    """Rank variables by mean importance; rank 1 = most important."""
    if scores.repetitions < 2:
        raise ValueError("rank_variables needs at least 2 repetitions per variable")
    return scott_knott_esd({v: np.asarray(vals) for v, vals in scores.per_variable.items()})


def rank_shift(opt: RankTable, default: RankTable) -> RankShiftTable:
    """Per-variable rank_optimized - rank_default (negative = moved up under
    optimization) plus per-rank overlap fractions."""
    if set(opt.ranks) != set(default.ranks):
        raise ValueError("rank tables cover different variable sets")
    rows = tuple(
        RankShiftRow(
            variable=v,
            rank_optimized=opt.ranks[v],
            rank_default=default.ranks[v],
            shift=opt.ranks[v] - default.ranks[v],
        )
        for grp in opt.groups
        for v in grp
    )
    overlap = {}
    for k in sorted({r.rank_optimized for r in rows}):
        at_k = [r for r in rows if r.rank_optimized == k]
        overlap[k] = sum(1 for r in at_k if r.rank_default == k) / len(at_k)
    return RankShiftTable(rows=rows, overlap=overlap)
