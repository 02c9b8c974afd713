"""Random forest: bagged Gini trees grown to purity, mtry = floor(sqrt(P)).

Probability is the fraction of trees voting defective, so with T trees the
predictions are quantized to multiples of 1/T.
"""

import math

import numpy as np

from .._seeds import derive_rng
from ._params import ParameterSpec
from ._tree import TreeConfig, fit_tree

CLASSIFIER_ID = "rf"

_TREE_CONFIG = TreeConfig(max_depth=50, min_split=2, min_bucket=1, complexity=0.0)


def parameter_specs():
    return [ParameterSpec("n_trees", "numeric", 10, (10, 20, 30, 40, 50))]


def tree_rng(seed: int, index: int) -> np.random.Generator:
    """Per-tree generator; owns both the row bootstrap and node feature draws."""
    return derive_rng(seed, "rf-tree", index)


class ForestModel:
    def __init__(self, trees):
        self.trees = trees

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        if X.shape[0] == 0:
            return np.empty(0, dtype=float)
        votes = np.zeros(X.shape[0])
        for tree in self.trees:
            votes += tree.predict_proba(X) > 0.5
        return votes / len(self.trees)


def fit(X, y, setting, seed, mtry: int | None = None) -> ForestModel:
    n, p = X.shape
    if mtry is None:
        mtry = max(1, int(math.floor(math.sqrt(p))))
    trees = []
    for t in range(int(setting["n_trees"])):
        rng = tree_rng(seed, t)
        rows = rng.integers(0, n, size=n)
        trees.append(fit_tree(X[rows], y[rows], config=_TREE_CONFIG, rng=rng, mtry=mtry))
    return ForestModel(trees)
