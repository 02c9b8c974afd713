"""Boosted shallow trees (AdaBoost.M1 over depth-limited Gini trees).

model_type selects the member depth (rules -> stumps of depth 1, tree ->
depth 3). With winnow enabled, features whose best univariate root-split gain
falls below 1% of the best feature's gain are dropped before training.
Probability is the alpha-weighted mean of the member trees' leaf
probabilities, so one round reproduces its base learner exactly.
"""

import math

import numpy as np

from ._params import ParameterSpec
from ._tree import TreeConfig, best_split_gain, fit_tree

CLASSIFIER_ID = "boost"

_WINNOW_FRACTION = 0.01
_ALPHA_CAP = math.log(1e10)

_DEPTH_BY_MODEL_TYPE = {"rules": 1, "tree": 3}


def parameter_specs():
    return [
        ParameterSpec("n_iterations", "numeric", 1, (1, 10, 20, 30, 40)),
        ParameterSpec("winnow", "logical", False, (False, True)),
        ParameterSpec("model_type", "factor", "rules", ("rules", "tree")),
    ]


def winnow_features(X: np.ndarray, y: np.ndarray) -> list:
    """Indices of features whose univariate root gain is >= 1% of the best."""
    gains = np.array([best_split_gain(X[:, j], y) for j in range(X.shape[1])])
    best = gains.max()
    if best <= 0:
        return list(range(X.shape[1]))
    return [j for j in range(X.shape[1]) if gains[j] >= _WINNOW_FRACTION * best]


class BoostModel:
    def __init__(self, trees, alphas, kept_features):
        self.trees = trees
        self.alphas = alphas
        self.kept_features = kept_features

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        if X.shape[0] == 0:
            return np.empty(0, dtype=float)
        Xk = X[:, self.kept_features]
        total = np.zeros(X.shape[0])
        for tree, alpha in zip(self.trees, self.alphas):
            total += alpha * tree.predict_proba(Xk)
        return total / sum(self.alphas)


def fit(X, y, setting, seed) -> BoostModel:
    n_rounds = int(setting["n_iterations"])
    depth = _DEPTH_BY_MODEL_TYPE[setting["model_type"]]
    y = np.asarray(y, dtype=int)
    kept = winnow_features(X, y) if setting["winnow"] else list(range(X.shape[1]))
    Xk = X[:, kept]
    n = Xk.shape[0]
    weights = np.full(n, 1.0 / n)
    config = TreeConfig(max_depth=depth, min_split=2, min_bucket=1, complexity=0.0)

    trees, alphas = [], []
    for _ in range(n_rounds):
        tree = fit_tree(Xk, y, weights=weights, config=config)
        wrong = tree.predict_label(Xk) != y
        err = float(weights[wrong].sum() / weights.sum())
        if err <= 0.0:
            trees.append(tree)
            alphas.append(_ALPHA_CAP)
            break
        if err >= 0.5:
            if not trees:  # keep a degenerate first round so the model can predict
                trees.append(tree)
                alphas.append(1e-10)
            break
        alpha = math.log((1.0 - err) / err)
        trees.append(tree)
        alphas.append(alpha)
        weights = weights * np.exp(alpha * wrong)
        weights /= weights.sum()
    return BoostModel(trees, alphas, kept)
