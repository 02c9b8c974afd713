"""Classification tree with a complexity-gated split rule.

A split survives only if it reduces training impurity, relative to the root,
by at least the complexity parameter. Leaves predict their class fraction.
"""

import numpy as np

from ._params import ParameterSpec
from ._tree import TreeConfig, fit_tree

CLASSIFIER_ID = "cart"

MIN_SPLIT = 20
MAX_DEPTH = 30


def parameter_specs():
    return [ParameterSpec("complexity", "numeric", 0.01, (0.0001, 0.001, 0.01, 0.1, 0.5))]


class CartModel:
    def __init__(self, tree):
        self.tree = tree

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        if X.shape[0] == 0:
            return np.empty(0, dtype=float)
        return self.tree.predict_proba(X)


def fit(X, y, setting, seed) -> CartModel:
    config = TreeConfig(
        max_depth=MAX_DEPTH,
        min_split=MIN_SPLIT,
        min_bucket=1,
        complexity=float(setting["complexity"]),
    )
    return CartModel(fit_tree(X, y, config=config))
