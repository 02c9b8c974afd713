"""Weighted binary Gini decision tree shared by the CART, forest, and boosting classifiers.

Split search is exhaustive over midpoints between adjacent distinct sorted
values, vectorized per feature. Ties on gain keep the earliest feature in
column order and the lowest threshold. A split is kept only when it reduces
the tree's impurity, relative to the root, by at least the complexity value.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TreeConfig:
    max_depth: int = 30
    min_split: int = 2  # minimum rows in a node before a split is attempted
    min_bucket: int = 1  # minimum rows per child
    complexity: float = 0.0  # minimum relative impurity reduction per split


def _gini(w1: float, w: float) -> float:
    if w <= 0.0:
        return 0.0
    p = w1 / w
    return 2.0 * p * (1.0 - p)


def _scan_feature(x, y, weights, min_bucket):
    """Best (threshold, absolute weighted impurity reduction) for one feature."""
    order = np.argsort(x, kind="stable")
    xs = x[order]
    ws = weights[order]
    w1s = ws * y[order]
    n = xs.size
    if n < 2 * min_bucket:
        return None
    cw = np.cumsum(ws)
    cw1 = np.cumsum(w1s)
    w_total = cw[-1]
    w1_total = cw1[-1]
    node_impurity = w_total * _gini(w1_total, w_total)

    left_counts = np.arange(1, n)
    valid = (xs[:-1] < xs[1:]) & (left_counts >= min_bucket) & (n - left_counts >= min_bucket)
    if not valid.any():
        return None
    wl = cw[:-1]
    w1l = cw1[:-1]
    wr = w_total - wl
    w1r = w1_total - w1l
    with np.errstate(divide="ignore", invalid="ignore"):
        pl = np.where(wl > 0, w1l / np.where(wl > 0, wl, 1.0), 0.0)
        pr = np.where(wr > 0, w1r / np.where(wr > 0, wr, 1.0), 0.0)
    child = wl * 2.0 * pl * (1.0 - pl) + wr * 2.0 * pr * (1.0 - pr)
    gains = np.where(valid & (wl > 0) & (wr > 0), node_impurity - child, -np.inf)
    best = int(np.argmax(gains))
    if not np.isfinite(gains[best]) or gains[best] <= 0.0:
        return None
    threshold = 0.5 * (xs[best] + xs[best + 1])
    return float(threshold), float(gains[best])


def best_split_gain(x, y, weights=None) -> float:
    """Absolute weighted impurity reduction of the best single split on x."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if weights is None:
        weights = np.ones_like(y)
    found = _scan_feature(x, y, weights, min_bucket=1)
    return found[1] if found else 0.0


class _Node:
    __slots__ = ("feature", "threshold", "left", "right", "prob")

    def __init__(self, prob):
        self.feature = -1
        self.threshold = 0.0
        self.left = None
        self.right = None
        self.prob = prob


class GiniTree:
    """Fitted tree; predicts the weighted defective fraction of the leaf."""

    def __init__(self, root: _Node, n_features: int):
        self.root = root
        self.n_features = n_features

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        out = np.empty(X.shape[0], dtype=float)
        stack = [(self.root, np.arange(X.shape[0]))]
        while stack:
            node, idx = stack.pop()
            if idx.size == 0:
                continue
            if node.feature < 0:
                out[idx] = node.prob
                continue
            goes_left = X[idx, node.feature] <= node.threshold
            stack.append((node.left, idx[goes_left]))
            stack.append((node.right, idx[~goes_left]))
        return out

    def predict_label(self, X: np.ndarray) -> np.ndarray:
        return (self.predict_proba(X) > 0.5).astype(int)


def fit_tree(X, y, weights=None, config: TreeConfig = TreeConfig(), rng=None, mtry=None) -> GiniTree:
    """Grow a Gini tree. When rng and mtry < P are given, each node searches a
    random mtry-subset of the features (random-forest style)."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = X.shape
    if weights is None:
        weights = np.full(n, 1.0 / n)
    else:
        weights = np.asarray(weights, dtype=float)
    root_w = float(weights.sum())
    root_w1 = float((weights * y).sum())
    root_impurity = root_w * _gini(root_w1, root_w)
    sample_features = rng is not None and mtry is not None and mtry < p

    def build(idx: np.ndarray, depth: int) -> _Node:
        w = weights[idx]
        w_sum = float(w.sum())
        w1_sum = float((w * y[idx]).sum())
        prob = w1_sum / w_sum if w_sum > 0 else 0.0
        node = _Node(prob)
        if (
            depth >= config.max_depth
            or idx.size < config.min_split
            or w1_sum <= 0.0
            or w1_sum >= w_sum
            or root_impurity <= 0.0
        ):
            return node
        if sample_features:
            feats = np.sort(rng.choice(p, size=mtry, replace=False))
        else:
            feats = range(p)
        best_feat, best_thr, best_gain = -1, 0.0, 0.0
        for j in feats:
            found = _scan_feature(X[idx, j], y[idx], w, config.min_bucket)
            if found is not None and found[1] > best_gain:
                best_thr, best_gain = found
                best_feat = int(j)
        if best_feat < 0 or best_gain / root_impurity < config.complexity:
            return node
        goes_left = X[idx, best_feat] <= best_thr
        node.feature = best_feat
        node.threshold = best_thr
        node.left = build(idx[goes_left], depth + 1)
        node.right = build(idx[~goes_left], depth + 1)
        return node

    return GiniTree(build(np.arange(n), 0), p)
