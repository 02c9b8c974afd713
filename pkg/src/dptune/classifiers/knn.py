"""k-nearest neighbours on per-column standardized features.

Probability is the defective fraction among the k nearest training rows
(Euclidean distance); distance ties are broken by training row order.
"""

import numpy as np

from ._common import ColumnScaler
from ._params import ParameterSpec

CLASSIFIER_ID = "knn"


def parameter_specs():
    return [ParameterSpec("n_neighbors", "numeric", 1, (1, 5, 9, 13, 17))]


class KnnModel:
    def __init__(self, train_std, labels, k, scaler):
        self.train_std = train_std
        self.labels = labels
        self.k = k
        self.scaler = scaler

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        if X.shape[0] == 0:
            return np.empty(0, dtype=float)
        Xs = self.scaler.transform(X)
        d2 = ((Xs[:, None, :] - self.train_std[None, :, :]) ** 2).sum(axis=2)
        nearest = np.argsort(d2, axis=1, kind="stable")[:, : self.k]
        return self.labels[nearest].mean(axis=1)


def fit(X, y, setting, seed) -> KnnModel:
    k = min(int(setting["n_neighbors"]), X.shape[0])
    scaler = ColumnScaler()
    return KnnModel(scaler.fit_transform(X), np.asarray(y, dtype=float), k, scaler)
