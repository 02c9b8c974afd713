"""Logistic regression (parameter-free baseline).

Fitted by iteratively reweighted least squares with a small ridge penalty so
the fit stays bounded and deterministic on separable data. The seed is unused.
"""

import numpy as np

from ._common import ColumnScaler, sigmoid

CLASSIFIER_ID = "glm"

_RIDGE = 1e-4
_MAX_ITER = 50
_TOL = 1e-10


def parameter_specs():
    return []


class GlmModel:
    def __init__(self, beta, scaler):
        self.beta = beta
        self.scaler = scaler

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        if X.shape[0] == 0:
            return np.empty(0, dtype=float)
        Xs = self.scaler.transform(X)
        design = np.column_stack([np.ones(Xs.shape[0]), Xs])
        return sigmoid(design @ self.beta)


def fit(X, y, setting, seed) -> GlmModel:
    scaler = ColumnScaler()
    Xs = scaler.fit_transform(X)
    design = np.column_stack([np.ones(Xs.shape[0]), Xs])
    y = np.asarray(y, dtype=float)
    beta = np.zeros(design.shape[1])
    ridge = _RIDGE * np.eye(design.shape[1])
    for _ in range(_MAX_ITER):
        p = sigmoid(design @ beta)
        w = np.maximum(p * (1.0 - p), 1e-10)
        hessian = design.T @ (design * w[:, None]) + ridge
        gradient = design.T @ (y - p) - _RIDGE * beta
        step = np.linalg.solve(hessian, gradient)
        beta = beta + step
        if np.abs(step).max() < _TOL:
            break
    return GlmModel(beta, scaler)
