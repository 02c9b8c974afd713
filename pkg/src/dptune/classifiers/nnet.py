"""Single-hidden-layer neural network with logistic activations.

Full-batch gradient descent on mean cross-entropy for 200 epochs at learning
rate 0.1; weight decay is an L2 penalty on all weights and biases. Initial
weights are drawn uniformly from (-0.5, 0.5) using the training seed.
"""

import numpy as np

from .._seeds import derive_rng
from ._common import ColumnScaler, sigmoid
from ._params import ParameterSpec

CLASSIFIER_ID = "nnet"

EPOCHS = 200
LEARNING_RATE = 0.1


def parameter_specs():
    return [
        ParameterSpec("n_hidden", "numeric", 1, (1, 3, 5, 7, 9)),
        ParameterSpec("weight_decay", "numeric", 0, (0, 0.0001, 0.001, 0.01, 0.1)),
    ]


class NnetModel:
    def __init__(self, w1, b1, w2, b2, scaler):
        self.w1 = w1
        self.b1 = b1
        self.w2 = w2
        self.b2 = b2
        self.scaler = scaler

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        if X.shape[0] == 0:
            return np.empty(0, dtype=float)
        Xs = self.scaler.transform(X)
        hidden = sigmoid(Xs @ self.w1 + self.b1)
        return sigmoid(hidden @ self.w2 + self.b2)


def fit(X, y, setting, seed) -> NnetModel:
    n_hidden = int(setting["n_hidden"])
    decay = float(setting["weight_decay"])
    scaler = ColumnScaler()
    Xs = scaler.fit_transform(X)
    y = np.asarray(y, dtype=float)
    n, p = Xs.shape

    rng = derive_rng(seed, "nnet-init")
    w1 = rng.uniform(-0.5, 0.5, size=(p, n_hidden))
    b1 = rng.uniform(-0.5, 0.5, size=n_hidden)
    w2 = rng.uniform(-0.5, 0.5, size=n_hidden)
    b2 = rng.uniform(-0.5, 0.5)

    for _ in range(EPOCHS):
        hidden = sigmoid(Xs @ w1 + b1)
        prob = sigmoid(hidden @ w2 + b2)
        d_out = (prob - y) / n  # mean cross-entropy gradient at the logit
        g_w2 = hidden.T @ d_out + decay * w2
        g_b2 = d_out.sum() + decay * b2
        d_hidden = np.outer(d_out, w2) * hidden * (1.0 - hidden)
        g_w1 = Xs.T @ d_hidden + decay * w1
        g_b1 = d_hidden.sum(axis=0) + decay * b1
        w1 -= LEARNING_RATE * g_w1
        b1 -= LEARNING_RATE * g_b1
        w2 -= LEARNING_RATE * g_w2
        b2 -= LEARNING_RATE * g_b2
    return NnetModel(w1, b1, w2, b2, scaler)
