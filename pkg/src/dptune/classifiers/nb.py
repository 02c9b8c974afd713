"""Naive bayes with Gaussian or kernel-density class-conditional features.

Class priors are Laplace-smoothed as (n_c + L) / (N + 2L). With
kernel_density=True, each feature's class-conditional density is a Gaussian
KDE with the Silverman rule-of-thumb bandwidth; otherwise a fitted normal.
"""

import numpy as np
from scipy.special import logsumexp

from ._params import ParameterSpec

CLASSIFIER_ID = "nb"

_SIGMA_FLOOR = 1e-9


def parameter_specs():
    return [
        ParameterSpec("laplace", "numeric", 0, (0,)),
        ParameterSpec("kernel_density", "logical", False, (False, True)),
    ]


def _silverman_bandwidth(values: np.ndarray) -> float:
    n = values.size
    sd = float(values.std(ddof=1)) if n > 1 else 0.0
    iqr = float(np.subtract(*np.percentile(values, [75, 25])))
    spread = min(sd, iqr / 1.34) if iqr > 0 else sd
    if spread <= 0:
        spread = max(sd, _SIGMA_FLOOR)
    return max(0.9 * spread * n ** (-0.2), _SIGMA_FLOOR)


class NbModel:
    def __init__(self, log_priors, kernel, class_values=None, bandwidths=None,
                 means=None, sigmas=None):
        self.log_priors = log_priors
        self.kernel = kernel
        self.class_values = class_values
        self.bandwidths = bandwidths
        self.means = means
        self.sigmas = sigmas

    def _log_likelihood(self, X: np.ndarray, c: int) -> np.ndarray:
        if not self.kernel:
            mu = self.means[c]
            sd = self.sigmas[c]
            z = (X - mu) / sd
            return (-0.5 * z ** 2 - np.log(sd) - 0.5 * np.log(2 * np.pi)).sum(axis=1)
        total = np.zeros(X.shape[0])
        for j in range(X.shape[1]):
            train = self.class_values[c][:, j]
            h = self.bandwidths[c][j]
            z = (X[:, j][:, None] - train[None, :]) / h
            log_k = -0.5 * z ** 2 - np.log(h) - 0.5 * np.log(2 * np.pi)
            total += logsumexp(log_k, axis=1) - np.log(train.size)
        return total

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        if X.shape[0] == 0:
            return np.empty(0, dtype=float)
        log_post = np.column_stack([
            self.log_priors[0] + self._log_likelihood(X, 0),
            self.log_priors[1] + self._log_likelihood(X, 1),
        ])
        return np.exp(log_post[:, 1] - logsumexp(log_post, axis=1))


def fit(X, y, setting, seed) -> NbModel:
    laplace = float(setting["laplace"])
    kernel = bool(setting["kernel_density"])
    y = np.asarray(y, dtype=int)
    n = y.size
    counts = np.array([(y == 0).sum(), (y == 1).sum()], dtype=float)
    log_priors = np.log((counts + laplace) / (n + 2.0 * laplace))
    if kernel:
        class_values = {c: X[y == c] for c in (0, 1)}
        bandwidths = {
            c: np.array([_silverman_bandwidth(class_values[c][:, j]) for j in range(X.shape[1])])
            for c in (0, 1)
        }
        return NbModel(log_priors, True, class_values=class_values, bandwidths=bandwidths)
    means = {c: X[y == c].mean(axis=0) for c in (0, 1)}
    sigmas = {c: np.maximum(X[y == c].std(axis=0), _SIGMA_FLOOR) for c in (0, 1)}
    return NbModel(log_priors, False, means=means, sigmas=sigmas)
