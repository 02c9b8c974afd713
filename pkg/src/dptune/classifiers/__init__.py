"""Uniform classifier abstraction: declared parameter spaces plus seven
built-in techniques spanning numeric, logical, and factor parameters.

Registry ids: knn, nb, glm, cart, rf, boost, nnet. Training is deterministic
given (data, setting, seed); fitted models are immutable and safe to share.
"""

from dataclasses import dataclass

import numpy as np

from ..dataset import Dataset
from . import boost, cart, forest, glm, knn, nb, nnet
from ._params import ParameterSetting, ParameterSpace, ParameterSpec

__all__ = [
    "CLASSIFIER_IDS",
    "ParameterSetting",
    "ParameterSpace",
    "ParameterSpec",
    "TrainedModel",
    "default_setting",
    "parameter_space",
    "predict_proba",
    "train",
]

_MODULES = (knn, nb, glm, cart, forest, boost, nnet)

REGISTRY = {m.CLASSIFIER_ID: m for m in _MODULES}
CLASSIFIER_IDS = tuple(REGISTRY)


@dataclass(frozen=True)
class TrainedModel:
    classifier_id: str
    setting: ParameterSetting
    model: object
    feature_names: tuple


def _lookup(classifier_id: str):
    try:
        return REGISTRY[classifier_id]
    except KeyError:
        raise ValueError(
            f"unknown classifier {classifier_id!r}; available: {sorted(REGISTRY)}"
        ) from None


def parameter_space(classifier_id: str) -> ParameterSpace:
    module = _lookup(classifier_id)
    return ParameterSpace(classifier_id=classifier_id, specs=tuple(module.parameter_specs()))


def default_setting(classifier_id: str) -> ParameterSetting:
    return parameter_space(classifier_id).default_setting()


def train(classifier_id: str, setting: ParameterSetting, train_data: Dataset, seed: int) -> TrainedModel:
    """Fit one classifier. Training data must contain both outcome classes."""
    module = _lookup(classifier_id)
    space = parameter_space(classifier_id)
    space.validate(setting)
    labels = train_data.labels
    if labels.min() == labels.max():
        raise ValueError(
            f"cannot train {classifier_id!r}: training data has a single outcome class"
        )
    fitted = module.fit(train_data.features, labels, setting, seed)
    return TrainedModel(
        classifier_id=classifier_id,
        setting=setting,
        model=fitted,
        feature_names=train_data.feature_names,
    )


def predict_proba(m: TrainedModel, features: np.ndarray, feature_names=None) -> np.ndarray:
    """Defective probability per row; columns must match the training columns."""
    X = np.asarray(features, dtype=float)
    if X.ndim != 2:
        raise ValueError("features must be a 2-D matrix")
    if X.shape[1] != len(m.feature_names):
        raise ValueError(
            f"column mismatch: model expects {len(m.feature_names)} features, got {X.shape[1]}"
        )
    if feature_names is not None and tuple(feature_names) != m.feature_names:
        raise ValueError(
            f"column mismatch: model was trained on {m.feature_names}, got {tuple(feature_names)}"
        )
    probs = m.model.predict_proba(X)
    return np.asarray(probs, dtype=float)
