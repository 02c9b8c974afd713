"""Bundled synthetic defect datasets (seeded, non-negative metric values).

Two generators: a linearly separable design with extra noise metrics, and a
nonlinear design mixing additive threshold effects with an interaction term,
where boosting rounds and member depth pay off.
"""

import numpy as np

from ._seeds import derive_rng
from .dataset import Dataset


def make_separable_dataset(
    n_rows: int = 400,
    n_informative: int = 3,
    n_noise: int = 3,
    defective_rate: float = 0.35,
    shift: float = 1.2,
    seed: int = 0,
    name: str | None = None,
) -> Dataset:
    """Defective rows get informative metrics drawn with a shifted log-scale
    location, so the classes separate by a margin well above the noise."""
    rng = derive_rng(seed, "separable")
    labels = (rng.random(n_rows) < defective_rate).astype(int)
    columns = []
    for j in range(n_informative):
        location = labels * (shift + 0.1 * j)
        columns.append(rng.lognormal(mean=location, sigma=0.5))
    for _ in range(n_noise):
        columns.append(rng.lognormal(mean=0.0, sigma=0.5, size=n_rows))
    features = np.column_stack(columns)
    names = [f"sig{j + 1}" for j in range(n_informative)] + [
        f"noise{j + 1}" for j in range(n_noise)
    ]
    return Dataset(
        name=name or f"separable-{seed}",
        features=features,
        labels=labels,
        feature_names=tuple(names),
    )


def make_interaction_dataset(
    n_rows: int = 600,
    n_features: int = 10,
    defective_rate: float = 0.38,
    seed: int = 0,
    name: str | None = None,
) -> Dataset:
    """Additive threshold effects on four metrics plus an interaction
    (exclusive-or of two thresholded metrics) and pure-noise metrics.

    A single depth-1 stump captures at most one additive term, so boosting
    rounds (and deeper members, for the interaction) improve markedly over
    the one-round default.
    """
    if n_features < 7:
        raise ValueError("interaction design needs at least 7 features")
    rng = derive_rng(seed, "interaction")
    X = rng.lognormal(mean=0.0, sigma=0.6, size=(n_rows, n_features))
    above = X > 1.0  # the median of this log-scale distribution
    additive = (
        1.0 * above[:, 0]
        + 0.9 * above[:, 1]
        + 0.8 * above[:, 2]
        + 0.7 * above[:, 3]
    )
    interaction = 1.8 * (above[:, 4] ^ above[:, 5])
    score = additive + interaction + rng.normal(0.0, 0.4, size=n_rows)
    cutoff = np.quantile(score, 1.0 - defective_rate)
    labels = (score > cutoff).astype(int)
    names = tuple(f"m{j + 1:02d}" for j in range(n_features))
    return Dataset(
        name=name or f"interaction-{seed}",
        features=X,
        labels=labels,
        feature_names=names,
    )
