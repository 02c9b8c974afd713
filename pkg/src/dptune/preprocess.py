"""Correlated- and redundant-variable removal before model construction.

Correlation pruning drops variables until every surviving pair has Spearman
|rho| below the threshold. Redundancy pruning then fits, for each variable, an
OLS preliminary model from the other explanatory variables and drops the best
explained variable while its R^2 stays at or above the cutoff.
"""

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .dataset import Dataset

CORRELATION_THRESHOLD = 0.7
REDUNDANCY_R2_THRESHOLD = 0.9


@dataclass(frozen=True)
class CorrelationMatrix:
    names: tuple
    rho: np.ndarray
    constant_columns: tuple = ()


@dataclass(frozen=True)
class Removal:
    column: str
    reason: str  # "correlated" | "redundant"
    statistic: float  # |rho| of the triggering pair, or preliminary-model R^2


RemovalLog = list  # ordered list of Removal entries


def spearman_matrix(d: Dataset) -> CorrelationMatrix:
    """Spearman rho on average-tie ranks; constant columns get rho = 0, flagged."""
    if d.n_rows < 2:
        raise ValueError("spearman_matrix needs at least 2 rows")
    p = d.n_features
    ranks = np.empty_like(d.features)
    for j in range(p):
        ranks[:, j] = rankdata(d.features[:, j], method="average")
    centered = ranks - ranks.mean(axis=0)
    norms = np.sqrt((centered ** 2).sum(axis=0))
    constant = norms == 0.0
    safe = np.where(constant, 1.0, norms)
    normalized = centered / safe
    rho = normalized.T @ normalized
    rho[constant, :] = 0.0
    rho[:, constant] = 0.0
    np.fill_diagonal(rho, 1.0)
    rho = np.clip(rho, -1.0, 1.0)
    return CorrelationMatrix(
        names=d.feature_names,
        rho=rho,
        constant_columns=tuple(n for n, c in zip(d.feature_names, constant) if c),
    )


def remove_correlated(d: Dataset, threshold: float = CORRELATION_THRESHOLD):
    """Drop variables until all surviving pairs have |rho| < threshold.

    Each round targets the pair with the largest |rho| and drops whichever
    member has the larger mean |rho| against the other survivors (tie: the
    later column). Returns (pruned dataset, removal log).
    """
    full = spearman_matrix(d)
    alive = list(range(d.n_features))
    log: RemovalLog = []
    abs_rho = np.abs(full.rho)
    while len(alive) >= 2:
        sub = abs_rho[np.ix_(alive, alive)]
        np.fill_diagonal(sub, 0.0)
        peak = sub.max()
        if peak < threshold:
            break
        i_loc, j_loc = np.unravel_index(int(np.argmax(sub)), sub.shape)
        if i_loc > j_loc:
            i_loc, j_loc = j_loc, i_loc
        # mean |rho| of each pair member against all other survivors
        others = [k for k in range(len(alive)) if k not in (i_loc, j_loc)]
        if others:
            mean_i = sub[i_loc, others].mean() + sub[i_loc, j_loc]
            mean_j = sub[j_loc, others].mean() + sub[j_loc, i_loc]
            mean_i /= len(others) + 1
            mean_j /= len(others) + 1
        else:
            mean_i = mean_j = sub[i_loc, j_loc]
        victim_loc = j_loc if mean_j >= mean_i else i_loc  # tie -> later column
        victim = alive[victim_loc]
        log.append(Removal(column=d.feature_names[victim], reason="correlated", statistic=float(peak)))
        alive.remove(victim)
    surviving = [d.feature_names[k] for k in alive]
    return d.select_columns(surviving), log


def _preliminary_r2(features: np.ndarray, target_idx: int, regressor_idx: list) -> float:
    """R^2 of an OLS model explaining one column from the others (with intercept).

    Singular designs fall back to the minimum-norm least-squares solution;
    a constant target (zero total sum of squares) yields R^2 = 0.
    """
    y = features[:, target_idx]
    sst = float(((y - y.mean()) ** 2).sum())
    if sst == 0.0:
        return 0.0
    design = np.column_stack([np.ones(features.shape[0])] + [features[:, j] for j in regressor_idx])
    beta, *_ = np.linalg.lstsq(design, y, rcond=None)
    residual = y - design @ beta
    ssr = float((residual ** 2).sum())
    return max(0.0, 1.0 - ssr / sst)


def remove_redundant(d: Dataset, r2_threshold: float = REDUNDANCY_R2_THRESHOLD):
    """Iteratively drop the variable best explained by the others while its
    preliminary-model R^2 >= threshold.

    Stops early if a drop would leave a previously dropped variable no longer
    explainable (its own preliminary R^2 against the survivors would fall
    below the threshold). Returns (pruned dataset, removal log).
    """
    if d.n_features < 2:
        raise ValueError("remove_redundant needs at least 2 features")
    alive = list(range(d.n_features))
    dropped: list = []
    log: RemovalLog = []
    while len(alive) >= 2:
        r2 = {}
        for idx in alive:
            regressors = [k for k in alive if k != idx]
            r2[idx] = _preliminary_r2(d.features, idx, regressors)
        best = max(r2.values())
        if best < r2_threshold:
            break
        # tie -> later column order, consistent with the correlation rule
        candidate = max((idx for idx in alive if r2[idx] == best), key=alive.index)
        remaining = [k for k in alive if k != candidate]
        still_explained = all(
            _preliminary_r2(d.features, past, remaining) >= r2_threshold for past in dropped
        )
        if not still_explained:
            break
        alive = remaining
        dropped.append(candidate)
        log.append(Removal(column=d.feature_names[candidate], reason="redundant", statistic=float(best)))
    surviving = [d.feature_names[k] for k in alive]
    return d.select_columns(surviving), log
