"""Effect sizes, significance tests, and effect-size-aware treatment ranking.

The ranking test partitions mean-sorted treatments recursively: a candidate
split (the one maximizing between-group sum of squares over treatment means)
is kept only when at least one cross-group pair of treatments differs by a
non-negligible Cohen's d (|d| > 0.2); otherwise the whole range merges into
one rank. Rank 1 is the best group.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm, rankdata

NEGLIGIBLE_D = 0.2
EXACT_ENUMERATION_LIMIT = 20  # pooled size at or below which the U test is exact


@dataclass(frozen=True)
class EffectSize:
    d: float
    magnitude: str

    @property
    def infinite(self) -> bool:
        return math.isinf(self.d)


@dataclass(frozen=True)
class TestResult:
    u_statistic: float
    p_value: float
    alpha: float
    significant: bool


@dataclass(frozen=True)
class RankTable:
    """Statistically distinct, ordered groups of treatments (rank 1 = best)."""

    groups: tuple
    ranks: dict
    means: dict

    def rank_of(self, name: str) -> int:
        return self.ranks[name]

    def to_rows(self) -> list:
        """(treatment, rank, mean) rows in group order."""
        return [(t, self.ranks[t], self.means[t]) for grp in self.groups for t in grp]

    def to_grouped(self) -> list:
        return [{"rank": i + 1, "treatments": list(grp)} for i, grp in enumerate(self.groups)]


def _magnitude(abs_d: float) -> str:
    if abs_d <= 0.2:
        return "negligible"
    if abs_d <= 0.5:
        return "small"
    if abs_d <= 0.8:
        return "medium"
    return "large"


def cohens_d(a, b) -> EffectSize:
    """Standardized mean difference (mean(a) - mean(b)) / pooled sample s.d."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size < 2 or b.size < 2:
        raise ValueError("cohens_d needs at least 2 observations per sample")
    diff = float(np.mean(a) - np.mean(b))
    pooled_var = (
        (a.size - 1) * np.var(a, ddof=1) + (b.size - 1) * np.var(b, ddof=1)
    ) / (a.size + b.size - 2)
    pooled_sd = math.sqrt(float(pooled_var))
    if pooled_sd == 0.0:
        if diff == 0.0:
            return EffectSize(d=0.0, magnitude="negligible")
        return EffectSize(d=math.copysign(math.inf, diff), magnitude="large")
    d = diff / pooled_sd
    return EffectSize(d=d, magnitude=_magnitude(abs(d)))


def _u_statistic(a: np.ndarray, b: np.ndarray) -> float:
    """U for sample a via the rank-sum formulation, average ranks for ties."""
    pooled = np.concatenate([a, b])
    ranks = rankdata(pooled, method="average")
    r1 = float(ranks[: a.size].sum())
    return r1 - a.size * (a.size + 1) / 2.0


def _exact_two_sided_p(pooled_ranks: np.ndarray, n1: int, u_obs: float) -> float:
    """p = P(min(U', n1*n2 - U') <= min(U, n1*n2 - U)) over all assignments."""
    n = pooled_ranks.size
    n2 = n - n1
    offset = n1 * (n1 + 1) / 2.0
    observed = min(u_obs, n1 * n2 - u_obs)
    hits = 0
    total = 0
    for subset in itertools.combinations(range(n), n1):
        u = pooled_ranks[list(subset)].sum() - offset
        if min(u, n1 * n2 - u) <= observed + 1e-12:
            hits += 1
        total += 1
    return hits / total


def mann_whitney(a, b, alpha: float = 0.05) -> TestResult:
    """Two-sided Mann-Whitney U test.

    Exact permutation enumeration when n1 + n2 <= 20, otherwise the normal
    approximation with tie correction.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise ValueError("samples must be non-empty")
    n1, n2 = a.size, b.size
    u = _u_statistic(a, b)
    if n1 + n2 <= EXACT_ENUMERATION_LIMIT:
        pooled_ranks = rankdata(np.concatenate([a, b]), method="average")
        p = _exact_two_sided_p(pooled_ranks, n1, u)
    else:
        n = n1 + n2
        pooled = np.concatenate([a, b])
        _, counts = np.unique(pooled, return_counts=True)
        tie_term = float(np.sum(counts.astype(float) ** 3 - counts))
        var_u = (n1 * n2 / 12.0) * ((n + 1) - tie_term / (n * (n - 1)))
        if var_u <= 0:
            p = 1.0
        else:
            z = (u - n1 * n2 / 2.0) / math.sqrt(var_u)
            p = float(2.0 * norm.sf(abs(z)))
    p = min(p, 1.0)
    return TestResult(u_statistic=u, p_value=p, alpha=alpha, significant=p < alpha)


def _best_split(means: np.ndarray) -> int:
    """Index k (1..m-1) maximizing between-group sum of squares of the means."""
    m = means.size
    grand = means.mean()
    best_k, best_bss = 1, -math.inf
    for k in range(1, m):
        left, right = means[:k], means[k:]
        bss = k * (left.mean() - grand) ** 2 + (m - k) * (right.mean() - grand) ** 2
        if bss > best_bss:
            best_k, best_bss = k, bss
    return best_k


def _any_non_negligible(left_samples: list, right_samples: list) -> bool:
    for sa in left_samples:
        for sb in right_samples:
            if abs(cohens_d(sa, sb).d) > NEGLIGIBLE_D:
                return True
    return False


def _partition(names: list, samples: dict, means: dict) -> list:
    if len(names) == 1:
        return [names]
    mean_arr = np.array([means[n] for n in names])
    k = _best_split(mean_arr)
    left, right = names[:k], names[k:]
    if _any_non_negligible([samples[n] for n in left], [samples[n] for n in right]):
        return _partition(left, samples, means) + _partition(right, samples, means)
    return [names]


def scott_knott_esd(treatments: dict, lower_is_better: bool = False) -> RankTable:
    """Partition treatments into statistically distinct ranked groups.

    treatments maps name -> sample of observations (each of size >= 2).
    By default higher means are better; lower_is_better inverts that
    (used when the observations are themselves ranks).
    """
    if not treatments:
        raise ValueError("scott_knott_esd needs at least one treatment")
    samples = {}
    for name, values in treatments.items():
        arr = np.asarray(values, dtype=float)
        if arr.size < 2:
            raise ValueError(f"treatment {name!r} needs at least 2 observations")
        samples[name] = -arr if lower_is_better else arr
    means = {name: float(arr.mean()) for name, arr in samples.items()}
    # stable sort: ties keep insertion order, so results are deterministic
    ordered = sorted(samples.keys(), key=lambda n: -means[n])
    groups = _partition(ordered, samples, means)
    ranks = {}
    for i, grp in enumerate(groups, start=1):
        for name in grp:
            ranks[name] = i
    sign = -1.0 if lower_is_better else 1.0
    reported = {name: sign * means[name] for name in samples}
    return RankTable(groups=tuple(tuple(g) for g in groups), ranks=ranks, means=reported)


def double_scott_knott(per_dataset: dict) -> RankTable:
    """Rank treatments across datasets: per-dataset ranking, then a ranking
    of each treatment's vector of per-dataset ranks (lower rank = better)."""
    if not per_dataset:
        raise ValueError("double_scott_knott needs at least one dataset")
    names = list(per_dataset.keys())
    universe = set(per_dataset[names[0]].keys())
    for ds in names[1:]:
        if set(per_dataset[ds].keys()) != universe:
            missing = universe.symmetric_difference(per_dataset[ds].keys())
            raise ValueError(f"treatment sets differ across datasets: {sorted(missing)}")
    step1 = {ds: scott_knott_esd(per_dataset[ds]) for ds in names}
    if len(names) == 1:
        return step1[names[0]]
    rank_vectors = {
        t: [step1[ds].ranks[t] for ds in names] for t in per_dataset[names[0]].keys()
    }
    return scott_knott_esd(rank_vectors, lower_is_better=True)


def performance_delta(opt, default, alpha: float = 0.05):
    """Per-repetition deltas (optimized - default), effect size, and U test.

    Both arguments are PerformanceDistributions with identical provenance and
    repetition counts (paired by shared bootstrap seeds).
    """
    for attr in ("dataset_name", "classifier_id", "measure"):
        if getattr(opt, attr) != getattr(default, attr):
            raise ValueError(
                f"provenance mismatch on {attr}: {getattr(opt, attr)!r} "
                f"vs {getattr(default, attr)!r}"
            )
    if opt.values.size != default.values.size:
        raise ValueError("repetition counts differ")
    deltas = opt.values - default.values
    return deltas, cohens_d(opt.values, default.values), mann_whitney(opt.values, default.values, alpha)


@dataclass(frozen=True)
class CrossApplication:
    donor: str
    recipient: str
    donor_mean: float
    own_mean: float
    p_value: float
    significant_drop: bool


@dataclass(frozen=True)
class TransferabilityReport:
    frequencies: dict
    cross: tuple


def transferability(
    optimal_settings: dict,
    group: list,
    evaluate=None,
    higher_is_better: bool = True,
    alpha: float = 0.05,
) -> TransferabilityReport:
    """How often each optimal parameter value recurs across a group of datasets.

    optimal_settings maps dataset name -> ParameterSetting. When evaluate is
    given (callable (dataset_name, setting) -> per-repetition scores), each
    donor's setting is also applied to every other dataset and compared
    against that dataset's own optimum with a Mann-Whitney U test.
    """
    if len(group) < 2:
        raise ValueError("transferability needs at least 2 datasets")
    missing = [ds for ds in group if ds not in optimal_settings]
    if missing:
        raise ValueError(f"no optimal setting recorded for: {missing}")

    frequencies: dict = {}
    param_names = sorted({name for ds in group for name in optimal_settings[ds]})
    for pname in param_names:
        counts: dict = {}
        for ds in group:
            value = optimal_settings[ds].get(pname)
            counts[value] = counts.get(value, 0) + 1
        frequencies[pname] = {v: c / len(group) for v, c in counts.items()}

    cross = []
    if evaluate is not None:
        for recipient in group:
            own = np.asarray(evaluate(recipient, optimal_settings[recipient]), dtype=float)
            for donor in group:
                if donor == recipient:
                    continue
                applied = np.asarray(evaluate(recipient, optimal_settings[donor]), dtype=float)
                test = mann_whitney(applied, own, alpha)
                worse = applied.mean() < own.mean() if higher_is_better else applied.mean() > own.mean()
                cross.append(CrossApplication(
                    donor=donor,
                    recipient=recipient,
                    donor_mean=float(applied.mean()),
                    own_mean=float(own.mean()),
                    p_value=test.p_value,
                    significant_drop=bool(test.significant and worse),
                ))
    return TransferabilityReport(frequencies=frequencies, cross=tuple(cross))
