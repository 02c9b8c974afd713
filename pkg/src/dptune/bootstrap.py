"""Out-of-sample bootstrap validation.

Each repetition trains on N rows drawn with replacement and tests on the rows
absent from the draw, so train and test never overlap. Repetition seeds are
derived from the master seed, making results independent of worker count and
execution order.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._seeds import derive_int_seed, derive_rng
from .classifiers import ParameterSetting, predict_proba, train
from .dataset import Dataset
from .importance import ImportanceScores, permutation_importance
from .measures import MEASURES, PredictionVector, evaluate_predictions

DEFAULT_REPETITIONS = 100
_MAX_REDRAWS = 100


@dataclass(frozen=True)
class BootstrapSplit:
    train_indices: np.ndarray  # size N, drawn with replacement
    test_indices: np.ndarray  # rows absent from the draw
    redraws: int = 0


@dataclass(frozen=True)
class PerformanceDistribution:
    classifier_id: str
    setting: ParameterSetting
    dataset_name: str
    measure: str
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))

    @property
    def sigma(self) -> float:
        """Sample standard deviation; 0 for a single repetition."""
        if self.values.size < 2:
            return 0.0
        return float(np.std(self.values, ddof=1))

    @property
    def mean(self) -> float:
        return float(self.values.mean())


@dataclass(frozen=True)
class StabilityReport:
    sigma_optimized: float
    sigma_default: float
    sr: float
    infinite: bool = False


@dataclass
class BootstrapRunResult:
    distributions: dict
    importance: ImportanceScores | None = None
    redraw_counts: list = field(default_factory=list)


def draw_bootstrap(d: Dataset, rng_seed: int) -> BootstrapSplit:
    """Uniform with-replacement draw of N indices; redraws while the
    out-of-bag complement is empty (capped)."""
    n = d.n_rows
    if n < 2:
        raise ValueError("bootstrap needs at least 2 rows")
    rng = derive_rng(rng_seed)
    for redraws in range(_MAX_REDRAWS):
        train_idx = rng.integers(0, n, size=n)
        mask = np.ones(n, dtype=bool)
        mask[train_idx] = False
        test_idx = np.nonzero(mask)[0]
        if test_idx.size > 0:
            return BootstrapSplit(train_indices=train_idx, test_indices=test_idx, redraws=redraws)
    raise RuntimeError(f"no non-empty out-of-bag set in {_MAX_REDRAWS} draws")


def _usable_split(d: Dataset, split: BootstrapSplit) -> bool:
    """Training side must include both classes (most classifiers require it);
    the test side must too, else AUC is undefined for the repetition."""
    train_labels = d.labels[split.train_indices]
    test_labels = d.labels[split.test_indices]
    return (
        train_labels.min() != train_labels.max()
        and test_labels.min() != test_labels.max()
    )


def _one_repetition(d, classifier_id, setting, master_seed, rep, collect_importance):
    redraws = 0
    split = None
    for attempt in range(_MAX_REDRAWS):
        seed = derive_int_seed(master_seed, "rep", rep, "attempt", attempt)
        candidate = draw_bootstrap(d, seed)
        if _usable_split(d, candidate):
            split = candidate
            redraws = attempt
            break
    if split is None:
        raise RuntimeError(
            f"repetition {rep}: no usable split (single-class draws) in {_MAX_REDRAWS} attempts"
        )
    try:
        model = train(
            classifier_id, setting, d.select_rows(split.train_indices),
            seed=derive_int_seed(master_seed, "rep", rep, "model"),
        )
        probs = predict_proba(model, d.features[split.test_indices])
        vector = PredictionVector(p=probs, y=d.labels[split.test_indices])
        perf = evaluate_predictions(vector)
        scores = None
        if collect_importance:
            scores = permutation_importance(
                model,
                d.select_rows(split.test_indices),
                rng_seed=derive_int_seed(master_seed, "rep", rep, "perm"),
            )
    except Exception as exc:
        raise RuntimeError(f"repetition {rep}: {exc}") from exc
    return perf, scores, redraws


def run_bootstrap(
    d: Dataset,
    classifier_id: str,
    setting: ParameterSetting,
    repetitions: int = DEFAULT_REPETITIONS,
    master_seed: int = 0,
    workers: int = 1,
    collect_importance: bool = False,
) -> BootstrapRunResult:
    """Full bootstrap run: per-measure distributions, optionally plus
    permutation-importance scores accumulated per repetition."""
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")

    def job(rep):
        return _one_repetition(d, classifier_id, setting, master_seed, rep, collect_importance)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, range(repetitions)))
    else:
        results = [job(rep) for rep in range(repetitions)]

    per_measure = {m: np.array([r[0].as_dict()[m] for r in results]) for m in MEASURES}
    distributions = {
        m: PerformanceDistribution(
            classifier_id=classifier_id,
            setting=setting,
            dataset_name=d.name,
            measure=m,
            values=vals,
        )
        for m, vals in per_measure.items()
    }
    importance = None
    if collect_importance:
        importance = ImportanceScores(variables=d.feature_names)
        for r in results:
            importance.append_repetition(r[1])
    return BootstrapRunResult(
        distributions=distributions,
        importance=importance,
        redraw_counts=[r[2] for r in results],
    )


def out_of_sample_bootstrap(
    d: Dataset,
    classifier_id: str,
    setting: ParameterSetting,
    repetitions: int = DEFAULT_REPETITIONS,
    master_seed: int = 0,
    workers: int = 1,
) -> dict:
    """One PerformanceDistribution per measure."""
    return run_bootstrap(
        d, classifier_id, setting,
        repetitions=repetitions, master_seed=master_seed, workers=workers,
    ).distributions


def stability_ratio(opt: PerformanceDistribution, default: PerformanceDistribution) -> StabilityReport:
    """sigma_optimized / sigma_default; both zero -> 1, zero denominator -> flagged."""
    for attr in ("measure", "dataset_name", "classifier_id"):
        if getattr(opt, attr) != getattr(default, attr):
            raise ValueError(
                f"provenance mismatch on {attr}: {getattr(opt, attr)!r} "
                f"vs {getattr(default, attr)!r}"
            )
    s_opt, s_def = opt.sigma, default.sigma
    if s_def == 0.0:
        if s_opt == 0.0:
            return StabilityReport(sigma_optimized=0.0, sigma_default=0.0, sr=1.0)
        return StabilityReport(
            sigma_optimized=s_opt, sigma_default=0.0, sr=float("inf"), infinite=True
        )
    return StabilityReport(sigma_optimized=s_opt, sigma_default=s_def, sr=s_opt / s_def)
