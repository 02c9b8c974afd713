"""dptune: a parameter-tuning workbench for defect-prediction classifiers.

Optimizes classifier parameters with grid, random, genetic, and differential
evolution search; evaluates settings with out-of-sample bootstrap over 12
performance measures; and ranks techniques and variables with an
effect-size-aware partitioning test and permutation importance.
"""

from .bootstrap import (
    BootstrapSplit,
    PerformanceDistribution,
    StabilityReport,
    draw_bootstrap,
    out_of_sample_bootstrap,
    run_bootstrap,
    stability_ratio,
)
from .classifiers import (
    CLASSIFIER_IDS,
    ParameterSetting,
    ParameterSpace,
    ParameterSpec,
    TrainedModel,
    default_setting,
    parameter_space,
    predict_proba,
    train,
)
from .dataset import (
    Dataset,
    InclusionVerdict,
    check_inclusion,
    compute_epv,
    load_dataset,
    log_transform,
    save_dataset,
)
from .importance import (
    ImportanceScores,
    RankShiftTable,
    permutation_importance,
    rank_shift,
    rank_variables,
)
from .measures import (
    MEASURES,
    ConfusionMatrix,
    PerformanceVector,
    PredictionVector,
    auc,
    brier,
    confusion_at_threshold,
    evaluate_predictions,
    logloss,
    threshold_measures,
)
from .optimizers import (
    BootstrapObjective,
    DeConfig,
    GaConfig,
    OptimizationResult,
    decode_genome,
    differential_evolution,
    genetic_search,
    grid_candidates,
    grid_search,
    random_search,
)
from .preprocess import (
    CorrelationMatrix,
    Removal,
    remove_correlated,
    remove_redundant,
    spearman_matrix,
)
from .stats import (
    EffectSize,
    RankTable,
    TestResult,
    cohens_d,
    double_scott_knott,
    mann_whitney,
    performance_delta,
    scott_knott_esd,
    transferability,
)
from .synth import make_interaction_dataset, make_separable_dataset

__version__ = "0.1.0"
