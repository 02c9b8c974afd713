"""Experiment orchestration: JSON config in, CSV/JSON reports out.

Pipeline per dataset: load -> inclusion screen -> ln(x+1) -> correlation prune
-> redundancy prune; then per classifier: optimize with the selected
techniques, evaluate default and optimized settings with the out-of-sample
bootstrap under shared seeds, and run the delta / stability / rank-shift /
transferability / ranking analyses. Identical configs produce byte-identical
outputs regardless of worker count (wall-clock values in timings.csv are the
one exception: they are measured, not derived).
"""

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass, field

from ._seeds import derive_int_seed
from .bootstrap import BootstrapRunResult, run_bootstrap, stability_ratio
from .classifiers import CLASSIFIER_IDS, ParameterSetting, default_setting, parameter_space
from .dataset import Dataset, check_inclusion, load_dataset, log_transform
from .importance import rank_shift, rank_variables
from .measures import MEASURES
from .optimizers import (
    BootstrapObjective,
    DeConfig,
    GaConfig,
    differential_evolution,
    genetic_search,
    grid_search,
    random_search,
)
from .preprocess import remove_correlated, remove_redundant
from .stats import double_scott_knott, performance_delta, transferability
from .synth import make_interaction_dataset, make_separable_dataset

TECHNIQUES = ("grid", "random", "ga", "de")

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_TOTAL = 2


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    datasets: list
    classifiers: list
    optimizers: dict
    master_seed: int
    objective_measure: str = "auc"
    repetitions: int = 100
    optimization_repetitions: int | None = None
    workers: int = 1
    skip_inclusion_check: bool = False
    out_dir: str | None = None

    @property
    def opt_repetitions(self) -> int:
        return self.optimization_repetitions or self.repetitions

    @classmethod
    def from_file(cls, path: str) -> "ExperimentConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                raw = json.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        return cls.from_dict(raw)

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        if "master_seed" not in raw:
            raise ConfigError("master_seed is mandatory (no wall-clock default)")
        known = {
            "datasets", "classifiers", "optimizers", "master_seed",
            "objective_measure", "repetitions", "optimization_repetitions",
            "workers", "skip_inclusion_check", "out_dir",
        }
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(
            datasets=raw.get("datasets", []),
            classifiers=raw.get("classifiers", []),
            optimizers=raw.get("optimizers", {}),
            master_seed=int(raw["master_seed"]),
            objective_measure=raw.get("objective_measure", "auc"),
            repetitions=int(raw.get("repetitions", 100)),
            optimization_repetitions=raw.get("optimization_repetitions"),
            workers=int(raw.get("workers", 1)),
            skip_inclusion_check=bool(raw.get("skip_inclusion_check", False)),
            out_dir=raw.get("out_dir"),
        )
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if not self.datasets:
            raise ConfigError("at least one dataset is required")
        if not self.classifiers:
            raise ConfigError("at least one classifier is required")
        unknown_clf = [c for c in self.classifiers if c not in CLASSIFIER_IDS]
        if unknown_clf:
            raise ConfigError(f"unknown classifiers {unknown_clf}; available: {list(CLASSIFIER_IDS)}")
        if not self.optimizers:
            raise ConfigError("at least one optimizer technique is required")
        unknown_opt = [t for t in self.optimizers if t not in TECHNIQUES]
        if unknown_opt:
            raise ConfigError(f"unknown optimizers {unknown_opt}; available: {list(TECHNIQUES)}")
        if self.objective_measure not in MEASURES:
            raise ConfigError(f"unknown objective measure {self.objective_measure!r}")
        if self.repetitions < 1 or self.opt_repetitions < 1:
            raise ConfigError("repetitions must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")


@dataclass
class CombinationResult:
    dataset: str
    classifier: str
    optimizations: dict  # technique -> OptimizationResult
    chosen_technique: str
    default_run: BootstrapRunResult
    optimized_run: BootstrapRunResult
    deltas: dict  # measure -> (values, EffectSize, TestResult)
    stability: dict  # measure -> StabilityReport
    shift_table: object = None


@dataclass
class RunReport:
    config: ExperimentConfig
    combinations: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    verdicts: dict = field(default_factory=dict)
    removals: dict = field(default_factory=dict)
    transfer: dict = field(default_factory=dict)
    ranks_joint: object = None


def _build_dataset(entry: dict) -> Dataset:
    if "synthetic" in entry:
        kind = entry["synthetic"]
        kwargs = {k: v for k, v in entry.items() if k not in ("synthetic",)}
        if kind == "separable":
            return make_separable_dataset(**kwargs)
        if kind == "interaction":
            return make_interaction_dataset(**kwargs)
        raise ConfigError(f"unknown synthetic dataset kind {kind!r}")
    if "path" not in entry or "label_column" not in entry:
        raise ConfigError(f"dataset entry needs path+label_column or synthetic: {entry}")
    return load_dataset(entry["path"], entry["label_column"], name=entry.get("name"))


def _prepare_dataset(entry: dict, report: RunReport, skip_inclusion: bool) -> Dataset | None:
    data = _build_dataset(entry)
    verdict = check_inclusion(data)
    report.verdicts[data.name] = verdict
    if not verdict.included and not skip_inclusion:
        report.failures.append({
            "dataset": data.name, "classifier": "*", "stage": "inclusion",
            "error": f"excluded: epv={verdict.epv:.4g} (need > 10), "
                     f"rate={verdict.defective_rate:.4g} (need <= 0.5)",
        })
        return None
    transformed = log_transform(data)
    pruned, corr_log = remove_correlated(transformed)
    if pruned.n_features >= 2:
        pruned, red_log = remove_redundant(pruned)
    else:
        red_log = []
    report.removals[data.name] = list(corr_log) + list(red_log)
    return pruned


def _run_technique(technique: str, options: dict, space, objective, seed: int):
    options = dict(options or {})
    if technique == "grid":
        return grid_search(space, objective, budget=int(options.get("budget", 5)))
    if technique == "random":
        return random_search(
            space, objective,
            iterations=int(options.get("iterations", 20)),
            seed=int(options.get("seed", seed)),
        )
    if technique == "ga":
        cfg = GaConfig(**{k: v for k, v in options.items() if k != "seed"})
        return genetic_search(space, objective, cfg=cfg, seed=int(options.get("seed", seed)))
    if technique == "de":
        cfg = DeConfig(**{k: v for k, v in options.items() if k != "seed"})
        return differential_evolution(space, objective, cfg=cfg, seed=int(options.get("seed", seed)))
    raise ConfigError(f"unknown technique {technique!r}")


def _analyze_combination(config, data, classifier, objective, optimizations) -> CombinationResult:
    chosen = "grid" if "grid" in optimizations else next(iter(optimizations))
    best = optimizations[chosen].best_setting
    default = default_setting(classifier)
    eval_seed = derive_int_seed(config.master_seed, "eval", data.name, classifier)
    with_importance = config.repetitions >= 2

    default_run = run_bootstrap(
        data, classifier, default, repetitions=config.repetitions,
        master_seed=eval_seed, workers=config.workers, collect_importance=with_importance,
    )
    if best == default:
        optimized_run = default_run
    else:
        optimized_run = run_bootstrap(
            data, classifier, best, repetitions=config.repetitions,
            master_seed=eval_seed, workers=config.workers, collect_importance=with_importance,
        )

    deltas, stability = {}, {}
    for m in MEASURES:
        deltas[m] = performance_delta(optimized_run.distributions[m], default_run.distributions[m])
        stability[m] = stability_ratio(optimized_run.distributions[m], default_run.distributions[m])

    shift_table = None
    if with_importance:
        shift_table = rank_shift(
            rank_variables(optimized_run.importance),
            rank_variables(default_run.importance),
        )
    return CombinationResult(
        dataset=data.name,
        classifier=classifier,
        optimizations=optimizations,
        chosen_technique=chosen,
        default_run=default_run,
        optimized_run=optimized_run,
        deltas=deltas,
        stability=stability,
        shift_table=shift_table,
    )


def run_experiment(config: ExperimentConfig, out_dir: str) -> tuple:
    """Execute the full pipeline; returns (RunReport, exit_code) and writes
    all report files under out_dir."""
    report = RunReport(config=config)
    datasets: list = []
    for entry in config.datasets:
        try:
            prepared = _prepare_dataset(entry, report, config.skip_inclusion_check)
        except Exception as exc:
            name = entry.get("name") or entry.get("path") or str(entry)
            report.failures.append({
                "dataset": str(name), "classifier": "*", "stage": "prepare", "error": str(exc),
            })
            continue
        if prepared is not None:
            datasets.append(prepared)

    objectives: dict = {}
    for data in datasets:
        for classifier in config.classifiers:
            objective = BootstrapObjective(
                dataset=data,
                classifier_id=classifier,
                measure=config.objective_measure,
                repetitions=config.opt_repetitions,
                master_seed=derive_int_seed(config.master_seed, "objective", data.name, classifier),
                workers=config.workers,
            )
            objectives[(data.name, classifier)] = objective
            try:
                space = parameter_space(classifier)
                optimizations = {}
                for technique in config.optimizers:
                    seed = derive_int_seed(
                        config.master_seed, "search", data.name, classifier, technique
                    )
                    optimizations[technique] = _run_technique(
                        technique, config.optimizers[technique], space, objective, seed
                    )
                combo = _analyze_combination(config, data, classifier, objective, optimizations)
                report.combinations.append(combo)
            except Exception as exc:
                report.failures.append({
                    "dataset": data.name, "classifier": classifier,
                    "stage": "optimize/evaluate", "error": str(exc),
                })

    # transferability needs >= 2 successfully analyzed datasets per classifier
    for classifier in config.classifiers:
        combos = [c for c in report.combinations if c.classifier == classifier]
        if len(combos) < 2:
            continue
        group = [c.dataset for c in combos]
        optimal = {c.dataset: c.optimizations[c.chosen_technique].best_setting for c in combos}
        by_name = {c.dataset: c for c in combos}

        def evaluate(ds_name, setting, _clf=classifier):
            return objectives[(ds_name, _clf)].distributions_for(setting)[
                config.objective_measure
            ].values

        report.transfer[classifier] = transferability(optimal, group, evaluate=evaluate)

    # joint ranking of default and optimized treatments across datasets
    if report.combinations and config.repetitions >= 2:
        per_dataset: dict = {}
        for combo in report.combinations:
            measure = config.objective_measure
            treatments = per_dataset.setdefault(combo.dataset, {})
            treatments[f"{combo.classifier}[default]"] = combo.default_run.distributions[measure].values
            treatments[f"{combo.classifier}[optimized]"] = combo.optimized_run.distributions[measure].values
        universes = {frozenset(t) for t in per_dataset.values()}
        if len(universes) == 1:
            report.ranks_joint = double_scott_knott(per_dataset)

    emit_plot_data(report, out_dir)

    if report.combinations and not report.failures:
        code = EXIT_OK
    elif report.combinations:
        code = EXIT_PARTIAL
    else:
        code = EXIT_TOTAL
    return report, code


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


def _write_csv(path: str, header: list, rows: list) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _setting_json(setting: ParameterSetting) -> str:
    return json.dumps(dict(setting), sort_keys=True)


def emit_plot_data(report: RunReport, out_dir: str) -> None:
    """Write the long-format report tables under out_dir (headers-only when
    the report is empty)."""
    os.makedirs(out_dir, exist_ok=True)
    config = report.config
    combos = report.combinations

    perf_rows = []
    for c in combos:
        for kind, run in (("default", c.default_run), ("optimized", c.optimized_run)):
            for m in MEASURES:
                for rep, value in enumerate(run.distributions[m].values):
                    perf_rows.append((c.dataset, c.classifier, kind, m, rep, float(value)))
    _write_csv(
        os.path.join(out_dir, "performance.csv"),
        ["dataset", "classifier", "setting_id", "measure", "repetition", "value"],
        perf_rows,
    )

    delta_rows = []
    for c in combos:
        for m in MEASURES:
            dflt = c.default_run.distributions[m].values
            opt = c.optimized_run.distributions[m].values
            for rep in range(len(dflt)):
                delta_rows.append((
                    c.dataset, c.classifier, m, rep,
                    float(dflt[rep]), float(opt[rep]), float(opt[rep] - dflt[rep]),
                ))
    _write_csv(
        os.path.join(out_dir, "deltas.csv"),
        ["dataset", "classifier", "measure", "repetition", "default", "optimized", "delta"],
        delta_rows,
    )

    stab_rows = []
    for c in combos:
        for m in MEASURES:
            s = c.stability[m]
            _, effect, test = c.deltas[m]
            stab_rows.append((
                c.dataset, c.classifier, m,
                s.sigma_default, s.sigma_optimized, s.sr, s.infinite,
                effect.d, effect.magnitude, test.p_value, test.significant,
            ))
    _write_csv(
        os.path.join(out_dir, "stability.csv"),
        ["dataset", "classifier", "measure", "sigma_default", "sigma_optimized",
         "stability_ratio", "sr_infinite", "cohens_d", "magnitude", "p_value", "significant"],
        stab_rows,
    )

    imp_rows = []
    for c in combos:
        for kind, run in (("default", c.default_run), ("optimized", c.optimized_run)):
            if run.importance is None:
                continue
            for variable in run.importance.variables:
                for rep, score in enumerate(run.importance.per_variable[variable]):
                    imp_rows.append((c.dataset, c.classifier, kind, variable, rep, float(score)))
    _write_csv(
        os.path.join(out_dir, "importance.csv"),
        ["dataset", "classifier", "setting_id", "variable", "repetition", "score"],
        imp_rows,
    )

    shift_rows = []
    for c in combos:
        if c.shift_table is None:
            continue
        for row in c.shift_table.rows:
            shift_rows.append((
                c.dataset, c.classifier, row.variable,
                row.rank_optimized, row.rank_default, row.shift,
            ))
    _write_csv(
        os.path.join(out_dir, "rankshift.csv"),
        ["dataset", "classifier", "variable", "rank_optimized", "rank_default", "shift"],
        shift_rows,
    )

    transfer_rows = []
    for classifier in sorted(report.transfer):
        t = report.transfer[classifier]
        for param in sorted(t.frequencies):
            for value, freq in sorted(t.frequencies[param].items(), key=lambda kv: str(kv[0])):
                transfer_rows.append((
                    "frequency", classifier, param, value, freq,
                    None, None, None, None, None, None,
                ))
        for x in t.cross:
            transfer_rows.append((
                "cross", classifier, None, None, None,
                x.donor, x.recipient, x.donor_mean, x.own_mean, x.p_value, x.significant_drop,
            ))
    _write_csv(
        os.path.join(out_dir, "transferability.csv"),
        ["kind", "classifier", "parameter", "value", "frequency",
         "donor", "recipient", "donor_mean", "own_mean", "p_value", "significant_drop"],
        transfer_rows,
    )

    timing_rows = []
    for c in combos:
        for technique in c.optimizations:
            timing_rows.append((
                c.dataset, c.classifier, technique,
                c.optimizations[technique].wall_clock,
                len(c.optimizations[technique].evaluations),
            ))
    _write_csv(
        os.path.join(out_dir, "timings.csv"),
        ["dataset", "classifier", "technique", "wall_clock_seconds", "n_evaluations"],
        timing_rows,
    )

    for kind, filename in (("default", "ranks_default.csv"), ("optimized", "ranks_optimized.csv")):
        rows = []
        if report.ranks_joint is not None:
            suffix = f"[{kind}]"
            for treatment, rank, mean in report.ranks_joint.to_rows():
                if treatment.endswith(suffix):
                    rows.append((treatment[: -len(suffix)], rank, float(mean)))
        _write_csv(os.path.join(out_dir, filename), ["treatment", "rank", "mean"], rows)

    removal_rows = []
    for ds in sorted(report.removals):
        for entry in report.removals[ds]:
            removal_rows.append((ds, entry.column, entry.reason, entry.statistic))
    _write_csv(
        os.path.join(out_dir, "removals.csv"),
        ["dataset", "column", "reason", "statistic"],
        removal_rows,
    )

    summary = {
        "objective_measure": config.objective_measure,
        "repetitions": config.repetitions,
        "optimization_repetitions": config.opt_repetitions,
        "master_seed": config.master_seed,
        "datasets": {
            name: {
                "epv": v.epv,
                "defective_rate": v.defective_rate,
                "included": v.included,
            }
            for name, v in sorted(report.verdicts.items())
        },
        "combinations": [
            {
                "dataset": c.dataset,
                "classifier": c.classifier,
                "chosen_technique": c.chosen_technique,
                "best_settings": {
                    tech: dict(r.best_setting) for tech, r in c.optimizations.items()
                },
                "best_scores": {tech: r.best_score for tech, r in c.optimizations.items()},
                "rank_overlap": dict(c.shift_table.overlap) if c.shift_table else None,
            }
            for c in combos
        ],
        "failures": report.failures,
    }
    with open(os.path.join(out_dir, "summary.json"), "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")


def compare_optimizers(config: ExperimentConfig, out_dir: str) -> tuple:
    """Per measure, the ratio of each technique's optimized performance to
    grid search's optimized performance. Grid must be among the techniques."""
    if "grid" not in config.optimizers:
        raise ConfigError("compare requires the grid technique (ratio denominator)")
    if len(config.optimizers) < 2:
        raise ConfigError("compare requires at least 2 optimizer techniques")
    os.makedirs(out_dir, exist_ok=True)
    report = RunReport(config=config)
    rows = []
    timing_rows = []
    for entry in config.datasets:
        try:
            data = _prepare_dataset(entry, report, config.skip_inclusion_check)
        except Exception as exc:
            name = entry.get("name") or entry.get("path") or str(entry)
            report.failures.append({
                "dataset": str(name), "classifier": "*", "stage": "prepare", "error": str(exc),
            })
            continue
        if data is None:
            continue
        for classifier in config.classifiers:
            try:
                space = parameter_space(classifier)
                objective = BootstrapObjective(
                    dataset=data,
                    classifier_id=classifier,
                    measure=config.objective_measure,
                    repetitions=config.opt_repetitions,
                    master_seed=derive_int_seed(config.master_seed, "objective", data.name, classifier),
                    workers=config.workers,
                )
                results = {}
                for technique in config.optimizers:
                    seed = derive_int_seed(
                        config.master_seed, "search", data.name, classifier, technique
                    )
                    results[technique] = _run_technique(
                        technique, config.optimizers[technique], space, objective, seed
                    )
                    timing_rows.append((
                        data.name, classifier, technique,
                        results[technique].wall_clock,
                        len(results[technique].evaluations),
                    ))
                eval_seed = derive_int_seed(config.master_seed, "eval", data.name, classifier)
                eval_cache: dict = {}

                def evaluated(setting):
                    key = setting.key()
                    if key not in eval_cache:
                        eval_cache[key] = run_bootstrap(
                            data, classifier, setting,
                            repetitions=config.repetitions,
                            master_seed=eval_seed, workers=config.workers,
                        ).distributions
                    return eval_cache[key]

                grid_dists = evaluated(results["grid"].best_setting)
                for technique in config.optimizers:
                    dists = evaluated(results[technique].best_setting)
                    for m in MEASURES:
                        value = dists[m].mean
                        denom = grid_dists[m].mean
                        ratio = value / denom if denom != 0 else float("nan")
                        rows.append((data.name, classifier, technique, m, value, denom, ratio))
            except Exception as exc:
                report.failures.append({
                    "dataset": data.name, "classifier": classifier,
                    "stage": "compare", "error": str(exc),
                })
    _write_csv(
        os.path.join(out_dir, "optimizer_comparison.csv"),
        ["dataset", "classifier", "technique", "measure", "value", "grid_value", "ratio"],
        rows,
    )
    _write_csv(
        os.path.join(out_dir, "timings.csv"),
        ["dataset", "classifier", "technique", "wall_clock_seconds", "n_evaluations"],
        timing_rows,
    )
    summary = {"failures": report.failures, "rows": len(rows)}
    with open(os.path.join(out_dir, "summary.json"), "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    if rows and not report.failures:
        return report, EXIT_OK
    if rows:
        return report, EXIT_PARTIAL
    return report, EXIT_TOTAL


def _apply_cli_overrides(config: ExperimentConfig, args) -> ExperimentConfig:
    if args.threads is not None:
        config.workers = args.threads
    if getattr(args, "skip_inclusion_check", False):
        config.skip_inclusion_check = True
    config.validate()
    return config


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="dptune",
        description="Parameter-tuning workbench for defect-prediction classifiers",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run the full experiment pipeline")
    run_p.add_argument("--config", required=True, help="JSON experiment config")
    run_p.add_argument("--out", required=True, help="output directory for reports")
    run_p.add_argument("--threads", type=int, default=None, help="worker count override")
    run_p.add_argument("--skip-inclusion-check", action="store_true",
                       help="analyze datasets even if they fail the EPV/rate screen")

    cmp_p = sub.add_parser("compare", help="compare optimizer techniques against grid search")
    cmp_p.add_argument("--config", required=True)
    cmp_p.add_argument("--out", required=True)
    cmp_p.add_argument("--threads", type=int, default=None)

    args = parser.parse_args(argv)
    try:
        config = ExperimentConfig.from_file(args.config)
        config = _apply_cli_overrides(config, args)
        out_dir = args.out or config.out_dir
        if args.command == "run":
            _, code = run_experiment(config, out_dir)
        else:
            _, code = compare_optimizers(config, out_dir)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_TOTAL
    return code


if __name__ == "__main__":
    sys.exit(main())
