"""The four parameter-search techniques: grid, random, genetic, differential evolution.

All four search the declared candidate sets. The evolutionary techniques work
on unit-cube genomes (one gene per parameter) decoded onto the candidate
lists, so every technique explores the same discrete domain. Objectives cache
by setting and evaluate every setting under shared seeds, so reported score
differences reflect search behaviour, not evaluation noise.
"""

import itertools
import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from ._seeds import derive_rng
from .bootstrap import out_of_sample_bootstrap
from .classifiers import ParameterSetting, ParameterSpace
from .dataset import Dataset
from .measures import MAXIMIZED_MEASURES, MINIMIZED_MEASURES

DEFAULT_GRID_BUDGET = 5


def measure_direction(measure: str) -> str:
    if measure in MAXIMIZED_MEASURES:
        return "maximize"
    if measure in MINIMIZED_MEASURES:
        return "minimize"
    raise ValueError(f"unknown measure {measure!r}")


@dataclass
class BootstrapObjective:
    """Mean out-of-sample bootstrap performance of one (dataset, classifier).

    Every setting is evaluated with the same master seed, so two evaluations
    of one setting return the identical mean. Full per-measure distributions
    are cached for later reuse (ratios, transferability).
    """

    dataset: Dataset
    classifier_id: str
    measure: str = "auc"
    repetitions: int = 100
    master_seed: int = 0
    workers: int = 1

    def __post_init__(self):
        self.direction = measure_direction(self.measure)
        self._cache: dict = {}

    def distributions_for(self, setting: ParameterSetting) -> dict:
        key = setting.key()
        if key not in self._cache:
            self._cache[key] = out_of_sample_bootstrap(
                self.dataset, self.classifier_id, setting,
                repetitions=self.repetitions,
                master_seed=self.master_seed,
                workers=self.workers,
            )
        return self._cache[key]

    def evaluate(self, setting: ParameterSetting) -> float:
        return self.distributions_for(setting)[self.measure].mean


@dataclass(frozen=True)
class OptimizationResult:
    technique: str
    config: dict
    best_setting: ParameterSetting
    best_score: float
    evaluations: tuple  # (setting, mean score), first-evaluation order
    wall_clock: float

    def to_json(self) -> dict:
        return {
            "technique": self.technique,
            "config": self.config,
            "best_setting": dict(self.best_setting),
            "best_score": self.best_score,
            "evaluations": [
                {"setting": dict(s), "score": score} for s, score in self.evaluations
            ],
            "wall_clock_seconds": self.wall_clock,
        }


class _Trace:
    """Per-search record of evaluated settings; duplicates cost one cache hit
    at the objective and are not re-listed."""

    def __init__(self, objective):
        self.objective = objective
        self.order: list = []
        self.scores: dict = {}

    def evaluate(self, setting: ParameterSetting) -> float:
        key = setting.key()
        if key not in self.scores:
            score = self.objective.evaluate(setting)
            self.order.append(setting)
            self.scores[key] = score
        return self.scores[key]

    def best(self):
        """First-evaluated setting attaining the extremal score."""
        maximize = self.objective.direction == "maximize"
        best_setting, best_score = None, None
        for setting in self.order:
            score = self.scores[setting.key()]
            if best_score is None or (score > best_score if maximize else score < best_score):
                best_setting, best_score = setting, score
        return best_setting, best_score

    def evaluations(self) -> tuple:
        return tuple((s, self.scores[s.key()]) for s in self.order)


def _result(technique, config, trace, started) -> OptimizationResult:
    best_setting, best_score = trace.best()
    return OptimizationResult(
        technique=technique,
        config=config,
        best_setting=best_setting,
        best_score=best_score,
        evaluations=trace.evaluations(),
        wall_clock=time.monotonic() - started,
    )


def grid_candidates(space: ParameterSpace, budget: int = DEFAULT_GRID_BUDGET) -> list:
    """Cartesian product of per-parameter candidates truncated to the budget,
    in lexicographic spec order. An empty space yields one empty setting."""
    if budget < 1:
        raise ValueError("budget must be >= 1")
    lists = [spec.candidates[: min(budget, len(spec.candidates))] for spec in space.specs]
    names = space.names
    return [
        ParameterSetting(dict(zip(names, combo)))
        for combo in itertools.product(*lists)
    ]


def grid_search(space: ParameterSpace, objective, budget: int = DEFAULT_GRID_BUDGET) -> OptimizationResult:
    started = time.monotonic()
    trace = _Trace(objective)
    for setting in grid_candidates(space, budget):
        trace.evaluate(setting)
    return _result("grid", {"budget": budget}, trace, started)


def random_search(
    space: ParameterSpace, objective, iterations: int, seed: int = 0, distinct: bool = False
) -> OptimizationResult:
    """Uniform independent draws per parameter from the full candidate lists;
    duplicate draws are allowed (and logged in the config).

    distinct=True is a debug mode that redraws duplicates until `iterations`
    distinct settings are found (requires iterations <= space size).
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if distinct and iterations > space.size:
        raise ValueError(f"cannot draw {iterations} distinct settings from a space of {space.size}")
    started = time.monotonic()
    rng = derive_rng(seed, "random-search")
    trace = _Trace(objective)
    duplicates = 0
    seen: set = set()
    draws = 0
    while draws < iterations:
        values = {
            spec.name: spec.candidates[int(rng.integers(0, len(spec.candidates)))]
            for spec in space.specs
        }
        setting = ParameterSetting(values)
        if setting.key() in seen:
            duplicates += 1
            if distinct:
                continue
        seen.add(setting.key())
        draws += 1
        trace.evaluate(setting)
    config = {
        "iterations": iterations, "seed": seed,
        "duplicate_draws": duplicates, "distinct": distinct,
    }
    return _result("random", config, trace, started)


def decode_genome(space: ParameterSpace, genome) -> ParameterSetting:
    """Map a unit-cube gene vector onto the candidate lists: gene x selects
    candidate index min(floor(x * C), C - 1)."""
    genome = np.asarray(genome, dtype=float)
    if genome.shape != (len(space.specs),):
        raise ValueError(f"genome length {genome.size} != {len(space.specs)} parameters")
    values = {}
    for gene, spec in zip(genome, space.specs):
        c = len(spec.candidates)
        values[spec.name] = spec.candidates[min(int(math.floor(gene * c)), c - 1)]
    return ParameterSetting(values)


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 20
    crossover_prob: float = 0.8
    mutation_prob: float = 0.1
    elitism: int = 2
    stall_generations: int = 5
    max_generations: int = 100


@dataclass(frozen=True)
class DeConfig:
    population_size: int = 20
    crossover_prob: float = 0.9
    differential_weight: float = 0.8
    strategy: str = "rand/1/bin"
    stall_generations: int = 5
    max_generations: int = 100


def _is_better(score, incumbent, maximize: bool) -> bool:
    return score > incumbent if maximize else score < incumbent


def genetic_search(space: ParameterSpace, objective, cfg: GaConfig = GaConfig(), seed: int = 0) -> OptimizationResult:
    """Fitness-proportional selection, per-gene uniform crossover and mutation,
    elitism, and a stall-based stopping rule."""
    if cfg.population_size < 2:
        raise ValueError("population_size must be >= 2")
    if cfg.elitism > cfg.population_size:
        raise ValueError("elitism cannot exceed population_size")
    started = time.monotonic()
    rng = derive_rng(seed, "ga")
    trace = _Trace(objective)
    length = len(space.specs)
    maximize = objective.direction == "maximize"

    if length == 0:
        trace.evaluate(ParameterSetting({}))
        return _result("ga", asdict(cfg), trace, started)

    population = rng.random((cfg.population_size, length))
    scores = np.array([trace.evaluate(decode_genome(space, g)) for g in population])
    best_so_far = scores.max() if maximize else scores.min()
    stall = 0
    for _ in range(cfg.max_generations):
        if stall >= cfg.stall_generations:
            break
        order = np.argsort(-scores if maximize else scores, kind="stable")
        elites = population[order[: cfg.elitism]].copy()

        weights = scores - scores.min() if maximize else scores.max() - scores
        weights = weights + 1e-12
        weights = weights / weights.sum()
        children = []
        for _ in range(cfg.population_size - cfg.elitism):
            i1, i2 = rng.choice(cfg.population_size, size=2, p=weights)
            take_second = rng.random(length) < cfg.crossover_prob
            child = np.where(take_second, population[i2], population[i1])
            mutate = rng.random(length) < cfg.mutation_prob
            child[mutate] = rng.random(int(mutate.sum()))
            children.append(child)
        population = np.vstack([elites] + children) if children else elites
        scores = np.array([trace.evaluate(decode_genome(space, g)) for g in population])
        generation_best = scores.max() if maximize else scores.min()
        if _is_better(generation_best, best_so_far, maximize):
            best_so_far = generation_best
            stall = 0
        else:
            stall += 1
    return _result("ga", asdict(cfg), trace, started)


def differential_evolution(space: ParameterSpace, objective, cfg: DeConfig = DeConfig(), seed: int = 0) -> OptimizationResult:
    """DE/rand/1/bin with greedy selection and the same stall rule as the GA."""
    if cfg.strategy != "rand/1/bin":
        raise ValueError(f"unsupported strategy {cfg.strategy!r}; only rand/1/bin is implemented")
    if cfg.population_size < 4:
        raise ValueError("population_size must be >= 4 for rand/1 mutation")
    started = time.monotonic()
    rng = derive_rng(seed, "de")
    trace = _Trace(objective)
    length = len(space.specs)
    maximize = objective.direction == "maximize"

    if length == 0:
        trace.evaluate(ParameterSetting({}))
        return _result("de", asdict(cfg), trace, started)

    population = rng.random((cfg.population_size, length))
    scores = np.array([trace.evaluate(decode_genome(space, g)) for g in population])
    best_so_far = scores.max() if maximize else scores.min()
    stall = 0
    for _ in range(cfg.max_generations):
        if stall >= cfg.stall_generations:
            break
        donors = population.copy()
        for i in range(cfg.population_size):
            others = [j for j in range(cfg.population_size) if j != i]
            a, b, c = rng.choice(others, size=3, replace=False)
            mutant = np.clip(
                donors[a] + cfg.differential_weight * (donors[b] - donors[c]), 0.0, 1.0
            )
            cross = rng.random(length) < cfg.crossover_prob
            cross[int(rng.integers(0, length))] = True  # one guaranteed gene
            trial = np.where(cross, mutant, donors[i])
            trial_score = trace.evaluate(decode_genome(space, trial))
            if _is_better(trial_score, scores[i], maximize):
                population[i] = trial
                scores[i] = trial_score
        generation_best = scores.max() if maximize else scores.min()
        if _is_better(generation_best, best_so_far, maximize):
            best_so_far = generation_best
            stall = 0
        else:
            stall += 1
    return _result("de", asdict(cfg), trace, started)
