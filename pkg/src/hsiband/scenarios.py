"""Evaluation protocols: fold plans, repetition runs, and reporting.

Three protocols are provided.  HTC trains on a stratified sample drawn
across every image and tests on the held-out pixels of those same
images.  HIC trains only on Frame-scene pixels and tests on every
Comparison-scene pixel, using an inverted cross-validation during model
selection (train on one fold, evaluate on the rest).  HICVS additionally
carves a validation partition out of the Comparison pixels so model
selection can score candidates on the target scene without touching the
final test partition.

A scenario run repeats the full sample/select/train/test cycle several
times with derived seeds and reports per-day accuracy means with
population standard deviations.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np
import numpy.typing as npt

from .data import REPORT_DAYS, LabeledDataset, group_indices, stratified_folds, stratified_sample
from .ga import GaConfig, GaHistory, decode, ga_optimize
from .grids import GridSpec, grid_search
from .models import ModelSpec, predict_model, train_model
from .seeding import derive_seed

SCENARIO_KINDS = ("HTC", "HIC", "HICVS-small", "HICVS-large")
SELECTOR_KINDS = ("GA", "GS")

FRAME_SCENE = "F"
COMPARISON_SCENE = "E"

# Per-kind defaults: training-pool quota per class per Frame image, and
# the fold count used during model selection.
_POOL_DEFAULTS = {"HIC": 250, "HICVS-small": 250, "HICVS-large": 2068}
_FOLD_DEFAULTS = {"HTC": 10, "HIC": 10, "HICVS-small": 10, "HICVS-large": 5}

REPORT_HEADER = "scenario,selector,classifier,day,accuracy_mean,accuracy_std,band_count"


class ScenarioError(Exception):
    """A plan cannot be built or a run request is inconsistent."""


def accuracy(predictions: npt.NDArray, truth: npt.NDArray) -> float:
    """Fraction of matching labels, as a percentage."""
    predictions = np.asarray(predictions)
    truth = np.asarray(truth)
    if predictions.shape != truth.shape:
        raise ScenarioError(
            f"predictions shape {predictions.shape} != truth shape {truth.shape}"
        )
    if predictions.size == 0:
        raise ScenarioError("accuracy of an empty prediction set is undefined")
    # Plain-definition order (100 * hits / n) so results are bit-identical
    # to an elementwise tally, not merely close to one.
    return 100.0 * int(np.count_nonzero(predictions == truth)) / predictions.size


def cv_accuracy(fold_accuracies: Sequence[float]) -> float:
    """Unweighted mean of per-fold accuracies."""
    if len(fold_accuracies) == 0:
        raise ScenarioError("cv_accuracy needs at least one fold")
    # Sequential sum keeps the result equal to the plain running-total mean.
    return sum(map(float, fold_accuracies)) / len(fold_accuracies)


def _check_indices(name: str, arr: npt.NDArray[np.int64]) -> npt.NDArray[np.int64]:
    out = np.asarray(arr, dtype=np.int64)
    if out.ndim != 1 or out.size == 0:
        raise ScenarioError(f"{name} indices must be a non-empty 1-d array")
    if np.unique(out).size != out.size:
        raise ScenarioError(f"{name} indices contain duplicates")
    return out


@dataclass(frozen=True)
class FoldPlan:
    """Row-index layout for one repetition of a scenario.

    ``folds`` holds (train, evaluation) index pairs used during model
    selection; ``pool`` is the full training pool the final model is fit
    on, and ``test`` the rows the final model is scored on.  All indices
    refer to rows of one :class:`~hsiband.data.LabeledDataset`.  When
    ``subsample_per_class`` is set, each fitness evaluation retrains on a
    fresh per-class subsample of the fold's train side rather than the
    whole fold.
    """

    scenario: str
    pool: npt.NDArray[np.int64]
    folds: tuple[tuple[npt.NDArray[np.int64], npt.NDArray[np.int64]], ...]
    test: npt.NDArray[np.int64]
    validation: npt.NDArray[np.int64] | None = None
    subsample_per_class: int | None = None
    repetitions: int = 5

    def __post_init__(self) -> None:
        if self.scenario not in SCENARIO_KINDS:
            raise ScenarioError(
                f"unknown scenario {self.scenario!r}; expected one of {SCENARIO_KINDS}"
            )
        pool = _check_indices("pool", self.pool)
        test = _check_indices("test", self.test)
        object.__setattr__(self, "pool", pool)
        object.__setattr__(self, "test", test)
        if np.intersect1d(pool, test).size:
            raise ScenarioError("pool and test indices overlap")
        if self.validation is not None:
            val = _check_indices("validation", self.validation)
            object.__setattr__(self, "validation", val)
            if np.intersect1d(val, test).size:
                raise ScenarioError("validation and test indices overlap")
            if np.intersect1d(val, pool).size:
                raise ScenarioError("validation and pool indices overlap")
        if not self.folds:
            raise ScenarioError("plan has no folds")
        checked = []
        for i, (train, evaluate) in enumerate(self.folds):
            train = _check_indices(f"fold {i} train", train)
            evaluate = _check_indices(f"fold {i} evaluation", evaluate)
            if np.intersect1d(train, evaluate).size:
                raise ScenarioError(f"fold {i} train and evaluation overlap")
            if self.validation is not None:
                if np.setdiff1d(evaluate, self.validation).size:
                    raise ScenarioError(
                        f"fold {i} evaluates outside the validation set"
                    )
            checked.append((train, evaluate))
        object.__setattr__(self, "folds", tuple(checked))
        if self.subsample_per_class is not None and self.subsample_per_class < 1:
            raise ScenarioError(
                f"subsample_per_class must be >= 1, got {self.subsample_per_class}"
            )
        if self.repetitions < 1:
            raise ScenarioError(f"repetitions must be >= 1, got {self.repetitions}")

    @property
    def fold_count(self) -> int:
        return len(self.folds)


@dataclass(frozen=True)
class ScenarioConfig:
    """Parameters for building one scenario's fold plans.

    ``quota`` applies to HTC (rows per class per image; ``None`` means
    the largest feasible quota, i.e. the smallest class-image group).
    ``pool_per_class`` applies to HIC/HICVS (rows per class per Frame
    image) and ``folds`` to all kinds; ``None`` picks the kind default.
    """

    kind: str
    quota: int | None = None
    pool_per_class: int | None = None
    folds: int | None = None
    subsample_per_class: int = 10
    inverted: bool = True
    test_fraction: float = 0.8
    repetitions: int = 5

    def __post_init__(self) -> None:
        if self.kind not in SCENARIO_KINDS:
            raise ScenarioError(
                f"unknown scenario {self.kind!r}; expected one of {SCENARIO_KINDS}"
            )
        if self.quota is not None and self.quota < 1:
            raise ScenarioError(f"quota must be >= 1, got {self.quota}")
        if self.pool_per_class is not None and self.pool_per_class < 1:
            raise ScenarioError(
                f"pool_per_class must be >= 1, got {self.pool_per_class}"
            )
        if self.folds is not None and self.folds < 2:
            raise ScenarioError(f"fold count must be >= 2, got {self.folds}")
        if self.subsample_per_class < 1:
            raise ScenarioError(
                f"subsample_per_class must be >= 1, got {self.subsample_per_class}"
            )
        if not 0.0 < self.test_fraction < 1.0:
            raise ScenarioError(
                f"test_fraction must lie in (0, 1), got {self.test_fraction}"
            )
        if self.repetitions < 1:
            raise ScenarioError(f"repetitions must be >= 1, got {self.repetitions}")

    @property
    def fold_count(self) -> int:
        return _FOLD_DEFAULTS[self.kind] if self.folds is None else self.folds

    @property
    def pool_quota(self) -> int:
        if self.kind == "HTC":
            raise ScenarioError("HTC plans use 'quota', not 'pool_per_class'")
        default = _POOL_DEFAULTS[self.kind]
        return default if self.pool_per_class is None else self.pool_per_class


def _pool_folds(
    dataset: LabeledDataset, pool: npt.NDArray[np.int64], k: int, seed: int
) -> list[npt.NDArray[np.int64]]:
    """Split pool rows into k class-balanced folds of absolute indices."""
    local = stratified_folds(dataset.labels[pool], k, seed)
    return [pool[f] for f in local]


def build_htc_plan(
    dataset: LabeledDataset,
    seed: int,
    quota: int | None = None,
    folds: int = 10,
    repetitions: int = 5,
) -> FoldPlan:
    """Train across all images, test on the held-out pixels.

    The training pool draws ``quota`` rows from every class-image group;
    model selection runs conventional k-fold cross-validation inside the
    pool, and the final test covers every remaining labelled pixel.
    """
    if quota is None:
        groups = group_indices(dataset, by="class-image")
        quota = min(rows.size for rows in groups.values())
    split = stratified_sample(
        dataset, quota, by="class-image", seed=derive_seed(seed, "htc-sample")
    )
    pool = split.train
    fold_parts = _pool_folds(dataset, pool, folds, derive_seed(seed, "htc-folds"))
    pairs = tuple(
        (np.setdiff1d(pool, part), part) for part in fold_parts
    )
    return FoldPlan(
        scenario="HTC",
        pool=pool,
        folds=pairs,
        test=split.test,
        repetitions=repetitions,
    )


def _scene_rows(dataset: LabeledDataset, scene: str) -> npt.NDArray[np.int64]:
    rows = np.flatnonzero(dataset.scenes == scene)
    if rows.size == 0:
        raise ScenarioError(f"dataset has no scene {scene!r} pixels")
    return rows


def build_hic_plan(
    dataset: LabeledDataset,
    seed: int,
    pool_per_class: int = 250,
    folds: int = 10,
    subsample_per_class: int = 10,
    inverted: bool = True,
    repetitions: int = 5,
) -> FoldPlan:
    """Train on Frame-scene pixels only, test on every Comparison pixel.

    The pool draws ``pool_per_class`` rows per class from each Frame
    image.  Inverted model selection trains each iteration on a fresh
    ``subsample_per_class``-per-class draw from a single fold and
    evaluates on the other folds; the conventional flag flips this back
    to ordinary cross-validation.
    """
    frame = _scene_rows(dataset, FRAME_SCENE)
    comparison = _scene_rows(dataset, COMPARISON_SCENE)
    split = stratified_sample(
        dataset,
        pool_per_class,
        by="class-image",
        seed=derive_seed(seed, "hic-sample"),
        restrict_to=frame,
    )
    pool = split.train
    fold_parts = _pool_folds(dataset, pool, folds, derive_seed(seed, "hic-folds"))
    if inverted:
        for i, part in enumerate(fold_parts):
            counts = np.unique(dataset.labels[part], return_counts=True)[1]
            if counts.min() < subsample_per_class or counts.size < len(
                np.unique(dataset.labels[pool])
            ):
                raise ScenarioError(
                    f"fold {i} cannot supply {subsample_per_class} rows of every class"
                )
        pairs = tuple((part, np.setdiff1d(pool, part)) for part in fold_parts)
    else:
        pairs = tuple((np.setdiff1d(pool, part), part) for part in fold_parts)
    return FoldPlan(
        scenario="HIC",
        pool=pool,
        folds=pairs,
        test=comparison,
        subsample_per_class=subsample_per_class if inverted else None,
        repetitions=repetitions,
    )


def _split_comparison(
    dataset: LabeledDataset,
    comparison: npt.NDArray[np.int64],
    test_fraction: float,
    seed: int,
) -> tuple[npt.NDArray[np.int64], npt.NDArray[np.int64]]:
    """Split Comparison rows into test/validation, stratified per class and day."""
    view = dataset.subset(comparison)
    rng = np.random.default_rng(seed)
    test_parts: list[npt.NDArray[np.int64]] = []
    val_parts: list[npt.NDArray[np.int64]] = []
    for key, rows in group_indices(view, by="class-image").items():
        order = rng.permutation(rows.size)
        n_test = int(round(rows.size * test_fraction))
        if not 0 < n_test < rows.size:
            raise ScenarioError(
                f"group {key} with {rows.size} rows cannot be split "
                f"{test_fraction:.0%}/{1 - test_fraction:.0%}"
            )
        test_parts.append(comparison[rows[order[:n_test]]])
        val_parts.append(comparison[rows[order[n_test:]]])
    return (
        np.sort(np.concatenate(test_parts)),
        np.sort(np.concatenate(val_parts)),
    )


def build_hicvs_plan(
    dataset: LabeledDataset,
    variant: str,
    seed: int,
    pool_per_class: int | None = None,
    folds: int | None = None,
    test_fraction: float = 0.8,
    repetitions: int = 5,
) -> FoldPlan:
    """Like HIC, but model selection scores on held-out Comparison pixels.

    Comparison pixels are split into a test partition and a validation
    partition, stratified by class and day.  Every selection iteration
    trains on all folds but one and evaluates on the validation set; the
    final model trains on the whole pool and is tested on the test
    partition only.
    """
    if variant not in ("small", "large"):
        raise ScenarioError(f"unknown variant {variant!r}; expected 'small' or 'large'")
    kind = f"HICVS-{variant}"
    if pool_per_class is None:
        pool_per_class = _POOL_DEFAULTS[kind]
    if folds is None:
        folds = _FOLD_DEFAULTS[kind]
    frame = _scene_rows(dataset, FRAME_SCENE)
    comparison = _scene_rows(dataset, COMPARISON_SCENE)
    test, validation = _split_comparison(
        dataset, comparison, test_fraction, derive_seed(seed, "hicvs-split")
    )
    split = stratified_sample(
        dataset,
        pool_per_class,
        by="class-image",
        seed=derive_seed(seed, "hicvs-sample"),
        restrict_to=frame,
    )
    pool = split.train
    fold_parts = _pool_folds(dataset, pool, folds, derive_seed(seed, "hicvs-folds"))
    pairs = tuple((np.setdiff1d(pool, part), validation) for part in fold_parts)
    return FoldPlan(
        scenario=kind,
        pool=pool,
        folds=pairs,
        test=test,
        validation=validation,
        repetitions=repetitions,
    )


def build_plan(dataset: LabeledDataset, config: ScenarioConfig, seed: int) -> FoldPlan:
    """Build one repetition's fold plan for the configured scenario."""
    if config.kind == "HTC":
        return build_htc_plan(
            dataset,
            seed,
            quota=config.quota,
            folds=config.fold_count,
            repetitions=config.repetitions,
        )
    if config.kind == "HIC":
        return build_hic_plan(
            dataset,
            seed,
            pool_per_class=config.pool_quota,
            folds=config.fold_count,
            subsample_per_class=config.subsample_per_class,
            inverted=config.inverted,
            repetitions=config.repetitions,
        )
    variant = config.kind.split("-", 1)[1]
    return build_hicvs_plan(
        dataset,
        variant,
        seed,
        pool_per_class=config.pool_quota,
        folds=config.fold_count,
        test_fraction=config.test_fraction,
        repetitions=config.repetitions,
    )


def _subsample_per_class(
    labels: npt.NDArray[np.int64],
    rows: npt.NDArray[np.int64],
    per_class: int,
    seed: int,
) -> npt.NDArray[np.int64]:
    """Draw per_class rows of every class present in rows, sorted."""
    rng = np.random.default_rng(seed)
    picked: list[npt.NDArray[np.int64]] = []
    for cls in np.unique(labels[rows]):
        members = rows[labels[rows] == cls]
        if members.size < per_class:
            raise ScenarioError(
                f"class {int(cls)} has {members.size} rows; subsample needs {per_class}"
            )
        order = rng.permutation(members.size)
        picked.append(members[order[:per_class]])
    return np.sort(np.concatenate(picked))


@dataclass(frozen=True, eq=False)
class PlanFitness:
    """Picklable fitness callable scoring a candidate against a plan.

    Holds only the rows the plan's folds touch (remapped to a compact
    table) so parallel fitness workers receive small payloads.  Each call
    retrains per fold; with ``subsample_per_class`` set, the fold's
    train side is re-drawn per call from the call's seed, so repeated
    evaluations of one candidate see fresh subsamples deterministically.
    """

    spectra: npt.NDArray[np.float64]
    labels: npt.NDArray[np.int64]
    folds: tuple[tuple[npt.NDArray[np.int64], npt.NDArray[np.int64]], ...]
    subsample_per_class: int | None = None

    def __call__(self, model_spec: ModelSpec, seed: int) -> float:
        per_fold = []
        for j, (train, evaluate) in enumerate(self.folds):
            if self.subsample_per_class is not None:
                train = _subsample_per_class(
                    self.labels,
                    train,
                    self.subsample_per_class,
                    derive_seed(seed, "subsample", j),
                )
            model = train_model(
                model_spec,
                self.spectra[train],
                self.labels[train],
                seed=derive_seed(seed, "train", j),
            )
            predictions = predict_model(model, self.spectra[evaluate])
            per_fold.append(accuracy(predictions, self.labels[evaluate]))
        return cv_accuracy(per_fold)


def plan_fitness(dataset: LabeledDataset, plan: FoldPlan) -> PlanFitness:
    """Compile a plan's selection folds into a compact fitness callable."""
    used = np.unique(np.concatenate([np.concatenate(pair) for pair in plan.folds]))
    remapped = tuple(
        (np.searchsorted(used, train), np.searchsorted(used, evaluate))
        for train, evaluate in plan.folds
    )
    return PlanFitness(
        spectra=dataset.spectra[used],
        labels=dataset.labels[used],
        folds=remapped,
        subsample_per_class=plan.subsample_per_class,
    )


@dataclass(frozen=True)
class SelectionMethod:
    """Model-selection strategy: genetic search or grid search.

    The genetic selector optimizes the nu-SVM family only (its search
    space is nu-SVM hyperparameters plus a band mask), so requesting any
    other classifier with it is rejected.
    """

    selector: str
    ga: GaConfig | None = None
    grid: GridSpec | None = None

    def __post_init__(self) -> None:
        if self.selector not in SELECTOR_KINDS:
            raise ScenarioError(
                f"unknown selector {self.selector!r}; expected one of {SELECTOR_KINDS}"
            )
        if self.selector == "GA":
            if self.ga is None:
                raise ScenarioError("GA selection needs a GaConfig")
            if self.grid is not None:
                raise ScenarioError(
                    "GA selection searches nu-svm hyperparameters only "
                    "and cannot take a classifier grid"
                )
        else:
            if self.grid is None:
                raise ScenarioError("GS selection needs a GridSpec")
            if self.ga is not None:
                raise ScenarioError("GS selection cannot take a GaConfig")

    @property
    def classifier(self) -> str:
        return "nu-svm" if self.selector == "GA" else self.grid.classifier


@dataclass(frozen=True)
class RepetitionResult:
    """Outcome of one sample/select/train/test cycle."""

    best: ModelSpec
    selection_fitness: float
    days: tuple[str, ...]
    day_accuracy: npt.NDArray[np.float64]
    day_counts: npt.NDArray[np.int64]
    combined_accuracy: float
    band_count: int
    ga_history: GaHistory | None = None


@dataclass(frozen=True)
class EvaluationReport:
    """Aggregated scenario outcome over all repetitions.

    Per-day rows cover the reporting days present in the test partition;
    ``combined`` aggregates those same rows, so it is the test-size
    weighted mean of the per-day accuracies.  Standard deviations are
    population standard deviations over repetitions.
    """

    scenario: str
    selector: str
    classifier: str
    days: tuple[str, ...]
    day_mean: npt.NDArray[np.float64]
    day_std: npt.NDArray[np.float64]
    combined_mean: float
    combined_std: float
    band_count: int
    best: ModelSpec
    repetitions: tuple[RepetitionResult, ...]

    def __post_init__(self) -> None:
        if len(self.days) != len(self.day_mean) or len(self.days) != len(self.day_std):
            raise ScenarioError("per-day arrays do not align with the day list")
        if np.any(self.day_std < 0) or self.combined_std < 0:
            raise ScenarioError("standard deviations must be non-negative")


def _score_repetition(
    dataset: LabeledDataset,
    plan: FoldPlan,
    best: ModelSpec,
    fitness_value: float,
    band_count: int,
    history: GaHistory | None,
    seed: int,
) -> RepetitionResult:
    model = train_model(
        best, dataset.spectra[plan.pool], dataset.labels[plan.pool], seed=seed
    )
    test_days = dataset.days[plan.test]
    days = tuple(d for d in REPORT_DAYS if np.any(test_days == d))
    if not days:
        raise ScenarioError("test partition holds no reporting-day pixels")
    kept = plan.test[np.isin(test_days, days)]
    predictions = predict_model(model, dataset.spectra[kept])
    truth = dataset.labels[kept]
    row_days = dataset.days[kept]
    day_acc = []
    day_counts = []
    for day in days:
        member = row_days == day
        day_acc.append(accuracy(predictions[member], truth[member]))
        day_counts.append(int(member.sum()))
    return RepetitionResult(
        best=best,
        selection_fitness=fitness_value,
        days=days,
        day_accuracy=np.asarray(day_acc, dtype=np.float64),
        day_counts=np.asarray(day_counts, dtype=np.int64),
        combined_accuracy=accuracy(predictions, truth),
        band_count=band_count,
        ga_history=history,
    )


def run_scenario(
    dataset: LabeledDataset,
    config: ScenarioConfig,
    method: SelectionMethod,
    seed: int = 0,
    workers: int = 1,
) -> EvaluationReport:
    """Run the full scenario: repeated sample, select, train, and test.

    Every repetition rebuilds the fold plan from a derived seed, runs
    model selection against it, trains the winning model on the whole
    pool, and scores the test partition per day.  Aggregates are means
    and population standard deviations over repetitions; the reported
    model is the winner of the best-scoring repetition (earliest on
    ties).
    """
    if method.selector == "GA" and method.ga.n_bands != dataset.n_features:
        raise ScenarioError(
            f"GA is configured for {method.ga.n_bands} bands but the dataset "
            f"has {dataset.n_features} features"
        )
    results: list[RepetitionResult] = []
    for rep in range(config.repetitions):
        plan = build_plan(dataset, config, derive_seed(seed, "plan", rep))
        fitness = plan_fitness(dataset, plan)
        select_seed = derive_seed(seed, "select", rep)
        if method.selector == "GA":
            ga_result = ga_optimize(
                replace(method.ga, seed=select_seed), fitness, workers=workers
            )
            best = decode(ga_result.best)
            fitness_value = ga_result.best_fitness
            band_count = best.band_count
            history: GaHistory | None = ga_result.history
        else:
            grid_result = grid_search(
                method.grid, fitness, seed=select_seed, workers=workers
            )
            best = grid_result.best
            fitness_value = grid_result.best_fitness
            band_count = dataset.n_features
            history = None
        results.append(
            _score_repetition(
                dataset,
                plan,
                best,
                fitness_value,
                band_count,
                history,
                derive_seed(seed, "final", rep),
            )
        )
    days = results[0].days
    if any(r.days != days for r in results):
        raise ScenarioError("repetitions disagree on reporting days")
    day_matrix = np.stack([r.day_accuracy for r in results])
    combined = np.asarray([r.combined_accuracy for r in results])
    winner = max(range(len(results)), key=lambda i: (combined[i], -i))
    return EvaluationReport(
        scenario=config.kind,
        selector=method.selector,
        classifier=method.classifier,
        days=days,
        day_mean=day_matrix.mean(axis=0),
        day_std=day_matrix.std(axis=0),
        combined_mean=float(combined.mean()),
        combined_std=float(combined.std()),
        band_count=results[winner].band_count,
        best=results[winner].best,
        repetitions=tuple(results),
    )


def report_rows(report: EvaluationReport) -> list[str]:
    """CSV rows: one per reporting day plus a combined row."""
    rows = []
    for day, mean, std in zip(report.days, report.day_mean, report.day_std):
        rows.append(
            f"{report.scenario},{report.selector},{report.classifier},"
            f"{day},{float(mean)!r},{float(std)!r},{report.band_count}"
        )
    rows.append(
        f"{report.scenario},{report.selector},{report.classifier},"
        f"combined,{float(report.combined_mean)!r},"
        f"{float(report.combined_std)!r},{report.band_count}"
    )
    return rows


def write_reports(reports: Sequence[EvaluationReport], path: str | Path) -> None:
    """Write one or more reports to a single CSV file."""
    lines = [REPORT_HEADER]
    for report in reports:
        lines.extend(report_rows(report))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def format_report(report: EvaluationReport) -> str:
    """Human-readable accuracy table for one report."""
    title = (
        f"{report.scenario} / {report.selector} / {report.classifier} "
        f"({report.band_count} bands)"
    )
    lines = [title, "-" * len(title)]
    for day, mean, std in zip(report.days, report.day_mean, report.day_std):
        lines.append(f"  day {day:>3}: {mean:6.2f} +/- {std:.2f}")
    lines.append(
        f"  combined: {report.combined_mean:6.2f} +/- {report.combined_std:.2f}"
    )
    return "\n".join(lines)
