"""Genetic search over kernel hyperparameters and spectral-band subsets.

A chromosome couples five model genes (kernel id, nu, gamma, degree,
coef0) with one selection bit per band.  Evolution uses tournament
selection, uniform or one-point crossover, single-gene mutation, and
elitism, with all randomness drawn from one master generator so runs are
reproducible regardless of how many fitness workers evaluate in parallel.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np
import numpy.typing as npt

from .kernels import KernelSpec
from .models import ModelSpec
from .seeding import derive_seed
from .svm import SvmSpec

GA_KERNELS = ("rbf", "polynomial", "sigmoid")
NU_RANGE = (0.001, 0.4)
DEGREE_RANGE = (1, 5)
GAMMA_RANGE = (0.001, 5.0)
COEF0_RANGE = (0.01, 10.0)
N_MODEL_GENES = 5  # kernel, nu, gamma, degree, coef0

CROSSOVER_KINDS = ("uniform", "one-point")
MUTATION_MODES = ("individual", "gene")

# fitness(model_spec, seed) -> accuracy percentage; must be pure given the seed
FitnessFn = Callable[[ModelSpec, int], float]


class FitnessError(RuntimeError):
    """A fitness evaluation raised; carries the individual's identity."""


@dataclass(frozen=True, eq=False)
class Chromosome:
    kernel: str
    nu: float
    gamma: float
    degree: int
    coef0: float
    bands: npt.NDArray[np.bool_]

    def __post_init__(self) -> None:
        if self.kernel not in GA_KERNELS:
            raise ValueError(f"kernel gene must be one of {GA_KERNELS}, got {self.kernel!r}")
        if not NU_RANGE[0] <= self.nu <= NU_RANGE[1]:
            raise ValueError(f"nu gene {self.nu} outside {NU_RANGE}")
        if not GAMMA_RANGE[0] <= self.gamma <= GAMMA_RANGE[1]:
            raise ValueError(f"gamma gene {self.gamma} outside {GAMMA_RANGE}")
        if not DEGREE_RANGE[0] <= self.degree <= DEGREE_RANGE[1]:
            raise ValueError(f"degree gene {self.degree} outside {DEGREE_RANGE}")
        if not COEF0_RANGE[0] <= self.coef0 <= COEF0_RANGE[1]:
            raise ValueError(f"coef0 gene {self.coef0} outside {COEF0_RANGE}")
        mask = np.asarray(self.bands, dtype=bool)
        if mask.ndim != 1 or mask.size < 1:
            raise ValueError(f"band genes must form a 1-D mask, got shape {mask.shape}")
        object.__setattr__(self, "bands", mask)

    @property
    def n_genes(self) -> int:
        return N_MODEL_GENES + self.bands.size

    @property
    def band_count(self) -> int:
        return int(self.bands.sum())

    def key(self) -> tuple:
        """Hashable identity used by tests and tie bookkeeping."""
        return (self.kernel, self.nu, self.gamma, self.degree, self.coef0,
                self.bands.tobytes())


@dataclass(frozen=True)
class GaConfig:
    n_bands: int = 113
    population: int = 200
    epochs: int = 100
    tournament: int = 3
    crossover_kind: str = "uniform"
    crossover_prob: float = 0.8
    mutation_prob: float = 0.8
    mutation_mode: str = "individual"  # one gene per hit, or every gene independently
    elite: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_bands < 1:
            raise ValueError(f"n_bands must be >= 1, got {self.n_bands}")
        if self.population < 2:
            raise ValueError(f"population must be >= 2, got {self.population}")
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.tournament < 1:
            raise ValueError(f"tournament size must be >= 1, got {self.tournament}")
        if self.crossover_kind not in CROSSOVER_KINDS:
            raise ValueError(
                f"crossover kind must be one of {CROSSOVER_KINDS}, got {self.crossover_kind!r}"
            )
        if self.mutation_mode not in MUTATION_MODES:
            raise ValueError(
                f"mutation mode must be one of {MUTATION_MODES}, got {self.mutation_mode!r}"
            )
        for name, p in (("crossover", self.crossover_prob), ("mutation", self.mutation_prob)):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} probability must lie in [0, 1], got {p}")
        if not 0 <= self.elite < self.population:
            raise ValueError(
                f"elite count must lie in [0, population), got {self.elite}"
            )


@dataclass(frozen=True)
class GaHistory:
    epoch: npt.NDArray[np.int64]
    best: npt.NDArray[np.float64]  # best-ever fitness after each epoch
    mean: npt.NDArray[np.float64]  # mean fitness of that epoch's population
    best_band_count: npt.NDArray[np.int64]


@dataclass(frozen=True)
class GaResult:
    best: Chromosome
    best_fitness: float
    history: GaHistory
    n_evaluations: int


def decode(chromosome: Chromosome) -> ModelSpec:
    """Chromosome -> trainable configuration (always a nu-SVM)."""
    kernel = KernelSpec(
        kind=chromosome.kernel,
        gamma=chromosome.gamma,
        coef0=chromosome.coef0,
        degree=chromosome.degree,
    )
    return ModelSpec(
        spec=SvmSpec(family="nu-svm", kernel=kernel, nu=chromosome.nu),
        bands=chromosome.bands,
    )


def selected_bands(chromosome: Chromosome) -> npt.NDArray[np.int64]:
    return np.flatnonzero(chromosome.bands)


def random_chromosome(rng: np.random.Generator, n_bands: int) -> Chromosome:
    """Parameter genes uniform in range; band bits set with probability 1/2."""
    chromosome = Chromosome(
        kernel=GA_KERNELS[int(rng.integers(len(GA_KERNELS)))],
        nu=float(rng.uniform(*NU_RANGE)),
        gamma=float(rng.uniform(*GAMMA_RANGE)),
        degree=int(rng.integers(DEGREE_RANGE[0], DEGREE_RANGE[1] + 1)),
        coef0=float(rng.uniform(*COEF0_RANGE)),
        bands=rng.random(n_bands) < 0.5,
    )
    return repair(chromosome, rng)


def repair(chromosome: Chromosome, rng: np.random.Generator) -> Chromosome:
    """Set one uniformly chosen band bit if the mask came out empty."""
    if chromosome.bands.any():
        return chromosome
    mask = chromosome.bands.copy()
    mask[int(rng.integers(mask.size))] = True
    return _with_bands(chromosome, mask)


def _with_bands(chromosome: Chromosome, mask: np.ndarray) -> Chromosome:
    return Chromosome(
        kernel=chromosome.kernel, nu=chromosome.nu, gamma=chromosome.gamma,
        degree=chromosome.degree, coef0=chromosome.coef0, bands=mask,
    )


def _redrawn_model_gene(chromosome: Chromosome, pos: int, rng: np.random.Generator) -> Chromosome:
    fields = dict(
        kernel=chromosome.kernel, nu=chromosome.nu, gamma=chromosome.gamma,
        degree=chromosome.degree, coef0=chromosome.coef0, bands=chromosome.bands,
    )
    if pos == 0:
        fields["kernel"] = GA_KERNELS[int(rng.integers(len(GA_KERNELS)))]
    elif pos == 1:
        fields["nu"] = float(rng.uniform(*NU_RANGE))
    elif pos == 2:
        fields["gamma"] = float(rng.uniform(*GAMMA_RANGE))
    elif pos == 3:
        fields["degree"] = int(rng.integers(DEGREE_RANGE[0], DEGREE_RANGE[1] + 1))
    else:
        fields["coef0"] = float(rng.uniform(*COEF0_RANGE))
    return Chromosome(**fields)


def mutate(chromosome: Chromosome, rng: np.random.Generator) -> Chromosome:
    """Alter exactly one uniformly chosen gene.

    Parameter genes are redrawn from their range; a band gene flips its
    bit.  An emptied mask is repaired by setting one random bit.
    """
    pos = int(rng.integers(chromosome.n_genes))
    if pos < N_MODEL_GENES:
        return _redrawn_model_gene(chromosome, pos, rng)
    mask = chromosome.bands.copy()
    bit = pos - N_MODEL_GENES
    mask[bit] = not mask[bit]
    return repair(_with_bands(chromosome, mask), rng)


def mutate_genes(chromosome: Chromosome, rng: np.random.Generator, prob: float) -> Chromosome:
    """Per-gene variant: every gene mutates independently with the given probability."""
    hits = rng.random(chromosome.n_genes) < prob
    out = chromosome
    for pos in np.flatnonzero(hits[:N_MODEL_GENES]):
        out = _redrawn_model_gene(out, int(pos), rng)
    band_hits = hits[N_MODEL_GENES:]
    if band_hits.any():
        out = _with_bands(out, np.logical_xor(out.bands, band_hits))
    return repair(out, rng)


def _gene_list(chromosome: Chromosome) -> list:
    return [chromosome.kernel, chromosome.nu, chromosome.gamma, chromosome.degree,
            chromosome.coef0, *chromosome.bands.tolist()]


def _from_gene_list(genes: list) -> Chromosome:
    return Chromosome(
        kernel=genes[0], nu=genes[1], gamma=genes[2], degree=genes[3], coef0=genes[4],
        bands=np.array(genes[N_MODEL_GENES:], dtype=bool),
    )


def crossover(
    a: Chromosome, b: Chromosome, kind: str, rng: np.random.Generator
) -> tuple[Chromosome, Chromosome]:
    """Swap genes between two parents; per-position multisets are conserved.

    uniform: each position swaps independently with probability 1/2.
    one-point: all positions at or beyond a uniformly drawn cut swap.
    Children may carry an empty band mask; callers repair before use.
    """
    if kind not in CROSSOVER_KINDS:
        raise ValueError(f"crossover kind must be one of {CROSSOVER_KINDS}, got {kind!r}")
    if a.n_genes != b.n_genes:
        raise ValueError(f"gene counts differ: {a.n_genes} vs {b.n_genes}")
    ga, gb = _gene_list(a), _gene_list(b)
    if kind == "uniform":
        swap = rng.random(len(ga)) < 0.5
    else:
        cut = int(rng.integers(len(ga)))
        swap = np.arange(len(ga)) >= cut
    for pos in np.flatnonzero(swap):
        ga[pos], gb[pos] = gb[pos], ga[pos]
    return _from_gene_list(ga), _from_gene_list(gb)


def _tournament(rng: np.random.Generator, fits: list[float], size: int) -> int:
    contestants = rng.integers(0, len(fits), size=size)
    winner = int(contestants[0])
    for c in contestants[1:]:
        if fits[int(c)] > fits[winner]:
            winner = int(c)
    return winner


def map_fitness(
    fitness: FitnessFn,
    jobs: list[tuple[ModelSpec, int]],
    workers: int = 1,
    label: str = "",
) -> list[float]:
    """Evaluate jobs in submission order; failures carry the job identity.

    With several workers the evaluations run in separate processes, so
    the fitness callable and its captured state must be picklable.
    """
    where = f" of {label}" if label else ""
    if workers <= 1:
        out = []
        for i, (model_spec, seed) in enumerate(jobs):
            try:
                out.append(float(fitness(model_spec, seed)))
            except Exception as exc:
                raise FitnessError(f"fitness failed for individual {i}{where}: {exc}") from exc
        return out
    results: list[float] = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fitness, model_spec, seed) for model_spec, seed in jobs]
        for i, future in enumerate(futures):
            try:
                results.append(float(future.result()))
            except Exception as exc:
                raise FitnessError(f"fitness failed for individual {i}{where}: {exc}") from exc
    return results


def ga_optimize(config: GaConfig, fitness: FitnessFn, workers: int = 1) -> GaResult:
    """Evolve the population and return the best individual ever evaluated.

    Per epoch: evaluate the population (each individual gets a seed
    derived from master seed, epoch, and index), copy the elite, then
    fill the next generation from tournament winners passed through
    crossover and mutation, each applied with its configured probability.
    History rows track the running best, so the best column never decreases.
    """
    rng = np.random.default_rng(config.seed)
    population = [random_chromosome(rng, config.n_bands) for _ in range(config.population)]
    best_chrom: Chromosome | None = None
    best_fit = -np.inf
    epochs_idx = np.arange(config.epochs, dtype=np.int64)
    best_hist = np.empty(config.epochs)
    mean_hist = np.empty(config.epochs)
    band_hist = np.empty(config.epochs, dtype=np.int64)
    n_evaluations = 0

    for epoch in range(config.epochs):
        jobs = [
            (decode(ch), derive_seed(config.seed, "fitness", epoch, i))
            for i, ch in enumerate(population)
        ]
        fits = map_fitness(fitness, jobs, workers=workers, label=f"epoch {epoch}")
        n_evaluations += len(fits)
        for i, fit in enumerate(fits):
            if fit > best_fit:
                best_fit = fit
                best_chrom = population[i]
        best_hist[epoch] = best_fit
        mean_hist[epoch] = sum(fits) / len(fits)
        band_hist[epoch] = best_chrom.band_count  # type: ignore[union-attr]
        if epoch == config.epochs - 1:
            break

        order = sorted(range(len(population)), key=lambda i: (-fits[i], i))
        next_population = [population[i] for i in order[: config.elite]]
        while len(next_population) < config.population:
            pa = population[_tournament(rng, fits, config.tournament)]
            pb = population[_tournament(rng, fits, config.tournament)]
            if rng.random() < config.crossover_prob:
                pa, pb = crossover(pa, pb, config.crossover_kind, rng)
            for child in (pa, pb):
                if config.mutation_mode == "individual":
                    if rng.random() < config.mutation_prob:
                        child = mutate(child, rng)
                else:
                    child = mutate_genes(child, rng, config.mutation_prob)
                next_population.append(repair(child, rng))
                if len(next_population) == config.population:
                    break
        population = next_population

    assert best_chrom is not None
    history = GaHistory(
        epoch=epochs_idx, best=best_hist, mean=mean_hist, best_band_count=band_hist
    )
    return GaResult(
        best=best_chrom, best_fitness=best_fit, history=history,
        n_evaluations=n_evaluations,
    )


def write_history(history: GaHistory, path: str | Path) -> None:
    """One CSV row per epoch."""
    lines = ["epoch,best_accuracy,mean_accuracy,best_band_count"]
    for e, b, m, k in zip(history.epoch, history.best, history.mean,
                          history.best_band_count):
        lines.append(f"{int(e)},{float(b)!r},{float(m)!r},{int(k)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
