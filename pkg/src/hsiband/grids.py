"""Exhaustive grid-search baselines over discrete hyperparameter grids.

Each classifier family gets a GridSpec: an ordered tuple of named axes
whose cartesian product (row-major, last axis fastest) enumerates every
candidate configuration.  Scale parameters use log-spaced points, linear
axes use the published discrete values.  The search trains on the full
feature set — band selection is the genetic optimizer's job.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np
import numpy.typing as npt

from .ga import FitnessFn, map_fitness
from .kernels import KernelSpec
from .knn import KnnSpec
from .mlp import MlpSpec
from .models import ClassifierSpec, ModelSpec
from .seeding import derive_seed
from .svm import SvmSpec

GRID_CLASSIFIERS = ("c-svm", "linear-svm", "nu-svm", "knn", "mlp")

C_GRID = (0.001, 0.01, 0.1, 1.0, 10.0, 100.0, 1000.0)
NU_GRID = (0.001, 0.1, 0.2, 0.3, 0.4)
COEF0_GRID = (0.01, 0.1, 1.0, 5.0, 10.0)
# 7 log-spaced points across the gamma search range [0.001, 5].
GAMMA_GRID = tuple(float(g) for g in np.logspace(-3.0, math.log10(5.0), 7))
DEGREE_GRID = (1, 2, 3, 4, 5)
KERNEL_GRID = ("rbf", "polynomial", "sigmoid")


@dataclass(frozen=True)
class GridSpec:
    classifier: str
    axes: tuple[tuple[str, tuple], ...]

    def __post_init__(self) -> None:
        if self.classifier not in GRID_CLASSIFIERS:
            raise ValueError(
                f"classifier must be one of {GRID_CLASSIFIERS}, got {self.classifier!r}"
            )
        if not self.axes:
            raise ValueError("grid needs at least one axis")
        names = [name for name, _ in self.axes]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate axis names in {names}")
        for name, values in self.axes:
            if len(values) == 0:
                raise ValueError(f"axis {name!r} has no values")

    @property
    def size(self) -> int:
        return math.prod(len(values) for _, values in self.axes)


@dataclass(frozen=True)
class GridResult:
    best: ModelSpec
    best_fitness: float
    best_index: int
    fitnesses: npt.NDArray[np.float64]
    points: tuple[ClassifierSpec, ...]


def _build_c_svm(p: dict) -> ClassifierSpec:
    kernel = KernelSpec(kind=p["kernel"], gamma=p["gamma"], coef0=p["coef0"],
                        degree=p["degree"])
    return SvmSpec(family="c-svm", kernel=kernel, C=p["C"])


def _build_linear_svm(p: dict) -> ClassifierSpec:
    return SvmSpec(family="linear-svm", kernel=KernelSpec(kind="linear"),
                   C=p["C"], loss=p["loss"])


def _build_nu_svm(p: dict) -> ClassifierSpec:
    kernel = KernelSpec(kind=p["kernel"], gamma=p["gamma"], coef0=p["coef0"],
                        degree=p["degree"])
    return SvmSpec(family="nu-svm", kernel=kernel, nu=p["nu"])


def _build_knn(p: dict) -> ClassifierSpec:
    return KnnSpec(metric=p["metric"], weighting=p["weighting"], k=p["k"])


def _build_mlp(p: dict) -> ClassifierSpec:
    return MlpSpec(hidden=p["hidden"], dropout=p["dropout"],
                   learning_rate=p["learning_rate"], batch_size=p["batch_size"],
                   iterations=p["iterations"])


_BUILDERS = {
    "c-svm": _build_c_svm,
    "linear-svm": _build_linear_svm,
    "nu-svm": _build_nu_svm,
    "knn": _build_knn,
    "mlp": _build_mlp,
}


def grid_points(grid: GridSpec) -> list[ClassifierSpec]:
    """All configurations in deterministic row-major order."""
    build = _BUILDERS[grid.classifier]
    names = [name for name, _ in grid.axes]
    out = []
    for combo in product(*(values for _, values in grid.axes)):
        out.append(build(dict(zip(names, combo))))
    return out


def grid_search(
    grid: GridSpec, fitness: FitnessFn, seed: int = 0, workers: int = 1
) -> GridResult:
    """Evaluate every grid point; ties keep the earliest point.

    Every point is scored on the full feature set (bands=None) with a
    seed derived from the master seed and the point's enumeration index.
    """
    points = grid_points(grid)
    jobs = [
        (ModelSpec(spec=point), derive_seed(seed, "grid", i))
        for i, point in enumerate(points)
    ]
    fits = map_fitness(fitness, jobs, workers=workers, label=f"{grid.classifier} grid")
    best_index = 0
    for i in range(1, len(fits)):
        if fits[i] > fits[best_index]:
            best_index = i
    return GridResult(
        best=ModelSpec(spec=points[best_index]),
        best_fitness=fits[best_index],
        best_index=best_index,
        fitnesses=np.array(fits),
        points=tuple(points),
    )


def paper_grids() -> dict[str, GridSpec]:
    """Full-resolution grids for every classifier family."""
    mlp_hidden = ((1000,), (30, 30), (1000, 1000), (1000, 1000, 1000))
    return {
        "c-svm": GridSpec("c-svm", (
            ("kernel", KERNEL_GRID),
            ("C", C_GRID),
            ("degree", DEGREE_GRID),
            ("gamma", GAMMA_GRID),
            ("coef0", COEF0_GRID),
        )),
        "linear-svm": GridSpec("linear-svm", (
            ("loss", ("hinge", "squared-hinge")),
            ("C", C_GRID),
        )),
        "nu-svm": GridSpec("nu-svm", (
            ("kernel", KERNEL_GRID),
            ("nu", NU_GRID),
            ("degree", DEGREE_GRID),
            ("gamma", GAMMA_GRID),
            ("coef0", COEF0_GRID),
        )),
        "knn": GridSpec("knn", (
            ("metric", ("euclidean", "manhattan", "chebyshev")),
            ("weighting", ("uniform", "distance")),
            ("k", tuple(range(1, 21))),
        )),
        "mlp": GridSpec("mlp", (
            ("hidden", mlp_hidden),
            ("dropout", (0.0, 0.5)),
            ("learning_rate", (0.1, 0.01, 0.001)),
            ("batch_size", (50, 100)),
            ("iterations", tuple(range(50, 501, 50))),
        )),
    }


def desk_grids() -> dict[str, GridSpec]:
    """Coarsened grids that keep end-to-end runs fast on small data."""
    return {
        "c-svm": GridSpec("c-svm", (
            ("kernel", ("rbf", "polynomial")),
            ("C", (1.0, 100.0)),
            ("degree", (2,)),
            ("gamma", (0.05, 0.5)),
            ("coef0", (1.0,)),
        )),
        "linear-svm": GridSpec("linear-svm", (
            ("loss", ("hinge", "squared-hinge")),
            ("C", (0.1, 10.0)),
        )),
        "nu-svm": GridSpec("nu-svm", (
            ("kernel", ("rbf", "sigmoid")),
            ("nu", (0.1, 0.3)),
            ("degree", (3,)),
            ("gamma", (0.05, 0.5)),
            ("coef0", (1.0,)),
        )),
        "knn": GridSpec("knn", (
            ("metric", ("euclidean", "manhattan", "chebyshev")),
            ("weighting", ("uniform", "distance")),
            ("k", (1, 5)),
        )),
        "mlp": GridSpec("mlp", (
            ("hidden", ((30, 30), (100,))),
            ("dropout", (0.0, 0.5)),
            ("learning_rate", (0.1, 0.01)),
            ("batch_size", (50,)),
            ("iterations", (150,)),
        )),
    }
