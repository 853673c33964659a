"""Grid-search tests: enumeration order, sizes, and the tie rule."""

import math

import numpy as np
import pytest

from hsiband.grids import (
    GAMMA_GRID,
    GridSpec,
    desk_grids,
    grid_points,
    grid_search,
    paper_grids,
)
from hsiband.knn import KnnSpec
from hsiband.svm import SvmSpec


def test_grid_spec_validation():
    with pytest.raises(ValueError):
        GridSpec("forest", (("n", (1, 2)),))
    with pytest.raises(ValueError):
        GridSpec("knn", ())
    with pytest.raises(ValueError):
        GridSpec("knn", (("k", ()),))
    with pytest.raises(ValueError):
        GridSpec("knn", (("k", (1,)), ("k", (2,))))


def test_gamma_grid_endpoints_and_length():
    assert len(GAMMA_GRID) == 7
    assert GAMMA_GRID[0] == pytest.approx(0.001)
    assert GAMMA_GRID[-1] == pytest.approx(5.0)
    assert all(a < b for a, b in zip(GAMMA_GRID, GAMMA_GRID[1:]))


def test_every_grid_expands_to_product_of_axis_sizes():
    for grids in (paper_grids(), desk_grids()):
        for name, grid in grids.items():
            points = grid_points(grid)
            expected = math.prod(len(v) for _, v in grid.axes)
            assert len(points) == expected, name
            assert grid.size == expected


def test_paper_grid_sizes():
    grids = paper_grids()
    assert grids["c-svm"].size == 3 * 7 * 5 * 7 * 5
    assert grids["linear-svm"].size == 2 * 7
    assert grids["nu-svm"].size == 3 * 5 * 5 * 7 * 5
    assert grids["knn"].size == 3 * 2 * 20
    assert grids["mlp"].size == 4 * 2 * 3 * 2 * 10


def test_duplicate_mlp_width_config_collapsed():
    hidden_axis = dict(paper_grids()["mlp"].axes)["hidden"]
    assert len(hidden_axis) == len(set(hidden_axis)) == 4
    assert (1000, 1000, 1000) in hidden_axis


def test_enumeration_is_row_major():
    grid = paper_grids()["knn"]
    points = grid_points(grid)
    first, second, last = points[0], points[1], points[-1]
    assert first == KnnSpec(metric="euclidean", weighting="uniform", k=1)
    assert second == KnnSpec(metric="euclidean", weighting="uniform", k=2)
    assert last == KnnSpec(metric="chebyshev", weighting="distance", k=20)

    svc = grid_points(paper_grids()["c-svm"])[0]
    assert isinstance(svc, SvmSpec)
    assert svc.family == "c-svm"
    assert svc.kernel.kind == "rbf"
    assert svc.C == 0.001
    assert svc.kernel.degree == 1
    assert svc.kernel.gamma == pytest.approx(0.001)
    assert svc.kernel.coef0 == 0.01


def test_singleton_grid_returns_its_point():
    grid = GridSpec("knn", (("metric", ("euclidean",)), ("weighting", ("uniform",)),
                            ("k", (3,))))
    result = grid_search(grid, lambda ms, seed: 42.0)
    assert result.best.spec == KnnSpec(metric="euclidean", weighting="uniform", k=3)
    assert result.best_fitness == 42.0
    assert result.best.bands is None


def test_indicator_fitness_selects_that_point():
    grid = desk_grids()["knn"]
    points = grid_points(grid)
    target = points[7]

    def indicator(model_spec, seed):
        return 100.0 if model_spec.spec == target else 0.0

    result = grid_search(grid, indicator)
    assert result.best.spec == target
    assert result.best_index == 7
    assert result.fitnesses.shape == (len(points),)
    assert result.fitnesses.sum() == 100.0


def test_constant_fitness_ties_resolve_to_first_point():
    grid = desk_grids()["linear-svm"]
    result = grid_search(grid, lambda ms, seed: 1.0)
    assert result.best_index == 0
    assert result.best.spec == grid_points(grid)[0]


def test_search_evaluates_every_point_exactly_once():
    grid = desk_grids()["nu-svm"]
    seen = []

    def recorder(model_spec, seed):
        seen.append((model_spec.spec, seed))
        return 0.0

    grid_search(grid, recorder, seed=5)
    assert len(seen) == grid.size
    assert [s for s, _ in seen] == grid_points(grid)
    assert len({seed for _, seed in seen}) == grid.size  # distinct derived seeds


def band_count_fitness(model_spec, seed):
    return float(seed % 97)


def test_parallel_grid_search_matches_serial():
    grid = desk_grids()["knn"]
    serial = grid_search(grid, band_count_fitness, seed=3, workers=1)
    parallel = grid_search(grid, band_count_fitness, seed=3, workers=3)
    assert serial.best_index == parallel.best_index
    assert np.array_equal(serial.fitnesses, parallel.fitnesses)
