"""Preprocessing chain: filter, normalise, band removal, derivative."""

import numpy as np
import pytest

from hsiband.data import SpectralCube
from hsiband.preprocess import (
    DEFAULT_REMOVED_BANDS,
    BandTranslation,
    PreprocessConfig,
    PreprocessError,
    apply_chain,
    derivative,
    median_filter,
    median_normalize,
    preprocess_cube,
    remove_bands,
)
from oracles import median_window_oracle


class TestMedianFilter:
    def test_radius_zero_is_identity(self):
        rng = np.random.default_rng(0)
        cube = SpectralCube(values=rng.normal(size=(4, 4, 3)).astype(np.float32))
        out = median_filter(cube, 0)
        np.testing.assert_array_equal(out.values, cube.values)

    def test_matches_window_oracle(self):
        rng = np.random.default_rng(1)
        for radius in (1, 2):
            values = rng.normal(size=(5, 5, 4)).astype(np.float32)
            cube = SpectralCube(values=values)
            out = median_filter(cube, radius)
            ref = median_window_oracle(values.astype(np.float64), radius)
            np.testing.assert_allclose(out.values, ref.astype(np.float32), rtol=0, atol=0)

    def test_border_windows_are_clipped(self):
        # A corner pixel with radius 1 sees exactly its 2x2 neighbourhood.
        values = np.zeros((3, 3, 1), dtype=np.float32)
        values[:, :, 0] = [[9, 1, 1], [1, 1, 1], [1, 1, 5]]
        out = median_filter(SpectralCube(values=values), 1)
        corner = sorted([9.0, 1.0, 1.0, 1.0])
        assert out.values[0, 0, 0] == np.median(corner)

    def test_negative_radius_rejected(self):
        cube = SpectralCube(values=np.zeros((2, 2, 2), dtype=np.float32))
        with pytest.raises(PreprocessError):
            median_filter(cube, -1)


class TestNormalize:
    def test_median_becomes_one(self):
        rng = np.random.default_rng(2)
        x = rng.uniform(0.1, 3.0, size=(50, 21))
        out = median_normalize(x)
        med = np.median(out, axis=-1)
        np.testing.assert_allclose(med, 1.0, atol=1e-12, rtol=0)

    def test_scale_invariance_exact_for_power_of_two(self):
        rng = np.random.default_rng(3)
        x = rng.uniform(0.1, 3.0, size=(20, 15))
        np.testing.assert_array_equal(median_normalize(4.0 * x), median_normalize(x))

    def test_zero_median_is_an_error(self):
        x = np.asarray([-1.0, 0.0, 1.0])
        with pytest.raises(PreprocessError):
            median_normalize(x)


class TestRemoveBands:
    def test_default_set_keeps_113_of_128(self):
        x = np.arange(128.0)
        out, survivors = remove_bands(x, DEFAULT_REMOVED_BANDS)
        assert out.shape == (113,)
        assert survivors.shape == (113,)
        # Translation table: new index -> original index.
        assert survivors[0] == 5
        assert survivors[-1] == 120
        np.testing.assert_array_equal(out, survivors.astype(float))

    def test_translation_table_is_consistent(self):
        x = np.arange(10.0)
        out, survivors = remove_bands(x, {0, 3, 4})
        np.testing.assert_array_equal(survivors, [1, 2, 5, 6, 7, 8, 9])
        np.testing.assert_array_equal(out, x[survivors])

    def test_out_of_range_rejected(self):
        with pytest.raises(PreprocessError):
            remove_bands(np.zeros(8), {7, 8})

    def test_removing_almost_everything_rejected(self):
        with pytest.raises(PreprocessError):
            remove_bands(np.zeros(4), {0, 1, 2})


class TestDerivative:
    def test_length_shrinks_by_one(self):
        rng = np.random.default_rng(4)
        x = rng.normal(size=(7, 12))
        assert derivative(x).shape == (7, 11)

    def test_values_are_forward_differences(self):
        x = np.asarray([1.0, 4.0, 9.0, 16.0])
        np.testing.assert_array_equal(derivative(x), [3.0, 5.0, 7.0])

    def test_translation_invariance_exact_for_exact_sums(self):
        # Dyadic-rational spectra plus a dyadic offset stay exact, so
        # the derivative must be bit-identical.
        rng = np.random.default_rng(5)
        x = rng.integers(0, 2**20, size=(30, 16)).astype(np.float64) / 2**10
        t = float(rng.integers(0, 2**20)) / 2**10
        np.testing.assert_array_equal(derivative(x + t), derivative(x))

    def test_too_short_rejected(self):
        with pytest.raises(PreprocessError):
            derivative(np.asarray([1.0]))


class TestChain:
    def test_feature_count_128_to_112(self):
        rng = np.random.default_rng(6)
        x = rng.uniform(0.5, 2.0, size=(9, 128))
        out, tr = apply_chain(x, PreprocessConfig())
        assert out.shape == (9, 112)
        assert tr.n_features == 112
        assert tr.derivative

    def test_without_derivative_113(self):
        rng = np.random.default_rng(7)
        x = rng.uniform(0.5, 2.0, size=(3, 128))
        out, tr = apply_chain(x, PreprocessConfig(derivative=False))
        assert out.shape == (3, 113)
        assert tr.n_features == 113

    def test_feature_to_original_band(self):
        tr = BandTranslation(survivors=np.asarray([2, 5, 6, 9]), derivative=True)
        assert tr.n_features == 3
        np.testing.assert_array_equal(tr.to_original([0, 2]), [2, 6])
        with pytest.raises(PreprocessError):
            tr.to_original([3])

    def test_stage_order_normalise_before_removal(self):
        # A spectrum whose median lies in a removed band still divides by
        # that original median, proving normalisation happens first.
        x = np.asarray([[10.0, 1.0, 2.0, 4.0]])
        cfg = PreprocessConfig(
            median_radius=0, removed_bands=frozenset({3}), derivative=False
        )
        out, _ = apply_chain(x, cfg)
        med = np.median(x[0])  # = 3.0, uses band 3 before it is removed
        np.testing.assert_allclose(out[0], x[0, :3] / med)

    def test_cube_chain_wavelength_bookkeeping(self):
        rng = np.random.default_rng(8)
        values = rng.uniform(0.5, 2.0, size=(3, 3, 8)).astype(np.float32)
        wl = np.linspace(400.0, 470.0, 8)
        cube = SpectralCube(values=values, wavelengths=wl)
        cfg = PreprocessConfig(
            median_radius=0, removed_bands=frozenset({0, 7}), derivative=True
        )
        out, tr = preprocess_cube(cube, cfg)
        assert out.bands == 5
        np.testing.assert_array_equal(tr.survivors, [1, 2, 3, 4, 5, 6])
        kept = wl[tr.survivors]
        np.testing.assert_allclose(out.wavelengths, 0.5 * (kept[:-1] + kept[1:]))

    def test_derivative_removes_constant_illumination_offset(self):
        # Multiplying a spectrum by a constant is removed by normalisation;
        # adding one is removed by the derivative.
        rng = np.random.default_rng(9)
        x = rng.uniform(0.5, 2.0, size=(4, 10))
        cfg = PreprocessConfig(
            median_radius=0, removed_bands=frozenset(), normalize=False
        )
        base, _ = apply_chain(x, cfg)
        shifted, _ = apply_chain(x + 0.75, cfg)
        np.testing.assert_allclose(shifted, base, atol=1e-12)
