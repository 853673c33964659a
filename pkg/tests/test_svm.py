"""SVM families, bias recovery, one-vs-one voting, nu semantics."""

import numpy as np
import pytest

from hsiband.kernels import KernelSpec
from hsiband.smo import SolverError
from hsiband.svm import SvmSpec, nu_margin_stats, predict_svm, train_binary, train_svm
from oracles import linearly_separable


def _blobs(rng, n_per=10, gap=4.0, d=2):
    a = rng.normal(size=(n_per, d)) + gap
    b = rng.normal(size=(n_per, d)) - gap
    X = np.vstack([a, b])
    y = np.concatenate([np.ones(n_per), -np.ones(n_per)])
    return X, y


class TestSpecValidation:
    def test_families(self):
        k = KernelSpec("rbf", gamma=0.5)
        with pytest.raises(ValueError):
            SvmSpec(family="svm", kernel=k, C=1.0)
        with pytest.raises(ValueError):
            SvmSpec(family="nu-svm", kernel=k, nu=0.0)
        with pytest.raises(ValueError):
            SvmSpec(family="c-svm", kernel=k, C=-1.0)
        with pytest.raises(ValueError):
            SvmSpec(family="linear-svm", kernel=k, C=1.0)  # kernel must be linear
        with pytest.raises(ValueError):
            SvmSpec(family="linear-svm", kernel=KernelSpec("linear"), C=1.0, loss="l2")


class TestBinaryTraining:
    def test_separable_blobs_zero_training_errors(self):
        rng = np.random.default_rng(0)
        X, y = _blobs(rng, n_per=10, gap=4.0)
        assert linearly_separable(X, y)  # margin certified independently
        for spec in (
            SvmSpec("c-svm", KernelSpec("linear"), C=10.0),
            SvmSpec("nu-svm", KernelSpec("linear"), nu=0.3),
            SvmSpec("linear-svm", KernelSpec("linear"), C=10.0, loss="squared-hinge"),
        ):
            binary = train_binary(spec, X, y, tol=1e-8)
            pred = np.sign(binary.decision(spec.kernel, X))
            np.testing.assert_array_equal(pred, y)

    def test_csvm_free_vectors_sit_on_the_margin(self):
        rng = np.random.default_rng(1)
        X, y = _blobs(rng, n_per=15, gap=1.5)
        spec = SvmSpec("c-svm", KernelSpec("rbf", gamma=0.3), C=1.0)
        binary = train_binary(spec, X, y, tol=1e-10)
        f = binary.decision(spec.kernel, X)
        # Recover alpha from coef: coef = y * alpha on the SVs.
        sv_rows = [i for i, x in enumerate(X) if any(np.array_equal(x, s) for s in binary.sv_x)]
        coef_by_row = {}
        for s, c in zip(binary.sv_x, binary.sv_coef):
            for i in sv_rows:
                if np.array_equal(X[i], s):
                    coef_by_row[i] = c
        for i, c in coef_by_row.items():
            alpha = c * y[i]
            if 1e-8 < alpha < 1.0 - 1e-8:  # free vector
                assert y[i] * f[i] == pytest.approx(1.0, abs=1e-6)

    def test_nu_free_vectors_sit_on_the_rho_margin(self):
        rng = np.random.default_rng(2)
        X, y = _blobs(rng, n_per=20, gap=1.0)
        spec = SvmSpec("nu-svm", KernelSpec("rbf", gamma=0.4), nu=0.4)
        binary = train_binary(spec, X, y, tol=1e-10)
        assert binary.rho is not None and binary.rho > 0
        n = len(y)
        f = binary.decision(spec.kernel, X)
        for s, c in zip(binary.sv_x, binary.sv_coef):
            i = next(k for k in range(n) if np.array_equal(X[k], s))
            alpha_scaled = c * y[i] * n  # back to the [0, 1] box
            if 1e-7 < alpha_scaled < 1.0 - 1e-7:
                assert y[i] * f[i] == pytest.approx(binary.rho, abs=1e-6)

    def test_nu_controls_margin_errors_and_sv_count(self):
        rng = np.random.default_rng(3)
        X, y = _blobs(rng, n_per=50, gap=1.5)
        n = len(y)
        for nu in (0.1, 0.3):
            spec = SvmSpec("nu-svm", KernelSpec("rbf", gamma=1.0), nu=nu)
            binary = train_binary(spec, X, y, tol=1e-6, max_iter=20_000_000)
            margin_err, sv_frac = nu_margin_stats(binary, spec.kernel, X, y)
            assert margin_err <= nu + 1.0 / n
            assert sv_frac >= nu - 1.0 / n

    def test_every_class_keeps_a_support_vector(self):
        rng = np.random.default_rng(4)
        X, y = _blobs(rng, n_per=8, gap=3.0)
        spec = SvmSpec("nu-svm", KernelSpec("linear"), nu=0.25)
        binary = train_binary(spec, X, y)
        signs = {int(np.sign(c)) for c in binary.sv_coef}
        assert signs == {-1, 1}


class TestMulticlass:
    def _three_class_data(self, rng, n_per=12):
        centers = {1: (0.0, 4.0), 3: (4.0, -2.0), 6: (-4.0, -2.0)}
        X, y = [], []
        for cls, (cx, cy) in centers.items():
            X.append(rng.normal(size=(n_per, 2)) * 0.5 + (cx, cy))
            y += [cls] * n_per
        return np.vstack(X), np.asarray(y, dtype=np.int64)

    def test_pairs_are_lexicographic(self):
        rng = np.random.default_rng(5)
        X, y = self._three_class_data(rng)
        model = train_svm(SvmSpec("c-svm", KernelSpec("linear"), C=1.0), X, y)
        assert model.pairs == ((1, 3), (1, 6), (3, 6))
        assert model.classes.tolist() == [1, 3, 6]

    def test_well_separated_classes_classified_perfectly(self):
        rng = np.random.default_rng(6)
        X, y = self._three_class_data(rng)
        for family, kwargs in (
            ("nu-svm", {"nu": 0.2}),
            ("c-svm", {"C": 5.0}),
        ):
            model = train_svm(SvmSpec(family, KernelSpec("rbf", gamma=0.5), **kwargs), X, y)
            np.testing.assert_array_equal(predict_svm(model, X), y)

    def test_single_class_is_an_error(self):
        X = np.zeros((5, 2))
        y = np.full(5, 3, dtype=np.int64)
        with pytest.raises(ValueError):
            train_svm(SvmSpec("c-svm", KernelSpec("linear"), C=1.0), X, y)

    def test_vote_ties_go_to_lowest_class_id(self):
        # Force a perfect 3-way tie by constructing cyclic decisions:
        # with 3 classes each class wins exactly one pairwise vote.
        from hsiband.svm import BinarySvm, SvmModel

        kernel = KernelSpec("linear")
        spec = SvmSpec("c-svm", kernel, C=1.0)

        def fixed_binary(b):
            return BinarySvm(
                sv_x=np.zeros((1, 2)),
                sv_coef=np.zeros(1),
                bias=b,
                rho=None,
                objective=0.0,
                n_iter=0,
                converged=True,
            )

        model = SvmModel(
            spec=spec,
            classes=np.asarray([2, 5, 7], dtype=np.int64),
            pairs=((2, 5), (2, 7), (5, 7)),
            binaries=(
                fixed_binary(1.0),   # (2,5): 2 wins
                fixed_binary(-1.0),  # (2,7): 7 wins
                fixed_binary(1.0),   # (5,7): 5 wins
            ),
            n_features=2,
        )
        pred = predict_svm(model, np.zeros((3, 2)))
        assert pred.tolist() == [2, 2, 2]

    def test_zero_decision_votes_for_the_lower_class(self):
        from hsiband.svm import BinarySvm, SvmModel

        kernel = KernelSpec("linear")
        spec = SvmSpec("c-svm", kernel, C=1.0)
        model = SvmModel(
            spec=spec,
            classes=np.asarray([4, 9], dtype=np.int64),
            pairs=((4, 9),),
            binaries=(
                BinarySvm(
                    sv_x=np.zeros((1, 2)),
                    sv_coef=np.zeros(1),
                    bias=0.0,
                    rho=None,
                    objective=0.0,
                    n_iter=0,
                    converged=True,
                ),
            ),
            n_features=2,
        )
        assert predict_svm(model, np.zeros((1, 2))).tolist() == [4]

    def test_feature_width_mismatch_rejected(self):
        rng = np.random.default_rng(7)
        X, y = self._three_class_data(rng)
        model = train_svm(SvmSpec("c-svm", KernelSpec("linear"), C=1.0), X, y)
        with pytest.raises(ValueError):
            predict_svm(model, np.zeros((2, 5)))

    def test_infeasible_nu_for_a_pair_is_an_error(self):
        X = np.vstack([np.zeros((10, 2)) + 1, np.zeros((1, 2)) - 1])
        y = np.asarray([1] * 10 + [2], dtype=np.int64)
        with pytest.raises(SolverError, match="infeasible"):
            train_svm(SvmSpec("nu-svm", KernelSpec("linear"), nu=0.9), X, y)
