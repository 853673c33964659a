"""Unified classifier facade: one spec type, optional band mask, one file format.

A ModelSpec couples any classifier configuration with an optional boolean
band mask applied to the feature axis before training and prediction.
Trained models serialize to the HSMODL v1 container: one text header line
naming the classifier family, one JSON line with the configuration and an
array manifest, then the arrays' raw little-endian bytes in manifest order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import numpy.typing as npt

from .io import FormatError, TruncationError
from .kernels import KernelSpec
from .knn import KnnModel, KnnSpec, predict_knn, train_knn
from .mlp import MlpModel, MlpSpec, predict_mlp, train_mlp
from .svm import BinarySvm, SvmModel, SvmSpec, predict_svm, train_svm

MODEL_MAGIC = b"HSMODL"
MODEL_VERSION = b"v1"

ClassifierSpec = SvmSpec | KnnSpec | MlpSpec
ClassifierModel = SvmModel | KnnModel | MlpModel

_FAMILY_OF_SPEC = {SvmSpec: "svm", KnnSpec: "knn", MlpSpec: "mlp"}


@dataclass(frozen=True)
class ModelSpec:
    """A classifier configuration plus the band subset it operates on.

    ``bands`` is a boolean mask over the feature axis; None means use
    every feature.
    """

    spec: ClassifierSpec
    bands: npt.NDArray[np.bool_] | None = None

    def __post_init__(self) -> None:
        if type(self.spec) not in _FAMILY_OF_SPEC:
            raise TypeError(f"unsupported classifier spec {type(self.spec).__name__}")
        if self.bands is not None:
            mask = np.asarray(self.bands, dtype=bool)
            if mask.ndim != 1:
                raise ValueError(f"band mask must be 1-D, got shape {mask.shape}")
            if not mask.any():
                raise ValueError("band mask selects no features")
            object.__setattr__(self, "bands", mask)

    @property
    def family(self) -> str:
        return _FAMILY_OF_SPEC[type(self.spec)]

    @property
    def band_count(self) -> int | None:
        return None if self.bands is None else int(self.bands.sum())


@dataclass(frozen=True)
class TrainedModel:
    model_spec: ModelSpec
    inner: ClassifierModel
    n_features_in: int  # feature count before the band mask


def apply_bands(bands: npt.NDArray[np.bool_] | None, X: np.ndarray) -> np.ndarray:
    return X if bands is None else X[:, bands]


def train_model(
    model_spec: ModelSpec,
    X: npt.NDArray[np.float64],
    y: npt.NDArray[np.int64],
    seed: int | None = None,
) -> TrainedModel:
    """Train the configured classifier on the masked features.

    ``seed`` reaches classifiers with stochastic training; deterministic
    families ignore it.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"X must be 2-D, got shape {X.shape}")
    if model_spec.bands is not None and model_spec.bands.size != X.shape[1]:
        raise ValueError(
            f"band mask covers {model_spec.bands.size} features, data has {X.shape[1]}"
        )
    Xm = apply_bands(model_spec.bands, X)
    spec = model_spec.spec
    if isinstance(spec, SvmSpec):
        inner: ClassifierModel = train_svm(spec, Xm, y)
    elif isinstance(spec, KnnSpec):
        inner = train_knn(spec, Xm, y)
    else:
        inner = train_mlp(spec, Xm, y, seed=seed)
    return TrainedModel(model_spec=model_spec, inner=inner, n_features_in=X.shape[1])


def predict_model(trained: TrainedModel, X: npt.NDArray[np.float64]) -> npt.NDArray[np.int64]:
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != trained.n_features_in:
        raise ValueError(f"expected {trained.n_features_in} features, got {X.shape[1]}")
    Xm = apply_bands(trained.model_spec.bands, X)
    inner = trained.inner
    if isinstance(inner, SvmModel):
        return predict_svm(inner, Xm)
    if isinstance(inner, KnnModel):
        return predict_knn(inner, Xm)
    return predict_mlp(inner, Xm)


def _spec_to_json(spec: ClassifierSpec) -> dict:
    if isinstance(spec, SvmSpec):
        return {
            "family": spec.family,
            "kernel": {
                "kind": spec.kernel.kind,
                "gamma": spec.kernel.gamma,
                "coef0": spec.kernel.coef0,
                "degree": spec.kernel.degree,
            },
            "nu": spec.nu,
            "C": spec.C,
            "loss": spec.loss,
        }
    if isinstance(spec, KnnSpec):
        return {"metric": spec.metric, "weighting": spec.weighting, "k": spec.k}
    return {
        "hidden": list(spec.hidden),
        "dropout": spec.dropout,
        "learning_rate": spec.learning_rate,
        "batch_size": spec.batch_size,
        "iterations": spec.iterations,
        "activation": spec.activation,
        "seed": spec.seed,
    }


def _spec_from_json(family: str, blob: dict) -> ClassifierSpec:
    if family == "svm":
        return SvmSpec(
            family=blob["family"],
            kernel=KernelSpec(**blob["kernel"]),
            nu=blob["nu"],
            C=blob["C"],
            loss=blob["loss"],
        )
    if family == "knn":
        return KnnSpec(**blob)
    blob = dict(blob)
    blob["hidden"] = tuple(blob["hidden"])
    return MlpSpec(**blob)


def save_model(trained: TrainedModel, path: str | Path) -> None:
    """Write the HSMODL v1 container."""
    arrays: list[tuple[str, np.ndarray]] = []
    mspec = trained.model_spec
    meta: dict = {
        "n_features_in": trained.n_features_in,
        "spec": _spec_to_json(mspec.spec),
        "has_bands": mspec.bands is not None,
    }
    if mspec.bands is not None:
        arrays.append(("bands", mspec.bands.astype(np.uint8)))

    inner = trained.inner
    if isinstance(inner, SvmModel):
        arrays.append(("classes", inner.classes.astype(np.int64)))
        arrays.append(("pairs", np.asarray(inner.pairs, dtype=np.int64).reshape(-1, 2)))
        meta["n_features_used"] = inner.n_features
        meta["binaries"] = []
        for i, binary in enumerate(inner.binaries):
            arrays.append((f"sv_x_{i}", binary.sv_x.astype(np.float64)))
            arrays.append((f"sv_coef_{i}", binary.sv_coef.astype(np.float64)))
            meta["binaries"].append(
                {
                    "bias": binary.bias,
                    "rho": binary.rho,
                    "objective": binary.objective,
                    "n_iter": binary.n_iter,
                    "converged": binary.converged,
                }
            )
    elif isinstance(inner, KnnModel):
        arrays.append(("X", inner.X.astype(np.float64)))
        arrays.append(("y", inner.y.astype(np.int64)))
        arrays.append(("classes", inner.classes.astype(np.int64)))
    else:
        arrays.append(("classes", inner.classes.astype(np.int64)))
        arrays.append(("loss_history", inner.loss_history.astype(np.float64)))
        meta["n_layers"] = len(inner.weights)
        for i, (W, b) in enumerate(inner.weights):
            arrays.append((f"W_{i}", W.astype(np.float64)))
            arrays.append((f"b_{i}", b.astype(np.float64)))

    meta["arrays"] = [[name, arr.dtype.str, list(arr.shape)] for name, arr in arrays]
    header = b"%s %s %s\n" % (MODEL_MAGIC, MODEL_VERSION, mspec.family.encode())
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(json.dumps(meta).encode() + b"\n")
        for _, arr in arrays:
            fh.write(np.ascontiguousarray(arr).astype(arr.dtype.newbyteorder("<")).tobytes())


def load_model(path: str | Path) -> TrainedModel:
    """Read an HSMODL v1 container back into a TrainedModel."""
    path = Path(path)
    raw = path.read_bytes()
    nl = raw.find(b"\n")
    if nl < 0:
        raise FormatError(f"{path}: missing header line")
    parts = raw[:nl].split(b" ")
    if len(parts) != 3 or parts[0] != MODEL_MAGIC or parts[1] != MODEL_VERSION:
        raise FormatError(f"{path}: bad header {raw[:nl]!r}")
    family = parts[2].decode()
    if family not in ("svm", "knn", "mlp"):
        raise FormatError(f"{path}: unknown model family {family!r}")
    nl2 = raw.find(b"\n", nl + 1)
    if nl2 < 0:
        raise FormatError(f"{path}: missing metadata line")
    try:
        meta = json.loads(raw[nl + 1 : nl2])
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: bad metadata: {exc}") from exc

    offset = nl2 + 1
    data: dict[str, np.ndarray] = {}
    for name, dtype_str, shape in meta["arrays"]:
        dtype = np.dtype(dtype_str)
        count = int(np.prod(shape)) if shape else 1
        nbytes = dtype.itemsize * count
        if offset + nbytes > len(raw):
            raise TruncationError(
                f"{path}: array {name!r} needs {nbytes} bytes, "
                f"{len(raw) - offset} remain"
            )
        data[name] = np.frombuffer(raw, dtype=dtype, count=count, offset=offset).reshape(shape)
        offset += nbytes
    if offset != len(raw):
        raise FormatError(f"{path}: {len(raw) - offset} trailing bytes")

    spec = _spec_from_json(family, meta["spec"])
    bands = data["bands"].astype(bool) if meta["has_bands"] else None
    model_spec = ModelSpec(spec=spec, bands=bands)

    if family == "svm":
        binaries = tuple(
            BinarySvm(
                sv_x=data[f"sv_x_{i}"],
                sv_coef=data[f"sv_coef_{i}"],
                bias=blob["bias"],
                rho=blob["rho"],
                objective=blob["objective"],
                n_iter=blob["n_iter"],
                converged=blob["converged"],
            )
            for i, blob in enumerate(meta["binaries"])
        )
        pairs = tuple((int(a), int(b)) for a, b in data["pairs"])
        inner: ClassifierModel = SvmModel(
            spec=spec, classes=data["classes"], pairs=pairs, binaries=binaries,
            n_features=int(meta["n_features_used"]),
        )
    elif family == "knn":
        inner = KnnModel(spec=spec, X=data["X"], y=data["y"], classes=data["classes"])
    else:
        weights = tuple(
            (data[f"W_{i}"], data[f"b_{i}"]) for i in range(meta["n_layers"])
        )
        inner = MlpModel(
            spec=spec,
            classes=data["classes"],
            weights=weights,
            loss_history=data["loss_history"],
            n_features=int(data["W_0"].shape[0]),
        )
    return TrainedModel(
        model_spec=model_spec, inner=inner, n_features_in=int(meta["n_features_in"])
    )
