"""Core data model: spectral cubes, label maps, labelled pixel sets, splits."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import numpy.typing as npt

SCENE_KINDS = ("F", "E")  # framed (flat background) / environment comparison
DAY_TOKENS = ("1", "1a", "7", "21")
REPORT_DAYS = ("1", "7", "21")  # day "1a" is trained on but not reported
DEFAULT_CLASS_SET = frozenset({1, 2, 3, 5, 6, 7})
DEFAULT_EXCLUDED_CLASSES = frozenset({4})


class DataError(ValueError):
    """Malformed or inconsistent pixel-level data."""


class GroupSizeError(DataError):
    """A sampling group has fewer members than the requested quota."""


def day_value(token: str) -> int:
    """Numeric day behind a token; the re-imaged variant '1a' maps to 1."""
    if token not in DAY_TOKENS:
        raise DataError(f"unknown day token {token!r}; expected one of {DAY_TOKENS}")
    return 1 if token in ("1", "1a") else int(token)


@dataclass(frozen=True)
class SpectralCube:
    """A (rows, cols, bands) reflectance image.

    ``values`` is float32, indexed [row, col, band].  ``wavelengths`` is
    optional; when present it must be strictly increasing with one entry
    per band.
    """

    values: npt.NDArray[np.float32]
    wavelengths: npt.NDArray[np.float64] | None = None

    def __post_init__(self) -> None:
        v = self.values
        if v.ndim != 3:
            raise DataError(f"cube values must be 3-d, got shape {v.shape}")
        if v.dtype != np.float32:
            object.__setattr__(self, "values", v.astype(np.float32))
        if min(v.shape) < 1:
            raise DataError(f"cube has an empty axis: shape {v.shape}")
        w = self.wavelengths
        if w is not None:
            w = np.asarray(w, dtype=np.float64)
            if w.shape != (v.shape[2],):
                raise DataError(
                    f"wavelength count {w.shape} does not match band count {v.shape[2]}"
                )
            if not np.all(np.diff(w) > 0):
                raise DataError("wavelengths must be strictly increasing")
            object.__setattr__(self, "wavelengths", w)

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]

    @property
    def bands(self) -> int:
        return self.values.shape[2]


@dataclass(frozen=True)
class LabelMap:
    """Per-pixel integer class labels; 0 means unlabelled."""

    values: npt.NDArray[np.uint16]

    def __post_init__(self) -> None:
        v = self.values
        if v.ndim != 2:
            raise DataError(f"label map must be 2-d, got shape {v.shape}")
        if not np.issubdtype(v.dtype, np.integer):
            raise DataError(f"label map must be integer, got {v.dtype}")
        if v.min(initial=0) < 0:
            raise DataError("labels must be non-negative")
        if v.dtype != np.uint16:
            object.__setattr__(self, "values", v.astype(np.uint16))

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class ImageMeta:
    """Identity of one captured scene: id, scene kind, acquisition day."""

    image_id: str
    scene: str
    day: str
    informative_bands: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.scene not in SCENE_KINDS:
            raise DataError(f"scene must be one of {SCENE_KINDS}, got {self.scene!r}")
        if self.day not in DAY_TOKENS:
            raise DataError(f"day must be one of {DAY_TOKENS}, got {self.day!r}")


@dataclass(frozen=True)
class SceneImage:
    """One cube with its label map and identity."""

    cube: SpectralCube
    labels: LabelMap
    meta: ImageMeta

    def __post_init__(self) -> None:
        if (self.cube.rows, self.cube.cols) != (self.labels.rows, self.labels.cols):
            raise DataError(
                f"cube {self.cube.rows}x{self.cube.cols} and label map "
                f"{self.labels.rows}x{self.labels.cols} disagree"
            )


@dataclass(frozen=True)
class LabeledDataset:
    """Flat table of labelled pixels pooled from one or more images.

    Rows are aligned across all arrays.  ``spectra`` may hold raw band
    values or any derived feature vector; downstream code only assumes a
    fixed per-row length.
    """

    spectra: npt.NDArray[np.float64]  # (n, d)
    labels: npt.NDArray[np.int64]  # (n,)
    image_ids: npt.NDArray[np.str_]  # (n,)
    scenes: npt.NDArray[np.str_]  # (n,) values in SCENE_KINDS
    days: npt.NDArray[np.str_]  # (n,) values in DAY_TOKENS
    class_set: frozenset[int] = DEFAULT_CLASS_SET

    def __post_init__(self) -> None:
        n = self.spectra.shape[0]
        if self.spectra.ndim != 2:
            raise DataError(f"spectra must be 2-d, got shape {self.spectra.shape}")
        for name in ("labels", "image_ids", "scenes", "days"):
            arr = getattr(self, name)
            if arr.shape != (n,):
                raise DataError(f"{name} has shape {arr.shape}, expected ({n},)")
        bad = set(np.unique(self.labels)) - self.class_set
        if bad:
            raise DataError(f"labels outside declared class set: {sorted(bad)}")

    def __len__(self) -> int:
        return self.spectra.shape[0]

    @property
    def n_features(self) -> int:
        return self.spectra.shape[1]

    def subset(self, indices: npt.NDArray[np.int64]) -> "LabeledDataset":
        idx = np.asarray(indices, dtype=np.int64)
        return LabeledDataset(
            spectra=self.spectra[idx],
            labels=self.labels[idx],
            image_ids=self.image_ids[idx],
            scenes=self.scenes[idx],
            days=self.days[idx],
            class_set=self.class_set,
        )

    def with_spectra(self, spectra: npt.NDArray[np.float64]) -> "LabeledDataset":
        """Same rows, new feature matrix (e.g. after preprocessing)."""
        return LabeledDataset(
            spectra=np.asarray(spectra, dtype=np.float64),
            labels=self.labels,
            image_ids=self.image_ids,
            scenes=self.scenes,
            days=self.days,
            class_set=self.class_set,
        )


def merge_datasets(parts: Sequence[LabeledDataset]) -> LabeledDataset:
    if not parts:
        raise DataError("cannot merge an empty list of datasets")
    widths = {p.n_features for p in parts}
    if len(widths) != 1:
        raise DataError(f"feature widths disagree across parts: {sorted(widths)}")
    return LabeledDataset(
        spectra=np.concatenate([p.spectra for p in parts]),
        labels=np.concatenate([p.labels for p in parts]),
        image_ids=np.concatenate([p.image_ids for p in parts]),
        scenes=np.concatenate([p.scenes for p in parts]),
        days=np.concatenate([p.days for p in parts]),
        class_set=frozenset().union(*(p.class_set for p in parts)),
    )


def extract_labeled(
    cube: SpectralCube,
    labels: LabelMap,
    meta: ImageMeta,
    class_set: frozenset[int] = DEFAULT_CLASS_SET,
    excluded: frozenset[int] = DEFAULT_EXCLUDED_CLASSES,
) -> LabeledDataset:
    """Pull every pixel whose label is in ``class_set`` minus ``excluded``.

    Label 0 (unlabelled) is always dropped.  Row order is row-major scan
    order, so extraction is deterministic.
    """
    if (cube.rows, cube.cols) != (labels.rows, labels.cols):
        raise DataError(
            f"cube {cube.rows}x{cube.cols} and label map "
            f"{labels.rows}x{labels.cols} disagree"
        )
    wanted = frozenset(class_set) - frozenset(excluded) - {0}
    flat_labels = labels.values.ravel()
    keep = np.isin(flat_labels, sorted(wanted))
    n = int(keep.sum())
    spectra = cube.values.reshape(-1, cube.bands)[keep].astype(np.float64)
    return LabeledDataset(
        spectra=spectra,
        labels=flat_labels[keep].astype(np.int64),
        image_ids=np.full(n, meta.image_id),
        scenes=np.full(n, meta.scene),
        days=np.full(n, meta.day),
        class_set=frozenset(wanted),
    )


@dataclass(frozen=True)
class SplitPlan:
    """Disjoint train/test (and optional validation) row indices."""

    train: npt.NDArray[np.int64]
    test: npt.NDArray[np.int64]
    validation: npt.NDArray[np.int64] | None = None

    def __post_init__(self) -> None:
        train = np.asarray(self.train, dtype=np.int64)
        test = np.asarray(self.test, dtype=np.int64)
        object.__setattr__(self, "train", train)
        object.__setattr__(self, "test", test)
        parts = {"train": train, "test": test}
        if self.validation is not None:
            val = np.asarray(self.validation, dtype=np.int64)
            object.__setattr__(self, "validation", val)
            parts["validation"] = val
        for name, arr in parts.items():
            if arr.ndim != 1:
                raise DataError(f"{name} indices must be 1-d")
            if len(np.unique(arr)) != len(arr):
                raise DataError(f"{name} indices contain duplicates")
        names = list(parts)
        for i, a in enumerate(names):
            for b in names[i + 1 :]:
                if np.intersect1d(parts[a], parts[b]).size:
                    raise DataError(f"{a} and {b} indices overlap")


def group_indices(
    dataset: LabeledDataset, by: str = "class"
) -> dict[tuple, npt.NDArray[np.int64]]:
    """Row indices per group, keys sorted; ``by`` is 'class' or 'class-image'."""
    if by == "class":
        keys: Iterable[tuple] = [(int(c),) for c in np.unique(dataset.labels)]
        members = lambda key: np.flatnonzero(dataset.labels == key[0])
    elif by == "class-image":
        pairs = sorted(
            {(int(c), str(i)) for c, i in zip(dataset.labels, dataset.image_ids)}
        )
        keys = pairs
        members = lambda key: np.flatnonzero(
            (dataset.labels == key[0]) & (dataset.image_ids == key[1])
        )
    else:
        raise DataError(f"unknown grouping {by!r}; expected 'class' or 'class-image'")
    return {key: members(key) for key in keys}


def stratified_sample(
    dataset: LabeledDataset,
    per_group: int,
    by: str = "class",
    seed: int = 0,
    restrict_to: npt.NDArray[np.int64] | None = None,
) -> SplitPlan:
    """Draw ``per_group`` rows from every group without replacement.

    Returns a plan whose train part holds the drawn rows and whose test
    part holds every remaining row (of the restricted view, if given).
    Sampling is reproducible: groups are visited in sorted key order and
    all draws come from one seeded generator.
    """
    if per_group < 1:
        raise DataError(f"per_group must be >= 1, got {per_group}")
    view = dataset if restrict_to is None else dataset.subset(restrict_to)
    base = (
        np.arange(len(dataset), dtype=np.int64)
        if restrict_to is None
        else np.asarray(restrict_to, dtype=np.int64)
    )
    rng = np.random.default_rng(seed)
    picked: list[npt.NDArray[np.int64]] = []
    for key, rows in group_indices(view, by).items():
        if rows.size < per_group:
            raise GroupSizeError(
                f"group {key} has {rows.size} rows; quota is {per_group}"
            )
        order = rng.permutation(rows.size)
        picked.append(base[rows[order[:per_group]]])
    train = np.sort(np.concatenate(picked))
    test = np.setdiff1d(base, train)
    return SplitPlan(train=train, test=test)


def stratified_folds(
    labels: npt.NDArray[np.int64], k: int, seed: int
) -> list[npt.NDArray[np.int64]]:
    """Partition rows into ``k`` folds, balancing every class across folds.

    Every row lands in exactly one fold.  Within a class, shuffled rows
    are dealt round-robin, so fold class counts differ by at most one.
    """
    n = labels.shape[0]
    if not 2 <= k <= n:
        raise DataError(f"fold count {k} must lie in [2, {n}]")
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    offset = 0
    for cls in np.unique(labels):
        rows = np.flatnonzero(labels == cls)
        rows = rows[rng.permutation(rows.size)]
        for j, r in enumerate(rows):
            folds[(offset + j) % k].append(int(r))
        offset += rows.size  # stagger so small classes spread evenly
    out = [np.sort(np.asarray(f, dtype=np.int64)) for f in folds]
    if any(f.size == 0 for f in out):
        raise DataError(f"{k} folds cannot all be non-empty for {n} rows")
    return out
