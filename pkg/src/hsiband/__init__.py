"""Hyperspectral band selection and model optimisation toolkit.

Genetic-algorithm driven simultaneous hyperparameter tuning and spectral
band selection for SVM classifiers, grid-search baselines (SVM, k-NN,
MLP), preprocessing chains, evaluation scenarios, and a synthetic scene
generator — everything needed to run the full pipeline end to end.
"""

from .data import (
    DEFAULT_CLASS_SET,
    DataError,
    ImageMeta,
    LabelMap,
    LabeledDataset,
    SceneImage,
    SpectralCube,
    SplitPlan,
    extract_labeled,
    merge_datasets,
    stratified_sample,
)
from .kernels import KernelSpec, gram, kernel_eval
from .preprocess import (
    BandTranslation,
    PreprocessConfig,
    apply_chain,
    derivative,
    median_filter,
    median_normalize,
    preprocess_cube,
    remove_bands,
)
from .smo import BACKEND as SMO_BACKEND

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_CLASS_SET",
    "DataError",
    "ImageMeta",
    "LabelMap",
    "LabeledDataset",
    "SceneImage",
    "SpectralCube",
    "SplitPlan",
    "extract_labeled",
    "merge_datasets",
    "stratified_sample",
    "KernelSpec",
    "gram",
    "kernel_eval",
    "BandTranslation",
    "PreprocessConfig",
    "apply_chain",
    "derivative",
    "median_filter",
    "median_normalize",
    "preprocess_cube",
    "remove_bands",
    "SMO_BACKEND",
    "__version__",
]
