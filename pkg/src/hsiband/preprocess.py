"""Spectral preprocessing chain: spatial median filter, per-pixel median
normalisation, noisy-band removal, first-difference derivative."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from .data import DataError, SpectralCube

# Bands dominated by sensor noise at the edges of the captured range plus
# the dead region around band 48..50 (0-based indices into 128 bands).
DEFAULT_REMOVED_BANDS = frozenset(range(0, 5)) | frozenset(range(48, 51)) | frozenset(
    range(121, 128)
)


class PreprocessError(DataError):
    """Preprocessing cannot be applied to the given data."""


@dataclass(frozen=True)
class PreprocessConfig:
    """Which chain stages run and with what parameters."""

    median_radius: int = 1
    removed_bands: frozenset[int] = DEFAULT_REMOVED_BANDS
    normalize: bool = True
    derivative: bool = True

    def __post_init__(self) -> None:
        if self.median_radius < 0:
            raise PreprocessError(f"median radius must be >= 0, got {self.median_radius}")
        if any(b < 0 for b in self.removed_bands):
            raise PreprocessError("removed band indices must be non-negative")


@dataclass(frozen=True)
class BandTranslation:
    """Maps post-chain feature indices back to original band indices.

    ``survivors[i]`` is the original band behind reduced band ``i``.  With
    the derivative stage on, feature ``i`` is the difference between
    reduced bands ``i+1`` and ``i``; ``to_original`` reports the left band
    of that pair.
    """

    survivors: npt.NDArray[np.int64]
    derivative: bool = False

    @property
    def n_features(self) -> int:
        return self.survivors.size - 1 if self.derivative else self.survivors.size

    def to_original(self, feature_idx) -> npt.NDArray[np.int64]:
        idx = np.asarray(feature_idx, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= self.n_features):
            raise PreprocessError(
                f"feature index out of range [0, {self.n_features})"
            )
        return self.survivors[idx]


def median_filter(cube: SpectralCube, radius: int) -> SpectralCube:
    """Per-band spatial median over a (2r+1)^2 window clipped at borders.

    Radius 0 is the identity.  Border pixels use only the in-image part
    of their window (no padding values are invented).
    """
    if radius < 0:
        raise PreprocessError(f"median radius must be >= 0, got {radius}")
    if radius == 0:
        return cube
    v = cube.values.astype(np.float64)
    rows, cols, bands = v.shape
    size = 2 * radius + 1
    out = np.empty_like(v)
    padded = np.full((rows + 2 * radius, cols + 2 * radius), np.nan)
    stack = np.empty((size * size, rows, cols))
    # Stack every window offset, then take the NaN-ignoring median so the
    # clipped border windows shrink instead of borrowing padded values.
    # One band at a time keeps the working set small on large scenes.
    for b in range(bands):
        padded[radius : radius + rows, radius : radius + cols] = v[:, :, b]
        k = 0
        for dr in range(size):
            for dc in range(size):
                stack[k] = padded[dr : dr + rows, dc : dc + cols]
                k += 1
        out[:, :, b] = np.nanmedian(stack, axis=0)
    return SpectralCube(
        values=out.astype(np.float32), wavelengths=cube.wavelengths
    )


def median_normalize(x: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    """Divide each spectrum (last axis) by its median value."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] < 1:
        raise PreprocessError("cannot normalise an empty spectrum")
    med = np.median(x, axis=-1, keepdims=True)
    if np.any(med == 0):
        raise PreprocessError("zero median: degenerate pixel cannot be normalised")
    return x / med


def remove_bands(
    x: npt.NDArray[np.float64], removed: frozenset[int] | set[int]
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.int64]]:
    """Drop the listed band indices (last axis).

    Returns the reduced array and the survivor table mapping new band
    index -> original band index.
    """
    x = np.asarray(x)
    bands = x.shape[-1]
    removed = frozenset(removed)
    out_of_range = [b for b in removed if not 0 <= b < bands]
    if out_of_range:
        raise PreprocessError(
            f"removed bands {sorted(out_of_range)} outside [0, {bands})"
        )
    survivors = np.asarray(
        [b for b in range(bands) if b not in removed], dtype=np.int64
    )
    if survivors.size < 2:
        raise PreprocessError(
            f"removal leaves {survivors.size} of {bands} bands; need at least 2"
        )
    return x[..., survivors], survivors


def derivative(x: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    """First finite difference along the last axis (length shrinks by 1)."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] < 2:
        raise PreprocessError("derivative needs at least 2 bands")
    return np.diff(x, axis=-1)


def apply_chain(
    spectra: npt.NDArray[np.float64], config: PreprocessConfig
) -> tuple[npt.NDArray[np.float64], BandTranslation]:
    """Run the per-spectrum stages (normalise, remove, differentiate).

    The spatial median filter operates on cubes and is applied separately
    via :func:`preprocess_cube`; this entry point covers data that is
    already a flat (n, bands) table.
    """
    x = np.asarray(spectra, dtype=np.float64)
    if config.normalize:
        x = median_normalize(x)
    x, survivors = remove_bands(x, config.removed_bands)
    if config.derivative:
        x = derivative(x)
    return x, BandTranslation(survivors=survivors, derivative=config.derivative)


def preprocess_cube(
    cube: SpectralCube, config: PreprocessConfig
) -> tuple[SpectralCube, BandTranslation]:
    """Full chain on a cube: median filter, then the per-spectrum stages.

    Wavelengths are carried through: survivors keep theirs, derivative
    features take the midpoint of the differenced pair.
    """
    filtered = median_filter(cube, config.median_radius)
    flat = filtered.values.reshape(-1, filtered.bands).astype(np.float64)
    out, translation = apply_chain(flat, config)
    wl = cube.wavelengths
    if wl is not None:
        wl = wl[translation.survivors]
        if config.derivative:
            wl = 0.5 * (wl[:-1] + wl[1:])
    shaped = out.reshape(cube.rows, cube.cols, -1)
    return (
        SpectralCube(values=shaped.astype(np.float32), wavelengths=wl),
        translation,
    )
