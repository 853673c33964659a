"""Seeded synthetic scene generator shaped like the real acquisition suite.

Scenes hold rectangular class blobs over one background (scene "F", a
near-flat white panel) or several tiled backgrounds (scene "E").  Each
class owns a spectral endmember built from Gaussian bumps, including a
close "signature" bump pair whose covered bands form the exported
informative-band ground truth.  Pixels linearly mix their class endmember
with the local background, get modulated by a smooth illumination field,
and receive i.i.d. Gaussian noise.  Everything derives from explicit
seeds, so regeneration is bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
import numpy.typing as npt

from .data import (
    DAY_TOKENS,
    SCENE_KINDS,
    ImageMeta,
    LabelMap,
    SceneImage,
    SpectralCube,
    day_value,
)
from .seeding import derive_seed

# F for all four days, E skips the re-imaged "1a" variant.
SUITE_LAYOUT = (
    ("F", "1"), ("F", "1a"), ("F", "7"), ("F", "21"),
    ("E", "1"), ("E", "7"), ("E", "21"),
)

# Bumps are cut to exactly zero beyond this many sigmas, giving endmembers
# compact support so informative-band ground truth is literal.
BUMP_CUTOFF_SIGMAS = 4.0


@dataclass(frozen=True)
class SceneRecipe:
    bands: int = 128
    class_ids: tuple[int, ...] = (1, 2, 3, 5, 6, 7)
    rows: int = 64
    cols: int = 64
    scene: str = "F"
    day: str = "1"
    endmember_seed: int = 0  # shared across a suite so days and scenes align
    n_backgrounds: int = 1  # scene F: exactly 1; scene E: at least 3
    alpha_range: tuple[float, float] = (0.5, 0.9)
    illumination_smoothness: float = 16.0  # correlation length in pixels
    illumination_contrast: float = 0.15
    noise_std: float = 0.01
    drift: float = 0.25  # signature-center shift per day past day 1, in bands
    bump_count_range: tuple[int, int] = (2, 4)
    bump_sigma_range: tuple[float, float] = (1.5, 3.0)
    baseline_range: tuple[float, float] = (0.2, 0.4)
    signature_gap: float = 6.0  # spacing of the paired signature bumps, in bands
    background_contrast: float = 1.0

    def __post_init__(self) -> None:
        if self.bands < 16:
            raise ValueError(f"bands must be >= 16, got {self.bands}")
        if len(self.class_ids) < 2 or len(set(self.class_ids)) != len(self.class_ids):
            raise ValueError(f"need >= 2 distinct class ids, got {self.class_ids}")
        if any(c < 1 for c in self.class_ids):
            raise ValueError("class ids must be >= 1 (0 marks background)")
        if self.rows < 8 or self.cols < 8:
            raise ValueError(f"scene must be at least 8x8, got {self.rows}x{self.cols}")
        if self.scene not in SCENE_KINDS:
            raise ValueError(f"scene must be one of {SCENE_KINDS}, got {self.scene!r}")
        if self.day not in DAY_TOKENS:
            raise ValueError(f"day must be one of {DAY_TOKENS}, got {self.day!r}")
        if self.scene == "F" and self.n_backgrounds != 1:
            raise ValueError("scene F uses exactly one background")
        if self.scene == "E" and self.n_backgrounds < 3:
            raise ValueError("scene E tiles at least 3 backgrounds")
        lo, hi = self.alpha_range
        if not 0.0 < lo <= hi <= 1.0:
            raise ValueError(f"alpha range must satisfy 0 < lo <= hi <= 1, got {self.alpha_range}")
        if self.noise_std < 0:
            raise ValueError(f"noise std must be >= 0, got {self.noise_std}")
        if self.illumination_contrast < 0 or self.illumination_smoothness <= 0:
            raise ValueError("illumination field needs contrast >= 0 and smoothness > 0")
        b_lo, b_hi = self.bump_count_range
        if not 2 <= b_lo <= b_hi:
            raise ValueError(f"bump counts must be >= 2, got {self.bump_count_range}")
        s_lo, s_hi = self.bump_sigma_range
        if not 0 < s_lo <= s_hi:
            raise ValueError(f"bump sigmas must be positive, got {self.bump_sigma_range}")
        base_lo, base_hi = self.baseline_range
        if not 0 <= base_lo <= base_hi:
            raise ValueError(f"baseline range must be non-negative, got {self.baseline_range}")
        if self.signature_gap < 0 or self.drift < 0:
            raise ValueError("signature gap and drift must be >= 0")

    @property
    def image_id(self) -> str:
        return f"{self.scene}{self.day}"


@dataclass(frozen=True)
class Endmembers:
    """Per-class spectra plus the signature-band ground truth."""

    class_ids: tuple[int, ...]
    spectra: npt.NDArray[np.float64]  # (n_classes, bands)
    informative: dict[int, tuple[int, ...]]  # class id -> signature band indices

    def informative_union(self) -> tuple[int, ...]:
        out: set[int] = set()
        for bands in self.informative.values():
            out.update(bands)
        return tuple(sorted(out))


def blob_shape(recipe: SceneRecipe) -> tuple[int, int]:
    """Deterministic blob height/width: half of each class's layout slot."""
    k = len(recipe.class_ids)
    grid_cols = math.ceil(math.sqrt(k))
    grid_rows = math.ceil(k / grid_cols)
    slot_h = recipe.rows // grid_rows
    slot_w = recipe.cols // grid_cols
    h, w = max(1, slot_h // 2), max(1, slot_w // 2)
    return h, w


def generate_endmembers(recipe: SceneRecipe, seed: int | None = None) -> Endmembers:
    """Bump-sum spectra with day-drifted centers, one zone per class.

    All of a class's bumps stay inside its own stretch of the band axis
    and are truncated to zero beyond BUMP_CUTOFF_SIGMAS, so classes in
    different zones have exactly disjoint signal support.  The first two
    bumps form the signature pair; every band inside their truncation
    support is exported as informative ground truth.
    """
    base_seed = recipe.endmember_seed if seed is None else seed
    n = len(recipe.class_ids)
    usable_lo, usable_hi = 0.06 * recipe.bands, 0.94 * recipe.bands
    zone_width = (usable_hi - usable_lo) / n
    shift = recipe.drift * (day_value(recipe.day) - 1)
    x = np.arange(recipe.bands, dtype=np.float64)

    spectra = np.empty((n, recipe.bands))
    informative: dict[int, tuple[int, ...]] = {}
    for i, class_id in enumerate(sorted(recipe.class_ids)):
        rng = np.random.default_rng(derive_seed(base_seed, "endmember", class_id))
        zone_lo = usable_lo + i * zone_width
        baseline = rng.uniform(*recipe.baseline_range)
        n_bumps = int(rng.integers(recipe.bump_count_range[0],
                                   recipe.bump_count_range[1] + 1))
        # Whole-band signature centers keep narrow bumps on a single band.
        sig_center = float(round(zone_lo + rng.uniform(0.35, 0.65) * zone_width))
        centers = [sig_center - recipe.signature_gap / 2.0,
                   sig_center + recipe.signature_gap / 2.0]
        sigmas = [rng.uniform(*recipe.bump_sigma_range) for _ in range(2)]
        amps = [rng.uniform(0.5, 1.0) for _ in range(2)]
        for _ in range(n_bumps - 2):
            centers.append(zone_lo + rng.uniform(0.1, 0.9) * zone_width)
            sigmas.append(rng.uniform(*recipe.bump_sigma_range))
            amps.append(rng.uniform(0.2, 0.6))

        spectrum = np.full(recipe.bands, baseline)
        marked: set[int] = set()
        for j, (c, s, a) in enumerate(zip(centers, sigmas, amps)):
            c = c + shift
            reach = BUMP_CUTOFF_SIGMAS * s
            bump = a * np.exp(-((x - c) ** 2) / (2.0 * s * s))
            bump[np.abs(x - c) > reach] = 0.0
            spectrum += bump
            if j < 2:  # signature pair defines the informative bands
                lo = max(0, int(math.ceil(c - reach)))
                hi = min(recipe.bands - 1, int(math.floor(c + reach)))
                marked.update(range(lo, hi + 1))
        spectra[i] = spectrum
        informative[class_id] = tuple(sorted(marked))
    return Endmembers(
        class_ids=tuple(sorted(recipe.class_ids)), spectra=spectra,
        informative=informative,
    )


def _background_spectrum(
    rng: np.random.Generator, bands: int, scene: str, contrast: float
) -> np.ndarray:
    x = np.arange(bands, dtype=np.float64)
    if scene == "F":
        # Near-flat white panel with a faint broad ripple.
        level = rng.uniform(0.7, 0.85)
        phase = rng.uniform(0.0, 2.0 * np.pi)
        cycles = rng.uniform(0.5, 1.5)
        return level + 0.02 * contrast * np.sin(2.0 * np.pi * cycles * x / bands + phase)
    # Structured material: broad humps over a darker base.
    spectrum = np.full(bands, rng.uniform(0.25, 0.6))
    for _ in range(int(rng.integers(2, 4))):
        c = rng.uniform(0.0, bands)
        s = rng.uniform(bands / 8.0, bands / 4.0)
        a = rng.uniform(0.1, 0.35) * contrast
        spectrum += a * np.exp(-((x - c) ** 2) / (2.0 * s * s))
    return np.clip(spectrum, 0.05, None)


def _smooth_field(
    rng: np.random.Generator, rows: int, cols: int, cell: float, contrast: float
) -> np.ndarray:
    """Bilinear upsample of coarse noise: smooth, mean ~1, strictly positive."""
    if contrast == 0.0:
        return np.ones((rows, cols))
    grid_r = max(2, math.ceil(rows / cell) + 1)
    grid_c = max(2, math.ceil(cols / cell) + 1)
    coarse = rng.standard_normal((grid_r, grid_c))
    ri = np.linspace(0.0, grid_r - 1.0, rows)
    ci = np.linspace(0.0, grid_c - 1.0, cols)
    r0 = np.minimum(ri.astype(int), grid_r - 2)
    c0 = np.minimum(ci.astype(int), grid_c - 2)
    fr = (ri - r0)[:, None]
    fc = (ci - c0)[None, :]
    field = (
        coarse[np.ix_(r0, c0)] * (1 - fr) * (1 - fc)
        + coarse[np.ix_(r0 + 1, c0)] * fr * (1 - fc)
        + coarse[np.ix_(r0, c0 + 1)] * (1 - fr) * fc
        + coarse[np.ix_(r0 + 1, c0 + 1)] * fr * fc
    )
    peak = np.max(np.abs(field))
    if peak > 0:
        field = field / peak
    return np.maximum(1.0 + contrast * field, 0.05)


def _place_blobs(
    recipe: SceneRecipe, rng: np.random.Generator
) -> npt.NDArray[np.uint16]:
    """One jittered rectangle per class inside its own layout slot."""
    labels = np.zeros((recipe.rows, recipe.cols), dtype=np.uint16)
    k = len(recipe.class_ids)
    grid_cols = math.ceil(math.sqrt(k))
    grid_rows = math.ceil(k / grid_cols)
    slot_h = recipe.rows // grid_rows
    slot_w = recipe.cols // grid_cols
    h, w = blob_shape(recipe)
    for i, class_id in enumerate(sorted(recipe.class_ids)):
        sr = (i // grid_cols) * slot_h
        sc = (i % grid_cols) * slot_w
        r = sr + int(rng.integers(slot_h - h + 1))
        c = sc + int(rng.integers(slot_w - w + 1))
        labels[r : r + h, c : c + w] = class_id
    return labels


def generate_scene(recipe: SceneRecipe, seed: int) -> SceneImage:
    """One cube + label map: mixed endmembers over tiled backgrounds."""
    endmembers = generate_endmembers(recipe)
    rng = np.random.default_rng(seed)
    labels = _place_blobs(recipe, rng)
    backgrounds = np.stack(
        [
            _background_spectrum(rng, recipe.bands, recipe.scene,
                                 recipe.background_contrast)
            for _ in range(recipe.n_backgrounds)
        ]
    )
    # Vertical strips assign each column one background.
    region = (np.arange(recipe.cols) * recipe.n_backgrounds) // recipe.cols
    values = backgrounds[region][None, :, :] * np.ones((recipe.rows, 1, 1))

    rr, cc = np.nonzero(labels)
    class_row = np.searchsorted(np.asarray(endmembers.class_ids), labels[rr, cc])
    alpha = rng.uniform(*recipe.alpha_range, size=rr.size)[:, None]
    values[rr, cc] = (
        alpha * endmembers.spectra[class_row]
        + (1.0 - alpha) * backgrounds[region[cc]]
    )

    illumination = _smooth_field(
        rng, recipe.rows, recipe.cols,
        recipe.illumination_smoothness, recipe.illumination_contrast,
    )
    values = values * illumination[:, :, None]
    if recipe.noise_std > 0:
        values = values + rng.normal(0.0, recipe.noise_std, size=values.shape)

    wavelengths = np.linspace(400.0, 1000.0, recipe.bands)
    meta = ImageMeta(
        image_id=recipe.image_id, scene=recipe.scene, day=recipe.day,
        informative_bands=endmembers.informative_union(),
    )
    return SceneImage(
        cube=SpectralCube(values=values.astype(np.float32), wavelengths=wavelengths),
        labels=LabelMap(values=labels),
        meta=meta,
    )


def generate_suite(
    recipe: SceneRecipe, seed: int, comparison_backgrounds: int = 3
) -> list[SceneImage]:
    """Four F images (days 1, 1a, 7, 21) and three E images (1, 7, 21).

    All images share the recipe's endmember seed, so same-day scenes have
    identical class spectra; backgrounds, blob layout, illumination, and
    noise are per-image.
    """
    images = []
    for scene, day in SUITE_LAYOUT:
        img_recipe = replace(
            recipe, scene=scene, day=day,
            n_backgrounds=1 if scene == "F" else comparison_backgrounds,
        )
        images.append(generate_scene(img_recipe, derive_seed(seed, "image", scene, day)))
    return images
