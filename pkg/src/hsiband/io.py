"""On-disk formats: cubes, label maps, CSV pixel tables, suite manifests.

Binary layouts (all little-endian):

* cube:   ``HSCUBE v1 <rows> <cols> <bands>\\n`` then rows*cols*bands
  float32 values in (row, col, band) C order.
* labels: ``HSLABL v1 <rows> <cols>\\n`` then rows*cols uint16 values
  in row-major order.

The CSV interchange form is one pixel per line:
``row,col,label,v1,...,vB``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .data import ImageMeta, LabelMap, SceneImage, SpectralCube

CUBE_MAGIC = b"HSCUBE"
LABEL_MAGIC = b"HSLABL"
FORMAT_VERSION = b"v1"


class FormatError(ValueError):
    """Header or payload does not match the declared format."""


class TruncationError(FormatError):
    """Payload ends before the header-declared element count."""


def _read_header(raw: bytes, magic: bytes, n_dims: int, path: Path) -> tuple[list[int], int]:
    end = raw.find(b"\n")
    if end < 0 or end > 120:
        raise FormatError(f"{path}: missing header line")
    fields = raw[:end].split(b" ")
    if len(fields) != 2 + n_dims or fields[0] != magic:
        raise FormatError(f"{path}: bad header {raw[:end]!r}")
    if fields[1] != FORMAT_VERSION:
        raise FormatError(f"{path}: unsupported version {fields[1]!r}")
    try:
        dims = [int(f) for f in fields[2:]]
    except ValueError as exc:
        raise FormatError(f"{path}: non-integer dimension in header") from exc
    if any(d < 1 for d in dims):
        raise FormatError(f"{path}: dimensions must be positive, got {dims}")
    return dims, end + 1


def _read_payload(raw: bytes, offset: int, dtype: np.dtype, count: int, path: Path) -> np.ndarray:
    body = raw[offset:]
    expect = count * dtype.itemsize
    if len(body) < expect:
        raise TruncationError(
            f"{path}: expected {count} values ({expect} bytes), found {len(body)} bytes"
        )
    if len(body) > expect:
        raise FormatError(f"{path}: {len(body) - expect} trailing bytes after payload")
    return np.frombuffer(body, dtype=dtype, count=count)


def save_cube(cube: SpectralCube, path: str | Path) -> None:
    path = Path(path)
    header = b"%s %s %d %d %d\n" % (
        CUBE_MAGIC, FORMAT_VERSION, cube.rows, cube.cols, cube.bands,
    )
    payload = np.ascontiguousarray(cube.values, dtype="<f4").tobytes()
    path.write_bytes(header + payload)


def load_cube(path: str | Path) -> SpectralCube:
    path = Path(path)
    raw = path.read_bytes()
    (rows, cols, bands), offset = _read_header(raw, CUBE_MAGIC, 3, path)
    flat = _read_payload(raw, offset, np.dtype("<f4"), rows * cols * bands, path)
    return SpectralCube(values=flat.reshape(rows, cols, bands).copy())


def save_labels(labels: LabelMap, path: str | Path) -> None:
    path = Path(path)
    header = b"%s %s %d %d\n" % (LABEL_MAGIC, FORMAT_VERSION, labels.rows, labels.cols)
    payload = np.ascontiguousarray(labels.values, dtype="<u2").tobytes()
    path.write_bytes(header + payload)


def load_labels(path: str | Path) -> LabelMap:
    path = Path(path)
    raw = path.read_bytes()
    (rows, cols), offset = _read_header(raw, LABEL_MAGIC, 2, path)
    flat = _read_payload(raw, offset, np.dtype("<u2"), rows * cols, path)
    return LabelMap(values=flat.reshape(rows, cols).copy())


def save_csv(cube: SpectralCube, labels: LabelMap, path: str | Path) -> None:
    """Write one ``row,col,label,v1,...,vB`` line per pixel."""
    if (cube.rows, cube.cols) != (labels.rows, labels.cols):
        raise FormatError("cube and label map dimensions disagree")
    path = Path(path)
    with path.open("w", encoding="ascii") as fh:
        for r in range(cube.rows):
            for c in range(cube.cols):
                vals = ",".join(repr(float(v)) for v in cube.values[r, c])
                fh.write(f"{r},{c},{int(labels.values[r, c])},{vals}\n")


def load_csv(path: str | Path) -> tuple[SpectralCube, LabelMap]:
    """Rebuild a dense cube and label map from the CSV pixel table."""
    path = Path(path)
    rows_seen: dict[tuple[int, int], tuple[int, np.ndarray]] = {}
    bands = None
    with path.open("r", encoding="ascii") as fh:
        for ln, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) < 4:
                raise FormatError(f"{path}:{ln}: expected row,col,label,values...")
            try:
                r, c, label = int(parts[0]), int(parts[1]), int(parts[2])
                vals = np.asarray([float(p) for p in parts[3:]], dtype=np.float32)
            except ValueError as exc:
                raise FormatError(f"{path}:{ln}: unparsable field") from exc
            if bands is None:
                bands = vals.size
            elif vals.size != bands:
                raise FormatError(
                    f"{path}:{ln}: {vals.size} values, expected {bands}"
                )
            if r < 0 or c < 0 or label < 0:
                raise FormatError(f"{path}:{ln}: negative coordinate or label")
            rows_seen[(r, c)] = (label, vals)
    if not rows_seen:
        raise FormatError(f"{path}: no pixel rows")
    n_rows = max(r for r, _ in rows_seen) + 1
    n_cols = max(c for _, c in rows_seen) + 1
    if len(rows_seen) != n_rows * n_cols:
        raise TruncationError(
            f"{path}: {len(rows_seen)} pixels do not fill a {n_rows}x{n_cols} grid"
        )
    values = np.zeros((n_rows, n_cols, bands), dtype=np.float32)
    labels = np.zeros((n_rows, n_cols), dtype=np.uint16)
    for (r, c), (label, vals) in rows_seen.items():
        values[r, c] = vals
        labels[r, c] = label
    return SpectralCube(values=values), LabelMap(values=labels)


MANIFEST_NAME = "suite.json"


def write_suite(images: list[SceneImage], out_dir: str | Path) -> Path:
    """Store every image as a cube/label pair plus a JSON manifest."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for img in images:
        stem = img.meta.image_id
        save_cube(img.cube, out / f"{stem}.cube")
        save_labels(img.labels, out / f"{stem}.lbl")
        entries.append(
            {
                "image_id": img.meta.image_id,
                "scene": img.meta.scene,
                "day": img.meta.day,
                "cube": f"{stem}.cube",
                "labels": f"{stem}.lbl",
                "informative_bands": (
                    list(img.meta.informative_bands)
                    if img.meta.informative_bands is not None
                    else None
                ),
            }
        )
    manifest = out / MANIFEST_NAME
    manifest.write_text(json.dumps({"version": 1, "images": entries}, indent=2))
    return manifest


def read_suite(suite_dir: str | Path) -> list[SceneImage]:
    root = Path(suite_dir)
    manifest = root / MANIFEST_NAME
    if not manifest.is_file():
        raise FormatError(f"{manifest}: manifest not found")
    try:
        doc = json.loads(manifest.read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{manifest}: invalid JSON") from exc
    if doc.get("version") != 1 or "images" not in doc:
        raise FormatError(f"{manifest}: unsupported manifest layout")
    images = []
    for entry in doc["images"]:
        meta = ImageMeta(
            image_id=entry["image_id"],
            scene=entry["scene"],
            day=entry["day"],
            informative_bands=(
                tuple(entry["informative_bands"])
                if entry.get("informative_bands") is not None
                else None
            ),
        )
        cube = load_cube(root / entry["cube"])
        labels = load_labels(root / entry["labels"])
        images.append(SceneImage(cube=cube, labels=labels, meta=meta))
    return images
