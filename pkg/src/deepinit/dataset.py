"""TinyDigits synthesis and the CSV batch format.

TinyDigits images are 10x10: an 8x8 hand-drawn digit pattern padded with a
one-pixel zero border, then elastically deformed, rotated and rescaled. The
base patterns ship with the package (``deepinit/patterns/digit<d>_v<k>.txt``,
8 lines of 8 whitespace-separated intensities in [0, 1]).

Data files hold one sample per line as comma-separated reals; label files
hold one-hot rows in the same layout.
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import matrix as mx
from .matrix import ROW, Matrix
from .rng import RngState

N_CLASSES = 10
PATTERN_SIZE = 8
IMAGE_SIZE = PATTERN_SIZE + 2


class InputError(Exception):
    """A data file ended before the requested number of lines."""


class ParseError(ValueError):
    """A data file line could not be parsed."""

    def __init__(self, path, lineno: int, msg: str):
        super().__init__(f"{path}:{lineno}: {msg}")
        self.path = path
        self.lineno = lineno


@dataclass(frozen=True)
class DigitPattern:
    digit: int
    grid: np.ndarray  # 8x8 in [0, 1]
    name: str = ""

    def __post_init__(self):
        g = np.clip(np.asarray(self.grid, dtype=np.float64), 0.0, 1.0)
        if g.shape != (PATTERN_SIZE, PATTERN_SIZE):
            raise ValueError(f"pattern grid must be 8x8, got {g.shape}")
        if not np.any(g > 0):
            raise ValueError("pattern has no lit pixel")
        if not 0 <= self.digit < N_CLASSES:
            raise ValueError(f"digit {self.digit} out of range")
        object.__setattr__(self, "grid", g)


@dataclass(frozen=True)
class DeformParams:
    alpha: float = 3.0
    sigma: float = 7.0
    beta: float = math.pi / 12
    gamma: float = 15.0

    def __post_init__(self):
        if self.alpha < 0 or self.sigma <= 0 or self.beta < 0 or not 0 <= self.gamma < 100:
            raise ValueError(f"invalid deformation parameters {self}")


@dataclass
class Dataset:
    inputs: list[Matrix]
    targets: list[Matrix]
    class_counts: np.ndarray = field(default_factory=lambda: np.zeros(N_CLASSES, dtype=int))

    @property
    def n_samples(self) -> int:
        return sum(m.rows for m in self.inputs)


_PATTERN_NAME = re.compile(r"digit(\d)_v(\d+)\.txt$")


def parse_pattern(text: str, digit: int, name: str = "") -> DigitPattern:
    rows = [line.split() for line in text.splitlines() if line.strip()]
    if len(rows) != PATTERN_SIZE or any(len(r) != PATTERN_SIZE for r in rows):
        raise ValueError(f"pattern {name or digit} is not 8 rows of 8 values")
    return DigitPattern(digit, np.array([[float(v) for v in r] for r in rows]), name)


def load_patterns(directory: str | os.PathLike | None = None) -> list[DigitPattern]:
    """Load ``digit<d>_v<k>.txt`` files, sorted by (digit, variant).

    Without ``directory`` the patterns bundled with the package are used.
    """
    if directory is None:
        files = [f for f in resources.files("deepinit").joinpath("patterns").iterdir()]
    else:
        files = list(Path(directory).iterdir())
    found = []
    for f in files:
        m = _PATTERN_NAME.search(f.name)
        if m:
            d, v = int(m.group(1)), int(m.group(2))
            found.append(((d, v), parse_pattern(f.read_text(), d, f.name)))
    found.sort(key=lambda item: item[0])
    return [p for _, p in found]


def pad_pattern(p: DigitPattern) -> np.ndarray:
    img = np.zeros((IMAGE_SIZE, IMAGE_SIZE))
    img[1:-1, 1:-1] = p.grid
    return img


def gaussian_kernel(sigma: float) -> np.ndarray:
    """1-D Gaussian of std ``sigma`` truncated at radius ceil(3 sigma), summing to 1."""
    r = math.ceil(3.0 * sigma)
    k = np.exp(-0.5 * (np.arange(-r, r + 1) / sigma) ** 2)
    return k / k.sum()


def gaussian_smooth(field: np.ndarray, sigma: float) -> np.ndarray:
    """2-D Gaussian blur with zero padding, same output size."""
    k = gaussian_kernel(sigma)
    r = len(k) // 2

    def conv_matrix(n):
        idx = np.arange(n)
        off = idx[:, None] - idx[None, :]
        return np.where(np.abs(off) <= r, k[np.clip(off + r, 0, 2 * r)], 0.0)

    rows, cols = field.shape
    return conv_matrix(rows) @ field @ conv_matrix(cols).T


def bilinear_sample(img: np.ndarray, y: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Sample ``img`` at fractional (y, x); reads outside the image are 0."""
    h, w = img.shape
    y0 = np.floor(y).astype(int)
    x0 = np.floor(x).astype(int)
    fy = y - y0
    fx = x - x0
    out = np.zeros(y.shape)
    for dy, wy in ((0, 1.0 - fy), (1, fy)):
        for dx, wx in ((0, 1.0 - fx), (1, fx)):
            yy, xx = y0 + dy, x0 + dx
            inside = (yy >= 0) & (yy < h) & (xx >= 0) & (xx < w)
            vals = np.where(inside, img[np.clip(yy, 0, h - 1), np.clip(xx, 0, w - 1)], 0.0)
            out += wy * wx * vals
    return out


def displacement_fields(state: RngState, shape, params: DeformParams) -> tuple[np.ndarray, np.ndarray]:
    n = shape[0] * shape[1]
    dx = 2.0 * state.uniform_array(n).reshape(shape) - 1.0
    dy = 2.0 * state.uniform_array(n).reshape(shape) - 1.0
    return (
        params.alpha * gaussian_smooth(dx, params.sigma),
        params.alpha * gaussian_smooth(dy, params.sigma),
    )


def elastic_deform(state: RngState, img: np.ndarray, params: DeformParams) -> np.ndarray:
    """Elastic distortion composed with a random rotation and axis scalings.

    Random draws, in order: the x and y displacement fields, the rotation
    angle, the horizontal and the vertical scale. Output pixel ``p`` reads
    the source at ``c + S^-1 R^-1 (p - c) + d(p)`` (``c`` the image centre)
    with one bilinear resample, and is clamped to [0, 1].
    """
    img = np.asarray(img, dtype=np.float64)
    h, w = img.shape
    dx, dy = displacement_fields(state, img.shape, params)
    theta = params.beta * (2.0 * state.uniform() - 1.0)
    g = params.gamma / 100.0
    sx = 1.0 + g * (2.0 * state.uniform() - 1.0)
    sy = 1.0 + g * (2.0 * state.uniform() - 1.0)

    cy, cx = (h - 1) / 2.0, (w - 1) / 2.0
    yy, xx = np.meshgrid(np.arange(h, dtype=float), np.arange(w, dtype=float), indexing="ij")
    u, v = xx - cx, yy - cy
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    src_x = cx + (cos_t * u + sin_t * v) / sx + dx
    src_y = cy + (-sin_t * u + cos_t * v) / sy + dy
    return np.clip(bilinear_sample(img, src_y, src_x), 0.0, 1.0)


def one_hot(labels, n_classes: int = N_CLASSES) -> np.ndarray:
    labels = np.asarray(labels, dtype=int)
    out = np.zeros((labels.size, n_classes))
    out[np.arange(labels.size), labels] = 1.0
    return out


def generate_tinydigits(
    state: RngState,
    patterns,
    n_per_class: int,
    params: DeformParams = DeformParams(),
) -> tuple[np.ndarray, np.ndarray]:
    """``n_per_class`` deformed images per digit, globally shuffled.

    Returns ``(images, labels)``: an ``N x 100`` array of row-major
    flattened images and the matching ``N x 10`` one-hot array.
    """
    by_class: dict[int, list[DigitPattern]] = {d: [] for d in range(N_CLASSES)}
    for p in patterns:
        by_class[p.digit].append(p)
    missing = [d for d, ps in by_class.items() if not ps]
    if missing:
        raise ValueError(f"no pattern for digit(s) {missing}")
    if n_per_class < 1:
        raise ValueError("n_per_class must be >= 1")

    images, labels = [], []
    for d in range(N_CLASSES):
        padded = [pad_pattern(p) for p in by_class[d]]
        for i in range(n_per_class):
            images.append(elastic_deform(state, padded[i % len(padded)], params).ravel())
            labels.append(d)
    order = state.permutation(len(images))
    return np.array(images)[order], one_hot(labels)[order]


def to_batches(images, labels, batchsize: int) -> Dataset:
    images = np.asarray(images, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    if len(images) != len(labels) or len(images) == 0:
        raise ValueError("images and labels must be non-empty and equally long")
    if len(images) % batchsize:
        raise ValueError(f"{len(images)} samples do not split into batches of {batchsize}")
    n = len(images) // batchsize
    return Dataset(
        inputs=[Matrix(images[i * batchsize:(i + 1) * batchsize], ROW) for i in range(n)],
        targets=[Matrix(labels[i * batchsize:(i + 1) * batchsize], ROW) for i in range(n)],
        class_counts=labels.sum(axis=0).astype(int),
    )


def _format_line(values) -> str:
    return ", ".join(repr(float(v)) for v in values) + "\n"


def write_csv(images, labels, data_path, labels_path) -> None:
    """Write samples and labels as one comma-separated line per sample."""
    images = np.asarray(images, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    if images.ndim != 2 or labels.ndim != 2 or len(images) == 0:
        raise ValueError("refusing to write an empty dataset")
    if len(images) != len(labels):
        raise ValueError(f"{len(images)} samples vs {len(labels)} labels")
    for path, rows in ((data_path, images), (labels_path, labels)):
        try:
            with open(path, "w") as fh:
                fh.writelines(_format_line(r) for r in rows)
        except OSError as e:
            raise OSError(f"cannot write {path}: {e}") from e


def parse_line(line: str, n_atts: int | None = None, path="<data>", lineno: int = 0) -> list[float]:
    """Split on commas (with or without following spaces) and parse reals."""
    tokens = [t.strip() for t in line.strip().split(",")]
    try:
        values = [float(t) for t in tokens]
    except ValueError:
        bad = next(t for t in tokens if not _is_real(t))
        raise ParseError(path, lineno, f"malformed number {bad!r}") from None
    if n_atts is not None and len(values) != n_atts:
        raise ParseError(path, lineno, f"expected {n_atts} fields, found {len(values)}")
    return values


def _is_real(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def read_batches(path, n_atts: int, batchsize: int, n_batches: int) -> list[Matrix]:
    """Read ``n_batches`` consecutive ``batchsize x n_atts`` row-oriented batches.

    Blank lines are skipped. Lines beyond the requested count are ignored.
    """
    needed = batchsize * n_batches
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            if len(rows) == needed:
                break
            if not line.strip():
                continue
            rows.append(parse_line(line, n_atts, path, lineno))
    if len(rows) < needed:
        raise InputError(
            f"{path}: expected {needed} lines ({n_batches} batches of {batchsize}), found {len(rows)}"
        )
    arr = np.array(rows, dtype=np.float64)
    return [mx.Matrix(arr[i * batchsize:(i + 1) * batchsize], ROW) for i in range(n_batches)]


def read_dataset(data_path, labels_path, n_atts: int, n_classes: int, batchsize: int, n_batches: int) -> Dataset:
    inputs = read_batches(data_path, n_atts, batchsize, n_batches)
    targets = read_batches(labels_path, n_classes, batchsize, n_batches)
    counts = sum(t.data.sum(axis=0) for t in targets).astype(int)
    return Dataset(inputs, targets, counts)
