"""Oriented dense matrices.

A :class:`Matrix` stores its elements as a sequence of equally long
constituent vectors. A row-oriented matrix keeps ``rows`` vectors of length
``cols``; a column-oriented one keeps ``cols`` vectors of length ``rows``.
Internally the vectors are the rows of a C-contiguous float64 array.

Multiplication only accepts a row-oriented left operand and a
column-oriented right operand, so every dot product runs over two
contiguous vectors. Callers convert explicitly with :func:`change_orientation`
(a full copy) or :func:`transpose_change` (free).

Matrices are treated as immutable values; no operation writes into an
argument.
"""

from __future__ import annotations

from enum import Enum

import numpy as np


class Orientation(Enum):
    ROW = "row"
    COL = "col"

    def flipped(self) -> "Orientation":
        return Orientation.COL if self is Orientation.ROW else Orientation.ROW


ROW = Orientation.ROW
COL = Orientation.COL


class DimensionError(ValueError):
    """Operand shapes disagree."""


class OrientationError(ValueError):
    """Operand orientations are not what the operation requires."""


class Matrix:
    __slots__ = ("orientation", "rows", "cols", "data")

    def __init__(self, data: np.ndarray, orientation: Orientation):
        data = np.ascontiguousarray(data, dtype=np.float64)
        if data.ndim != 2:
            raise DimensionError(f"constituent data must be 2-D, got ndim={data.ndim}")
        n_vec, vec_len = data.shape
        if n_vec < 1 or vec_len < 1:
            raise DimensionError(f"empty matrix {data.shape}")
        self.orientation = orientation
        self.data = data
        if orientation is ROW:
            self.rows, self.cols = n_vec, vec_len
        else:
            self.rows, self.cols = vec_len, n_vec

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def to_array(self) -> np.ndarray:
        """Logical (rows, cols) array; a copy, never a view of ``data``."""
        if self.orientation is ROW:
            return self.data.copy()
        return self.data.T.copy()

    def __getitem__(self, idx: tuple[int, int]) -> float:
        i, j = idx
        if self.orientation is ROW:
            return float(self.data[i, j])
        return float(self.data[j, i])

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols}, {self.orientation.value})"

    def is_valid(self) -> bool:
        n_vec, vec_len = self.data.shape
        expected = self.rows if self.orientation is ROW else self.cols
        return (
            self.rows >= 1
            and self.cols >= 1
            and n_vec == expected
            and n_vec * vec_len == self.rows * self.cols
        )


def _from_logical(arr: np.ndarray, orientation: Orientation) -> Matrix:
    if orientation is ROW:
        return Matrix(arr, ROW)
    return Matrix(np.ascontiguousarray(arr.T), COL)


def constant(value: float, rows: int, cols: int, orientation: Orientation = ROW) -> Matrix:
    if rows < 1 or cols < 1:
        raise DimensionError(f"invalid shape ({rows}, {cols})")
    return _from_logical(np.full((rows, cols), float(value)), orientation)


def zeros(rows: int, cols: int, orientation: Orientation = ROW) -> Matrix:
    return constant(0.0, rows, cols, orientation)


def from_flat(values, rows: int, cols: int, orientation: Orientation = ROW) -> Matrix:
    """Build a matrix from a row-major flat sequence of ``rows * cols`` values."""
    arr = np.asarray(values, dtype=np.float64).ravel()
    if rows < 1 or cols < 1 or arr.size != rows * cols:
        raise DimensionError(f"{arr.size} values cannot fill a {rows}x{cols} matrix")
    return _from_logical(arr.reshape(rows, cols), orientation)


def from_vectors(vectors, rows: int, cols: int, orientation: Orientation = ROW) -> Matrix:
    """Build a matrix whose constituent vectors (in ``orientation``) are ``vectors``.

    For ``ROW`` each vector is one row; for ``COL`` each vector is one column.
    """
    vecs = [np.asarray(v, dtype=np.float64) for v in vectors]
    n_vec, vec_len = (rows, cols) if orientation is ROW else (cols, rows)
    if len(vecs) != n_vec or any(v.shape != (vec_len,) for v in vecs):
        raise DimensionError(
            f"expected {n_vec} vectors of length {vec_len} for a {rows}x{cols} "
            f"{orientation.value}-oriented matrix"
        )
    return Matrix(np.stack(vecs), orientation)


def uniform(rng, max_abs: float, rows: int, cols: int, orientation: Orientation = ROW) -> Matrix:
    """Elements drawn independently from U[-max_abs, +max_abs].

    Draws are consumed in row-major logical order from ``rng``.
    """
    if max_abs < 0:
        raise ValueError("max_abs must be non-negative")
    if rows < 1 or cols < 1:
        raise DimensionError(f"invalid shape ({rows}, {cols})")
    u = rng.uniform_array(rows * cols)
    return _from_logical(((2.0 * u - 1.0) * max_abs).reshape(rows, cols), orientation)


def identity(n: int, orientation: Orientation = ROW) -> Matrix:
    return _from_logical(np.eye(n), orientation)


def transpose_change(m: Matrix) -> Matrix:
    """Transpose by reinterpreting the constituent vectors; constant cost."""
    return Matrix(m.data, m.orientation.flipped())


def transpose(m: Matrix) -> Matrix:
    """Transpose keeping the storage orientation; rebuilds the data."""
    return Matrix(m.data.T, m.orientation)


def change_orientation(m: Matrix) -> Matrix:
    """Same logical matrix stored the other way round."""
    return Matrix(m.data.T, m.orientation.flipped())


def map(f, m: Matrix) -> Matrix:  # noqa: A001 - mirrors the kernel vocabulary
    """Apply ``f`` elementwise.

    ``f`` receives the whole constituent array, so it must act elementwise on
    numpy arrays (any arithmetic lambda or numpy ufunc qualifies).
    """
    out = np.asarray(f(m.data), dtype=np.float64)
    if out.shape != m.data.shape:
        out = np.broadcast_to(out, m.data.shape)
    return Matrix(out, m.orientation)


def _check_same(a: Matrix, b: Matrix) -> None:
    if a.orientation is not b.orientation:
        raise OrientationError(
            f"orientation mismatch: {a.orientation.value} vs {b.orientation.value}"
        )
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")


def merge(f, a: Matrix, b: Matrix) -> Matrix:
    """Elementwise ``f(a_ij, b_ij)``; both operands must agree in shape and orientation."""
    _check_same(a, b)
    return Matrix(f(a.data, b.data), a.orientation)


def broadcast_rowvector(f, v, m: Matrix) -> Matrix:
    """Combine ``v`` with every constituent vector ``w`` as ``f(v, w)``."""
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (m.data.shape[1],):
        raise DimensionError(
            f"vector of length {v.size} does not match constituent length {m.data.shape[1]}"
        )
    return Matrix(f(v[np.newaxis, :], m.data), m.orientation)


def broadcast_scalars(f, s, m: Matrix) -> Matrix:
    """Replace the i-th constituent vector ``w`` by ``f(s[i], w)`` elementwise."""
    s = np.asarray(s, dtype=np.float64)
    if s.shape != (m.data.shape[0],):
        raise DimensionError(
            f"{s.size} scalars for {m.data.shape[0]} constituent vectors"
        )
    return Matrix(f(s[:, np.newaxis], m.data), m.orientation)


def fold_per_vector(f, init, m: Matrix) -> np.ndarray:
    """Left fold ``acc = f(x, acc)`` over each constituent vector.

    Numpy binary ufuncs take a vectorised path (``np.add``, ``np.maximum``...);
    any other callable is folded element by element.
    """
    if isinstance(f, np.ufunc) and f.nin == 2:
        return f.reduce(m.data, axis=1, initial=init)
    out = []
    for vec in m.data:
        acc = init
        for x in vec:
            acc = f(float(x), acc)
        out.append(acc)
    return np.asarray(out)


def sum_per_vector(m: Matrix) -> np.ndarray:
    return np.add.reduce(m.data, axis=1)


def max_per_vector(m: Matrix) -> np.ndarray:
    return np.maximum.reduce(m.data, axis=1)


def multiply(a: Matrix, b: Matrix, result: Orientation = ROW) -> Matrix:
    """Matrix product ``a @ b`` for a row-oriented ``a`` and column-oriented ``b``."""
    if a.orientation is not ROW or b.orientation is not COL:
        raise OrientationError(
            f"multiply needs (row, col) operands, got "
            f"({a.orientation.value}, {b.orientation.value})"
        )
    if a.cols != b.rows:
        raise DimensionError(f"inner dimensions differ: {a.shape} x {b.shape}")
    prod = a.data @ b.data.T
    if result is ROW:
        return Matrix(prod, ROW)
    return Matrix(prod.T, COL)
