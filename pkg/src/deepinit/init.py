"""Weight initialization schemes.

Every scheme returns a :class:`LayerInit` holding an ``n_in x n_out``
column-oriented weight matrix (one constituent vector of incoming weights per
output unit) and a zero bias vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import matrix as mx
from .matrix import COL, DimensionError, Matrix
from .rng import RngState

SPARSE3_C1 = 0.456463462775
SPARSE3_C2 = -1.43515478736
SPARSE_K = 15


@dataclass(frozen=True)
class InitScheme:
    kind: str  # "standard" | "normalized" | "sparse" | "sparse3"
    k: int = SPARSE_K
    c1: float = SPARSE3_C1
    c2: float = SPARSE3_C2

    def __post_init__(self):
        if self.kind not in ("standard", "normalized", "sparse", "sparse3"):
            raise ValueError(f"unknown init scheme {self.kind!r}")
        if self.k < 1:
            raise ValueError("k must be >= 1")

    @property
    def label(self) -> str:
        if self.kind == "sparse":
            return f"sparse-k{self.k}"
        if self.kind == "sparse3" and (self.c1, self.c2) != (SPARSE3_C1, SPARSE3_C2):
            return f"sparse3-c1{self.c1:g}-c2{self.c2:g}"
        return self.kind

    @classmethod
    def parse(cls, text: str) -> "InitScheme":
        """Parse ``standard``, ``normalized``, ``sparse[:k]`` or ``sparse3[:c1,c2]``."""
        name, _, arg = text.strip().partition(":")
        name = name.lower().replace("-", "")
        if name in ("standard", "normal"):
            return cls("standard")
        if name == "normalized":
            return cls("normalized")
        if name == "sparse":
            return cls("sparse", k=int(arg)) if arg else cls("sparse")
        if name == "sparse3":
            if arg:
                c1, c2 = (float(x) for x in arg.split(","))
                return cls("sparse3", c1=c1, c2=c2)
            return cls("sparse3")
        raise ValueError(f"unknown init scheme {text!r}")


@dataclass(frozen=True)
class LayerInit:
    W: Matrix
    B: np.ndarray


def _zero_bias(n_out: int) -> np.ndarray:
    return np.zeros(n_out)


def _check_sizes(n_in: int, n_out: int) -> None:
    if n_in < 1 or n_out < 1:
        raise ValueError(f"layer sizes must be >= 1, got ({n_in}, {n_out})")


def init_standard(state: RngState, n_in: int, n_out: int) -> LayerInit:
    """Uniform weights in [-1/sqrt(n_in), 1/sqrt(n_in)]."""
    _check_sizes(n_in, n_out)
    W = mx.uniform(state, 1.0 / math.sqrt(n_in), n_in, n_out, COL)
    return LayerInit(W, _zero_bias(n_out))


def init_normalized(state: RngState, n_in: int, n_out: int) -> LayerInit:
    """Glorot's normalized uniform weights, bound sqrt(6) / sqrt(n_in + n_out)."""
    _check_sizes(n_in, n_out)
    bound = math.sqrt(6.0) / math.sqrt(n_in + n_out)
    W = mx.uniform(state, bound, n_in, n_out, COL)
    return LayerInit(W, _zero_bias(n_out))


def _sparse_columns(state: RngState, n_in: int, n_out: int, unit_values) -> Matrix:
    # unit_values() yields the value list for one unit; values go to the
    # chosen inputs in ascending index order
    cols = np.zeros((n_out, n_in))
    for j in range(n_out):
        values = unit_values()[:n_in]
        ids = state.rand_perm(len(values), n_in)
        for idx, v in zip(ids, values):
            cols[j, idx - 1] = v
    return Matrix(cols, COL)


def init_sparse(state: RngState, n_in: int, n_out: int, k: int = SPARSE_K) -> LayerInit:
    """Each unit gets ``min(k, n_in)`` unit-Gaussian incoming weights, the rest zero."""
    _check_sizes(n_in, n_out)
    if k < 1:
        raise ValueError("k must be >= 1")
    n = min(k, n_in)

    def values():
        return [state.rand_normal(0.0, 1.0) for _ in range(n)]

    return LayerInit(_sparse_columns(state, n_in, n_out, values), _zero_bias(n_out))


def init_sparse3(
    state: RngState,
    n_in: int,
    n_out: int,
    c1: float = SPARSE3_C1,
    c2: float = SPARSE3_C2,
) -> LayerInit:
    """Three nonzero incoming weights per unit: ``c1``, ``c2`` and tanh(tanh(N(0,1))).

    With fewer than three inputs the value triple is truncated.
    """
    _check_sizes(n_in, n_out)

    def values():
        return [c1, c2, math.tanh(math.tanh(state.rand_normal(0.0, 1.0)))]

    return LayerInit(_sparse_columns(state, n_in, n_out, values), _zero_bias(n_out))


def init_layer(state: RngState, n_in: int, n_out: int, scheme: InitScheme) -> LayerInit:
    if scheme.kind == "standard":
        return init_standard(state, n_in, n_out)
    if scheme.kind == "normalized":
        return init_normalized(state, n_in, n_out)
    if scheme.kind == "sparse":
        return init_sparse(state, n_in, n_out, scheme.k)
    return init_sparse3(state, n_in, n_out, scheme.c1, scheme.c2)


def init_network(state: RngState, layer_sizes, scheme: InitScheme, overrides=None) -> list[LayerInit]:
    """One :class:`LayerInit` per adjacent pair in ``layer_sizes``.

    ``overrides`` maps a layer index (or is a list aligned with the layers,
    ``None`` entries meaning "use the scheme") to a ``(W, B)`` pair used
    verbatim. ``W`` may be a :class:`Matrix` or an ``n_in x n_out`` array.
    Layers are initialized in order from a single stream.
    """
    sizes = list(layer_sizes)
    if len(sizes) < 2:
        raise ValueError("layer_sizes needs at least two entries")
    if overrides is None:
        overrides = {}
    elif not isinstance(overrides, dict):
        overrides = {i: o for i, o in enumerate(overrides) if o is not None}

    layers = []
    for i, (n_in, n_out) in enumerate(zip(sizes[:-1], sizes[1:])):
        if i in overrides:
            W, B = overrides[i]
            if not isinstance(W, Matrix):
                W = mx.from_flat(np.asarray(W, dtype=np.float64).ravel(), *np.shape(W), COL)
            elif W.orientation is not COL:
                W = mx.change_orientation(W)
            B = np.zeros(n_out) if B is None else np.asarray(B, dtype=np.float64)
            if W.shape != (n_in, n_out) or B.shape != (n_out,):
                raise DimensionError(
                    f"override for layer {i} has W {W.shape}, B {B.shape}; "
                    f"expected ({n_in}, {n_out}) and ({n_out},)"
                )
            layers.append(LayerInit(W, B))
        else:
            layers.append(init_layer(state, n_in, n_out, scheme))
    return layers
