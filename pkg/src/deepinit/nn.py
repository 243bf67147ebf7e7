"""Feedforward networks trained by backpropagation with EMA momentum.

A network is a list of :class:`Layer` values, input layer first. Every
operation returns new layers instead of mutating its arguments.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field, fields, replace
from enum import Enum

import numpy as np

from . import matrix as mx
from .init import LayerInit
from .matrix import COL, ROW, DimensionError, Matrix

SIGMOID_CLIP = 13.0


class Activation(str, Enum):
    SIGMOID = "sigmoid"
    TANH = "tanh"
    LINEAR = "linear"


class Cost(str, Enum):
    MSE = "mse"
    NLL = "nll"
    CE = "ce"
    PER = "per"


class Decay(str, Enum):
    L0 = "l0"
    L1 = "l1"
    L2 = "l2"


class NonFiniteCostError(ArithmeticError):
    def __init__(self, epoch: int, batch: int, cost: float):
        super().__init__(f"non-finite cost {cost} at epoch {epoch}, batch {batch}")
        self.epoch = epoch
        self.batch = batch
        self.cost = cost


@dataclass
class TrainConfig:
    """Training options. Defaults are the TinyDigits benchmark settings."""

    batchsize: int = 10
    n_batches: int = 90
    testsize: int = 600
    lam: float = 0.99
    momentum_schedule: bool = False
    max_lambda: float = 0.0
    lr: float = 0.05
    cost: Cost = Cost.NLL
    act: Activation = Activation.TANH
    layer_sizes: list = field(default_factory=lambda: [100, 80, 80, 200, 10])
    n_itrs: int = 100
    wd_type: Decay = Decay.L2
    wd_value: float = 1e-5
    verbose: bool = False
    keep_best: bool = False

    def __post_init__(self):
        self.cost = Cost(self.cost)
        self.act = Activation(self.act)
        self.wd_type = Decay(self.wd_type)
        self.layer_sizes = [int(n) for n in self.layer_sizes]
        self.validate()

    def validate(self) -> None:
        counts = [self.batchsize, self.n_batches, self.testsize, *self.layer_sizes]
        if len(self.layer_sizes) < 2 or any(c < 1 for c in counts):
            raise ValueError("counts and layer sizes must be >= 1 (at least two layer sizes)")
        if self.n_itrs < 0:
            raise ValueError("n_itrs must be >= 0")
        if not (0.0 <= self.lam < 1.0 and 0.0 <= self.max_lambda < 1.0):
            raise ValueError("lam and max_lambda must lie in [0, 1)")
        if self.lr < 0:
            raise ValueError("lr must be >= 0")
        if self.wd_value < 0:
            raise ValueError("wd_value must be >= 0")

    # names used by the original parameter record
    ALIASES = {
        "nBatches": "n_batches",
        "lambda": "lam",
        "momentumSchedule": "momentum_schedule",
        "maxLambda": "max_lambda",
        "costType": "cost",
        "actType": "act",
        "layerSizes": "layer_sizes",
        "nItrs": "n_itrs",
        "wdType": "wd_type",
        "wdValue": "wd_value",
    }

    @classmethod
    def from_dict(cls, d: dict) -> "TrainConfig":
        known = {f.name for f in fields(cls)}
        kwargs = {}
        for key, value in d.items():
            name = cls.ALIASES.get(key, key)
            if name not in known:
                raise ValueError(f"unknown training option {key!r}")
            if isinstance(value, str) and name in ("cost", "act", "wd_type"):
                value = value.lower()
            kwargs[name] = value
        return cls(**kwargs)

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            out[f.name] = v.value if isinstance(v, Enum) else v
        return out


@dataclass(frozen=True)
class Layer:
    W: Matrix  # n_in x n_out, COL
    B: np.ndarray  # n_out
    grad_W: Matrix  # momentum-averaged, same shape as W
    grad_B: np.ndarray
    act: Activation
    input: Matrix | None = None  # batch x n_in, ROW (last forward pass)
    output: Matrix | None = None  # batch x n_out, ROW

    @property
    def n_in(self) -> int:
        return self.W.rows

    @property
    def n_out(self) -> int:
        return self.W.cols


@dataclass
class UpdateClock:
    t: int = 0


def layer_from_init(init: LayerInit, act: Activation) -> Layer:
    W = init.W if init.W.orientation is COL else mx.change_orientation(init.W)
    return Layer(
        W=W,
        B=np.asarray(init.B, dtype=np.float64).copy(),
        grad_W=mx.zeros(W.rows, W.cols, COL),
        grad_B=np.zeros(W.cols),
        act=Activation(act),
    )


def build_network(inits, act: Activation, cost: Cost) -> list[Layer]:
    """Wrap initial weights into layers.

    With an NLL or CE cost the last layer is linear (the cost applies its own
    squashing); every other layer uses ``act``.
    """
    inits = list(inits)
    act = Activation(act)
    last_act = Activation.LINEAR if Cost(cost) in (Cost.NLL, Cost.CE) else act
    return [
        layer_from_init(init, last_act if i == len(inits) - 1 else act)
        for i, init in enumerate(inits)
    ]


def _sigmoid(z):
    z = np.asarray(z, dtype=np.float64)
    with np.errstate(over="ignore"):
        s = 1.0 / (1.0 + np.exp(-z))
    return np.where(z > SIGMOID_CLIP, 1.0, np.where(z < -SIGMOID_CLIP, 0.0, s))


def activation_apply(kind: Activation, z):
    """Activation value for a scalar or array ``z``.

    The sigmoid saturates to exactly 0 or 1 beyond +-13.
    """
    kind = Activation(kind)
    if kind is Activation.SIGMOID:
        out = _sigmoid(z)
    elif kind is Activation.TANH:
        out = np.tanh(z)
    else:
        out = np.asarray(z, dtype=np.float64)
    return float(out) if np.ndim(out) == 0 else out


def _derivative_from_output(kind: Activation, out):
    if kind is Activation.SIGMOID:
        return out * (1.0 - out)
    if kind is Activation.TANH:
        return 1.0 - out * out
    return np.ones_like(out)


def fprop_layer(layer: Layer, inp: Matrix) -> tuple[Layer, Matrix]:
    if inp.orientation is not ROW:
        inp = mx.change_orientation(inp)
    if inp.cols != layer.n_in:
        raise DimensionError(f"input has {inp.cols} columns, layer expects {layer.n_in}")
    z = mx.broadcast_rowvector(np.add, layer.B, mx.multiply(inp, layer.W, ROW))
    out = mx.map(lambda a: activation_apply(layer.act, a), z)
    return replace(layer, input=inp, output=out), out


def fprop(network, inp: Matrix) -> tuple[list[Layer], Matrix]:
    """Forward pass; returns layers (input layer first) with caches filled."""
    layers = []
    out = inp
    for i, layer in enumerate(network):
        try:
            layer, out = fprop_layer(layer, out)
        except DimensionError as e:
            raise DimensionError(f"layer {i}: {e}") from None
        layers.append(layer)
    return layers, out


def softmax(m: Matrix) -> Matrix:
    """Row-wise softmax of a row-oriented matrix, shifted by the row maximum."""
    shifted = mx.broadcast_scalars(lambda a, x: np.exp(x - a), mx.max_per_vector(m), m)
    return mx.broadcast_scalars(lambda a, x: x / a, mx.sum_per_vector(shifted), shifted)


def _check_one_hot(t: np.ndarray) -> None:
    ok = np.all((t == 0.0) | (t == 1.0)) and np.all(t.sum(axis=1) == 1.0)
    if not ok:
        raise ValueError("targets must be one-hot rows")


def compute_cost(output: Matrix, target: Matrix, kind: Cost) -> tuple[float, Matrix]:
    """Cost averaged over the batch and its gradient w.r.t. ``output``.

    PER is evaluation-only; its gradient is a 1x1 zero placeholder.
    """
    kind = Cost(kind)
    if output.orientation is not ROW:
        output = mx.change_orientation(output)
    if target.orientation is not ROW:
        target = mx.change_orientation(target)
    if output.shape != target.shape:
        raise DimensionError(f"output {output.shape} vs target {target.shape}")
    n = output.rows
    o, t = output.data, target.data

    if kind is Cost.MSE:
        diff = mx.merge(np.subtract, output, target)
        cost = float(np.sum(0.5 * diff.data * diff.data)) / n
        return cost, mx.map(lambda a: a / n, diff)
    if kind is Cost.NLL:
        _check_one_hot(t)
        p = softmax(output)
        shifted = o - mx.max_per_vector(output)[:, None]
        log_p = shifted - np.log(np.sum(np.exp(shifted), axis=1))[:, None]
        cost = -float(np.sum(log_p * t)) / n
        return cost, mx.merge(lambda a, b: (a - b) / n, p, target)
    if kind is Cost.CE:
        cost = float(np.sum(np.logaddexp(0.0, o) - o * t)) / n
        return cost, mx.merge(lambda a, b: (_sigmoid(a) - b) / n, output, target)
    _check_one_hot(t)
    wrong = np.argmax(o, axis=1) != np.argmax(t, axis=1)
    return float(np.count_nonzero(wrong)) / n, mx.zeros(1, 1)


def bprop_layer(layer: Layer, grad_in: Matrix, lam: float, wd_type: Decay, wd_value: float) -> tuple[Layer, Matrix]:
    """Backward pass through one layer.

    Updates the EMA accumulators ``g <- lam * g + (1 - lam) * raw`` and
    returns the gradient w.r.t. the layer input. Weight decay touches ``W``
    only.
    """
    if layer.input is None or layer.output is None:
        raise ValueError("bprop_layer needs a forward pass first")
    if grad_in.orientation is not ROW:
        grad_in = mx.change_orientation(grad_in)
    if grad_in.shape != layer.output.shape:
        raise DimensionError(f"gradient {grad_in.shape} vs output {layer.output.shape}")
    wd_type = Decay(wd_type)

    deriv = mx.map(lambda o: _derivative_from_output(layer.act, o), layer.output)
    delta = mx.merge(np.multiply, grad_in, deriv)
    delta_c = mx.change_orientation(delta)
    raw_W = mx.multiply(mx.transpose(layer.input), delta_c, COL)
    if wd_type is Decay.L2:
        raw_W = mx.merge(lambda g, w: g + wd_value * w, raw_W, layer.W)
    elif wd_type is Decay.L1:
        # sign(0) is taken as -1
        raw_W = mx.merge(lambda g, w: g + wd_value * np.where(w > 0.0, 1.0, -1.0), raw_W, layer.W)
    raw_B = mx.sum_per_vector(delta_c)

    grad_W = mx.merge(lambda a, b: lam * a + (1.0 - lam) * b, layer.grad_W, raw_W)
    grad_B = lam * layer.grad_B + (1.0 - lam) * raw_B
    grad_out = mx.multiply(delta, mx.transpose(layer.W), ROW)
    return replace(layer, grad_W=grad_W, grad_B=grad_B), grad_out


def bprop(network, cost_gradient: Matrix, lam: float, wd_type: Decay, wd_value: float) -> list[Layer]:
    """Backward pass from the last layer to the first; result keeps input-first order."""
    layers = list(network)
    grad = cost_gradient
    for i in range(len(layers) - 1, -1, -1):
        layers[i], grad = bprop_layer(layers[i], grad, lam, wd_type, wd_value)
    return layers


def momentum_schedule(t: int, max_lambda: float) -> float:
    """min(1 - 2^(-1 - log2(floor(t/250) + 1)), max_lambda)."""
    if t < 0:
        raise ValueError("t must be >= 0")
    # 2^(-1 - log2(n)) == 0.5 / n, evaluated without the log round trip
    return min(1.0 - 0.5 / (t // 250 + 1), max_lambda)


def update(network, lr: float) -> list[Layer]:
    """Gradient step ``W -= lr * grad_W``, ``B -= lr * grad_B`` on every layer."""
    return [
        replace(
            layer,
            W=mx.merge(lambda w, g: w - lr * g, layer.W, layer.grad_W),
            B=layer.B - lr * layer.grad_B,
        )
        for layer in network
    ]


def train_batch(network, inp: Matrix, target: Matrix, config: TrainConfig, clock: UpdateClock):
    network, out = fprop(network, inp)
    cost, grad = compute_cost(out, target, config.cost)
    lam = momentum_schedule(clock.t, config.max_lambda) if config.momentum_schedule else config.lam
    network = bprop(network, grad, lam, config.wd_type, config.wd_value)
    network = update(network, config.lr)
    clock.t += 1
    return network, cost


def _train_epoch(network, train_batches, target_batches, config, clock, epoch):
    if len(train_batches) != len(target_batches):
        raise DimensionError(
            f"{len(train_batches)} input batches vs {len(target_batches)} target batches"
        )
    costs = []
    for b, (inp, target) in enumerate(zip(train_batches, target_batches), start=1):
        network, cost = train_batch(network, inp, target, config, clock)
        if not np.isfinite(cost):
            raise NonFiniteCostError(epoch, b, cost)
        if config.verbose:
            print(f"{epoch},{b},{cost!r}", file=sys.stdout)
        costs.append(cost)
    return network, float(np.mean(costs)) if costs else float("nan")


def train_epochs(network, train_batches, target_batches, config: TrainConfig, clock: UpdateClock | None = None):
    """Run ``config.n_itrs`` epochs over the batches in fixed order."""
    clock = UpdateClock() if clock is None else clock
    network = list(network)
    for epoch in range(1, config.n_itrs + 1):
        network, _ = _train_epoch(network, train_batches, target_batches, config, clock, epoch)
    return network


def evaluate(network, inp: Matrix, target: Matrix, kind: Cost = Cost.PER) -> float:
    _, out = fprop(network, inp)
    return compute_cost(out, target, kind)[0]


def train_best(
    network,
    train_batches,
    target_batches,
    val_input: Matrix,
    val_target: Matrix,
    config: TrainConfig,
    clock: UpdateClock | None = None,
    on_epoch=None,
):
    """Train epoch by epoch, tracking the lowest validation PER.

    Validation PER is measured after every epoch; the running best starts at
    1.0, the worst possible error. Returns ``(best_val_error, network)``; the network is the final one, or
    the best-scoring snapshot when ``config.keep_best`` is set.
    ``on_epoch(epoch, train_cost, val_error)`` is called after each epoch.
    """
    clock = UpdateClock() if clock is None else clock
    network = list(network)
    best, best_net = 1.0, network
    for epoch in range(1, config.n_itrs + 1):
        network, train_cost = _train_epoch(network, train_batches, target_batches, config, clock, epoch)
        err = evaluate(network, val_input, val_target)
        if err < best:
            best, best_net = err, network
        if on_epoch is not None:
            on_epoch(epoch, train_cost, err)
        if config.verbose:
            print(f"best validation error = {best!r}", file=sys.stdout)
    return best, (best_net if config.keep_best else network)
