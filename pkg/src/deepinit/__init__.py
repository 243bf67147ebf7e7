"""Deep feedforward network training with sparse and evolved initializations."""

from .init import InitScheme, init_network
from .matrix import COL, ROW, Matrix
from .nn import Activation, Cost, Decay, TrainConfig, UpdateClock, build_network, train_best, train_epochs
from .rng import RngState

__version__ = "0.1.0"

__all__ = [
    "Activation",
    "COL",
    "Cost",
    "Decay",
    "InitScheme",
    "Matrix",
    "ROW",
    "RngState",
    "TrainConfig",
    "UpdateClock",
    "build_network",
    "init_network",
    "train_best",
    "train_epochs",
]
