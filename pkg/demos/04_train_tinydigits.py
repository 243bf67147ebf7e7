"""Train one small network on generated TinyDigits and watch validation error."""

from deepinit import bench
from deepinit.bench import DataSource
from deepinit.init import InitScheme
from deepinit.nn import TrainConfig

cfg = TrainConfig(n_itrs=10)
train, val = bench.load_data(DataSource(tinydigits_seed=1), cfg)
print(f"{len(train.inputs)} training batches of {cfg.batchsize}, {val.inputs[0].rows} validation samples")

for name in ("sparse", "sparse3"):
    rec = bench.run_one(cfg, InitScheme(name), seed=1, base_seed=10, train=train, val=val)
    errs = " ".join(f"{v:.3f}" for _, _, v in rec.epochs)
    print(f"{name:8s} val error by epoch: {errs}  best {rec.best_val_error:.3f}")
