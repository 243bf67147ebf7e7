"""What each initialization scheme puts into a 100 -> 80 weight matrix."""

import numpy as np

from deepinit.init import InitScheme, init_network
from deepinit.rng import RngState

for label in ("standard", "normalized", "sparse", "sparse3"):
    scheme = InitScheme.parse(label)
    [layer] = init_network(RngState(10, 0), [100, 80], scheme)
    w = layer.W.to_array()
    nz = np.count_nonzero(w, axis=0)
    print(f"{scheme.label:12s} var {w.var():.5f}  range [{w.min():+.3f}, {w.max():+.3f}]  "
          f"nonzeros per unit {nz.min()}..{nz.max()}")

# sparse-3 units carry two fixed constants plus one well-curve draw
[layer] = init_network(RngState(10, 0), [100, 4], InitScheme("sparse3"))
for j, col in enumerate(layer.W.to_array().T):
    idx = np.flatnonzero(col)
    print(f"unit {j}: inputs {idx.tolist()} weights {np.round(col[idx], 4).tolist()}")
