"""Oriented matrices: the same logical matrix stored by rows or by columns."""

import numpy as np

from deepinit import matrix as mx
from deepinit.matrix import COL, ROW, OrientationError

a = mx.from_flat([1, 2, 3, 4, 5, 6], 2, 3, ROW)
b = mx.from_flat([1, 0, 0, 1, 1, 1], 3, 2, COL)
print("a (row-stored) =\n", a.to_array())
print("b (col-stored) =\n", b.to_array(), "\nraw storage of b:\n", b.data)

# multiply only takes a row-oriented left operand and a column-oriented right one
print("a @ b =\n", mx.multiply(a, b).to_array())
try:
    mx.multiply(b, a)
except OrientationError as e:
    print("refused:", e)

# transpose_change is free: same storage, flipped orientation
t = mx.transpose_change(a)
print("transpose shares storage:", t.data is a.data, t.shape, t.orientation)

# per-vector reductions follow the storage orientation
print("row sums:", mx.sum_per_vector(a))
print("column maxima:", mx.max_per_vector(mx.change_orientation(a)))
print("scaled rows:\n", mx.broadcast_scalars(np.multiply, [10, 100], a).to_array())
