"""Elastic distortion of a 10x10 digit, drawn as ASCII art."""

import numpy as np

from deepinit import dataset as ds
from deepinit.rng import RngState

patterns = ds.load_patterns()
img = ds.pad_pattern(next(p for p in patterns if p.digit == 5))
rs = RngState(3, 0)
shades = " .:-=+*#%@"


def show(*imgs):
    for rows in zip(*imgs):
        print("   ".join("".join(shades[int(v * 9.999)] * 2 for v in row) for row in rows))


print("original / alpha=3 sigma=7 / alpha=8 sigma=2")
show(img, ds.elastic_deform(rs, img, ds.DeformParams()), ds.elastic_deform(rs, img, ds.DeformParams(alpha=8, sigma=2)))

x, y = ds.generate_tinydigits(RngState(1, 0), patterns, n_per_class=2)
print("\ngenerated labels:", y.argmax(axis=1).tolist(), " pixel mean", round(float(np.mean(x)), 3))
