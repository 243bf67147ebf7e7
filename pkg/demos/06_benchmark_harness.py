"""Multi-seed comparison through the harness, the same path the CLI takes.

Equivalent shell command:
    deepinit-bench --mode compare --init sparse --init sparse3 --seed 1 --seed 2 \
        --epochs 3 --out-dir /tmp/deepinit-demo
"""

import tempfile
from pathlib import Path

from deepinit import bench

out = Path(tempfile.mkdtemp()) / "compare"
bench.main(["--mode", "compare", "--init", "sparse", "--init", "sparse3",
            "--seed", "1", "--seed", "2", "--epochs", "3", "--out-dir", str(out)])
for f in sorted(out.iterdir()):
    print(f"--- {f.name}")
    print(f.read_text()[:600])
