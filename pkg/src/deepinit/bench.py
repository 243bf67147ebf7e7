"""Experiment harness comparing initialization schemes across seeds.

Modes:

``compare``
    per-scheme mean and population std of the best validation error,
    the per-seed matrix and pairwise mean differences.
``curves``
    one ``epoch,train_cost,val_error`` CSV per (scheme, seed).
``gridsearch``
    sparse-3 runs over offsets added to its two constants.
``crossdata``
    every scheme and seed on several datasets.

A run with seed ``s`` initializes from ``RngState(base_seed, s)``, so a seed
listed twice gives two identical runs. All output files are deterministic
functions of the experiment spec.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import platform
import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from . import dataset as ds
from .init import InitScheme, init_network
from .nn import NonFiniteCostError, TrainConfig, UpdateClock, build_network, train_best
from .rng import RngState

log = logging.getLogger(__name__)

MODES = ("compare", "curves", "gridsearch", "crossdata")
GRID_C1_OFFSETS = (-0.06, -0.03, 0.0, 0.03, 0.06)
GRID_C2_OFFSETS = (-0.2, -0.1, 0.0, 0.1, 0.2)
OUT_DIR_ENV = "DEEPINIT_OUT_DIR"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class DataSource:
    """Train/validation CSV quadruple, or a TinyDigits recipe when paths are absent."""

    name: str = "tinydigits"
    train_data: str | None = None
    train_labels: str | None = None
    val_data: str | None = None
    val_labels: str | None = None
    tinydigits_seed: int = 1
    train_per_class: int = 90
    val_per_class: int = 60

    @property
    def from_files(self) -> bool:
        return self.train_data is not None

    @classmethod
    def from_dict(cls, d: dict) -> "DataSource":
        src = cls(**d)
        paths = (src.train_data, src.train_labels, src.val_data, src.val_labels)
        if any(p is not None for p in paths) and any(p is None for p in paths):
            raise ConfigError(f"dataset {src.name!r}: give all four CSV paths or none")
        return src


@dataclass
class ExperimentSpec:
    config: TrainConfig = field(default_factory=TrainConfig)
    schemes: list[InitScheme] = field(default_factory=lambda: [InitScheme("sparse"), InitScheme("sparse3")])
    seeds: list[int] = field(default_factory=lambda: [1, 2, 3, 4, 5])
    base_seed: int = 10
    data: DataSource = field(default_factory=DataSource)
    extra_datasets: list[DataSource] = field(default_factory=list)
    out_dir: str = "bench-out"
    mode: str = "compare"
    c1_offsets: tuple = GRID_C1_OFFSETS
    c2_offsets: tuple = GRID_C2_OFFSETS
    workers: int = 1

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        if not self.schemes:
            raise ConfigError("at least one init scheme is required")

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "schemes": [s.__dict__ for s in self.schemes],
            "seeds": list(self.seeds),
            "base_seed": self.base_seed,
            "data": self.data.__dict__,
            "extra_datasets": [d.__dict__ for d in self.extra_datasets],
            "mode": self.mode,
            "c1_offsets": list(self.c1_offsets),
            "c2_offsets": list(self.c2_offsets),
        }

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


@dataclass
class RunRecord:
    scheme: str
    seed: int
    dataset: str
    epochs: list = field(default_factory=list)  # (epoch, train_cost, val_error)
    best_val_error: float = float("nan")
    final_val_error: float = float("nan")
    wall_time: float = 0.0
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None


# -- data ---------------------------------------------------------------------


def _csv_width(path) -> int:
    with open(path) as fh:
        for line in fh:
            if line.strip():
                return len(line.split(","))
    raise ds.InputError(f"{path}: file is empty")


def load_data(src: DataSource, config: TrainConfig):
    """Return ``(train, val)`` :class:`~deepinit.dataset.Dataset` objects."""
    n_in, n_out = config.layer_sizes[0], config.layer_sizes[-1]
    if src.from_files:
        for path in (src.train_data, src.val_data):
            width = _csv_width(path)
            if width != n_in:
                raise ConfigError(
                    f"dataset {src.name!r}: {path} has {width} inputs, network expects {n_in}"
                )
        train = ds.read_dataset(src.train_data, src.train_labels, n_in, n_out, config.batchsize, config.n_batches)
        val = ds.read_dataset(src.val_data, src.val_labels, n_in, n_out, config.testsize, 1)
        return train, val

    if n_in != ds.IMAGE_SIZE**2 or n_out != ds.N_CLASSES:
        raise ConfigError(f"TinyDigits needs layer sizes 100-...-10, got {config.layer_sizes}")
    state = RngState(src.tinydigits_seed, 0)
    patterns = ds.load_patterns()
    x_tr, y_tr = ds.generate_tinydigits(state, patterns, src.train_per_class)
    x_va, y_va = ds.generate_tinydigits(state, patterns, src.val_per_class)
    need_tr = config.batchsize * config.n_batches
    if len(x_tr) < need_tr or len(x_va) < config.testsize:
        raise ConfigError(
            f"TinyDigits split too small: {len(x_tr)}/{len(x_va)} samples, "
            f"config needs {need_tr}/{config.testsize}"
        )
    return (
        ds.to_batches(x_tr[:need_tr], y_tr[:need_tr], config.batchsize),
        ds.to_batches(x_va[: config.testsize], y_va[: config.testsize], config.testsize),
    )


# -- runs ---------------------------------------------------------------------


def run_one(config: TrainConfig, scheme: InitScheme, seed: int, base_seed: int, train, val, dataset_name="") -> RunRecord:
    """Initialize, train and evaluate one network; never raises on divergence."""
    rec = RunRecord(scheme.label, seed, dataset_name)
    start = time.perf_counter()
    state = RngState(base_seed, seed)
    try:
        inits = init_network(state, config.layer_sizes, scheme)
        net = build_network(inits, config.act, config.cost)
        best, _ = train_best(
            net,
            train.inputs,
            train.targets,
            val.inputs[0],
            val.targets[0],
            config,
            UpdateClock(),
            on_epoch=lambda e, c, v: rec.epochs.append((e, c, v)),
        )
        rec.best_val_error = best
        rec.final_val_error = rec.epochs[-1][2] if rec.epochs else best
    except NonFiniteCostError as e:
        rec.error = str(e)
    rec.wall_time = time.perf_counter() - start
    log.info("%s seed=%d %s best=%.4f (%.1fs)", rec.scheme, seed, dataset_name, rec.best_val_error, rec.wall_time)
    return rec


def _run_job(job):
    return run_one(*job)


def _execute(jobs, workers: int) -> list[RunRecord]:
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_job, jobs))
    return [_run_job(j) for j in jobs]


# -- output -------------------------------------------------------------------


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _pct(x: float) -> str:
    return "failed" if not np.isfinite(x) else f"{100 * x:.2f}%"


def _mean_std(values) -> tuple[float, float]:
    vals = np.asarray([v for v in values if np.isfinite(v)], dtype=float)
    if vals.size == 0:
        return float("nan"), float("nan")
    return float(np.mean(vals)), float(np.std(vals))


def _aligned(rows) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n" for r in rows)


def _csv(rows) -> str:
    return "".join(",".join(r) + "\n" for r in rows)


def _num(x: float) -> str:
    return repr(float(x)) if np.isfinite(x) else "nan"


def summarize(records: list[RunRecord], seeds, labels, config: TrainConfig, k_note: str = "") -> tuple[str, str]:
    """Per-seed matrix, mean +- population std per scheme, and pairwise deltas.

    Returns the aligned-text and CSV renderings.
    """
    cell = {(r.scheme, r.seed): r.best_val_error for r in records}
    header = ["seed", *labels]
    text_rows = [header]
    csv_rows = [header]
    for s in seeds:
        vals = [cell.get((lab, s), float("nan")) for lab in labels]
        text_rows.append([str(s), *(_pct(v) for v in vals)])
        csv_rows.append([str(s), *(_num(v) for v in vals)])
    stats = [_mean_std(cell.get((lab, s), float("nan")) for s in seeds) for lab in labels]
    text_rows.append(["mean", *(_pct(m) for m, _ in stats)])
    text_rows.append([f"std(pop,n={len(seeds)})", *(_pct(sd) for _, sd in stats)])
    csv_rows.append(["mean", *(_num(m) for m, _ in stats)])
    csv_rows.append(["std_pop", *(_num(sd) for _, sd in stats)])

    lines = [
        f"best validation error; lr={config.lr:g} wd={config.wd_type.value}:{config.wd_value:g} "
        f"epochs={config.n_itrs}{k_note}\n",
        _aligned(text_rows),
    ]
    for i, a in enumerate(labels):
        for b in labels[i + 1:]:
            diffs = [cell.get((a, s), float("nan")) - cell.get((b, s), float("nan")) for s in seeds]
            m, sd = _mean_std(diffs)
            lines.append(f"delta({a} - {b}): {_pct(m)} +- {_pct(sd)}\n")
    return "".join(lines), _csv(csv_rows)


def curve_csv(rec: RunRecord) -> str:
    return "epoch,train_cost,val_error\n" + "".join(
        f"{e},{_num(c)},{_num(v)}\n" for e, c, v in rec.epochs
    )


def curve_filename(rec: RunRecord, config: TrainConfig) -> str:
    ds_part = f"_{rec.dataset}" if rec.dataset else ""
    return (
        f"{rec.scheme}{ds_part}_seed{rec.seed}_lr{config.lr:g}"
        f"_wd{config.wd_type.value}-{config.wd_value:g}.csv"
    )


def _manifest(spec: ExperimentSpec, files) -> str:
    return json.dumps(
        {
            "mode": spec.mode,
            "spec_sha256": spec.digest(),
            "spec": spec.to_dict(),
            "seeds": list(spec.seeds),
            "outputs": sorted(files),
            "versions": {
                "deepinit": __version__,
                "numpy": np.__version__,
                "python": platform.python_version(),
            },
        },
        indent=2,
        sort_keys=True,
    ) + "\n"


def _prepare_out(spec: ExperimentSpec) -> Path:
    out = Path(spec.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write-probe"
        probe.write_text("")
        probe.unlink()
    except OSError as e:
        raise ConfigError(f"output directory {out} is not writable: {e}") from e
    return out


def _finish(spec: ExperimentSpec, out: Path, files: dict[str, str]) -> None:
    for name, text in files.items():
        write_atomic(out / name, text)
    write_atomic(out / "manifest.json", _manifest(spec, files))


def _k_note(schemes) -> str:
    ks = sorted({s.k for s in schemes if s.kind == "sparse"})
    return f" sparse_k={','.join(map(str, ks))}" if ks else ""


def _seed_jobs(spec: ExperimentSpec, schemes, train, val, name=""):
    return [(spec.config, sch, s, spec.base_seed, train, val, name) for sch in schemes for s in spec.seeds]


# -- modes --------------------------------------------------------------------


def run_compare(spec: ExperimentSpec, data=None) -> tuple[list[RunRecord], str]:
    """Train every (scheme, seed) pair and write ``summary.txt`` / ``summary.csv``."""
    out = _prepare_out(spec)
    train, val = data if data is not None else load_data(spec.data, spec.config)
    records = _execute(_seed_jobs(spec, spec.schemes, train, val), spec.workers)
    labels = list(dict.fromkeys(s.label for s in spec.schemes))
    text, csv = summarize(records, spec.seeds, labels, spec.config, _k_note(spec.schemes))
    _finish(spec, out, {"summary.txt": text, "summary.csv": csv})
    return records, text


def run_curves(spec: ExperimentSpec, data=None) -> list[RunRecord]:
    """Per-epoch learning curves, one CSV per (scheme, seed) under ``curves/``."""
    out = _prepare_out(spec)
    train, val = data if data is not None else load_data(spec.data, spec.config)
    records = _execute(_seed_jobs(spec, spec.schemes, train, val), spec.workers)
    files = {f"curves/{curve_filename(r, spec.config)}": curve_csv(r) for r in records}
    labels = list(dict.fromkeys(s.label for s in spec.schemes))
    text, csv = summarize(records, spec.seeds, labels, spec.config, _k_note(spec.schemes))
    files.update({"summary.txt": text, "summary.csv": csv})
    _finish(spec, out, files)
    return records


def run_gridsearch(spec: ExperimentSpec, data=None, c1_offsets=None, c2_offsets=None, c1=None, c2=None):
    """Sparse-3 best validation error over ``(c1 + d1, c2 + d2)`` cells.

    Each cell is averaged over the spec's seeds. Returns the ``(len(d1),
    len(d2))`` grid of mean errors and its text rendering; the minimum cell
    is starred.
    """
    d1s = list(spec.c1_offsets if c1_offsets is None else c1_offsets)
    d2s = list(spec.c2_offsets if c2_offsets is None else c2_offsets)
    if not d1s or not d2s:
        raise ConfigError("grid offsets must be non-empty")
    base = next((s for s in spec.schemes if s.kind == "sparse3"), InitScheme("sparse3"))
    c1 = base.c1 if c1 is None else c1
    c2 = base.c2 if c2 is None else c2
    out = _prepare_out(spec)
    train, val = data if data is not None else load_data(spec.data, spec.config)

    cells = [(i, j, InitScheme("sparse3", c1=c1 + d1, c2=c2 + d2)) for i, d1 in enumerate(d1s) for j, d2 in enumerate(d2s)]
    jobs = [(spec.config, sch, s, spec.base_seed, train, val, "") for _, _, sch in cells for s in spec.seeds]
    records = _execute(jobs, spec.workers)
    grid = np.full((len(d1s), len(d2s)), np.nan)
    per_cell = len(spec.seeds)
    for n, (i, j, _) in enumerate(cells):
        grid[i, j] = _mean_std(r.best_val_error for r in records[n * per_cell:(n + 1) * per_cell])[0]

    best = np.unravel_index(np.nanargmin(grid), grid.shape) if np.isfinite(grid).any() else None
    header = [f"c1 \\ c2 (c1={c1!r}, c2={c2!r})", *(f"{d2:+g}" for d2 in d2s)]
    text_rows, csv_rows = [header], [["d1\\d2", *(repr(d2) for d2 in d2s)]]
    for i, d1 in enumerate(d1s):
        cells_txt = []
        for j in range(len(d2s)):
            mark = "*" if best is not None and (i, j) == tuple(best) else ""
            cells_txt.append(_pct(grid[i, j]) + mark)
        text_rows.append([f"{d1:+g}", *cells_txt])
        csv_rows.append([repr(d1), *(_num(v) for v in grid[i])])
    text = (
        f"sparse-3 grid search, mean best validation error over seeds {list(spec.seeds)} "
        f"(* = minimum)\n" + _aligned(text_rows)
    )
    _finish(spec, out, {"grid.txt": text, "grid.csv": _csv(csv_rows)})
    return grid, text


def run_crossdata(spec: ExperimentSpec, extra_datasets=None, data=None) -> tuple[list[RunRecord], str]:
    """Every scheme x seed on the main dataset plus ``extra_datasets``.

    Writes ``cross.txt`` / ``cross.csv`` with one row per seed and one
    column per (scheme, dataset), followed by the column means.
    """
    sources = [spec.data, *(spec.extra_datasets if extra_datasets is None else extra_datasets)]
    names = [s.name for s in sources]
    if len(set(names)) != len(names):
        raise ConfigError(f"dataset names must be unique, got {names}")
    out = _prepare_out(spec)
    loaded = []
    for k, src in enumerate(sources):
        loaded.append(data if (k == 0 and data is not None) else load_data(src, spec.config))

    jobs = []
    for src, (train, val) in zip(sources, loaded):
        jobs.extend(_seed_jobs(spec, spec.schemes, train, val, src.name))
    records = _execute(jobs, spec.workers)

    labels = list(dict.fromkeys(s.label for s in spec.schemes))
    cols = [(lab, name) for lab in labels for name in names]
    cell = {(r.scheme, r.dataset, r.seed): r.best_val_error for r in records}
    header = ["seed", *(f"{lab}@{name}" for lab, name in cols)]
    text_rows, csv_rows = [header], [header]
    for s in spec.seeds:
        vals = [cell.get((lab, name, s), float("nan")) for lab, name in cols]
        text_rows.append([str(s), *map(_pct, vals)])
        csv_rows.append([str(s), *map(_num, vals)])
    means = [_mean_std(cell.get((lab, name, s), float("nan")) for s in spec.seeds)[0] for lab, name in cols]
    text_rows.append(["mean", *map(_pct, means)])
    csv_rows.append(["mean", *map(_num, means)])
    text = "best validation error per dataset\n" + _aligned(text_rows)
    _finish(spec, out, {"cross.txt": text, "cross.csv": _csv(csv_rows)})
    return records, text


# -- configuration ------------------------------------------------------------

HARNESS_KEYS = {
    "schemes", "seeds", "base_seed", "data", "datasets", "out_dir", "mode",
    "c1_offsets", "c2_offsets", "workers",
}


def load_config_file(path) -> dict:
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path}: {e}") from e


def build_spec(file_cfg: dict, args: argparse.Namespace) -> ExperimentSpec:
    """Merge the config file with CLI overrides (the CLI wins)."""
    train_opts = {k: v for k, v in file_cfg.items() if k not in HARNESS_KEYS}
    cli_train = {
        "lr": args.lr,
        "n_itrs": args.epochs,
        "layer_sizes": args.arch,
        "wd_type": args.wd_type,
        "wd_value": args.wd_value,
        "batchsize": args.batchsize,
        "n_batches": args.n_batches,
        "testsize": args.testsize,
        "lam": args.momentum,
        "momentum_schedule": args.momentum_schedule,
        "max_lambda": args.max_lambda,
        "cost": args.cost,
        "act": args.act,
        "verbose": args.verbose or None,
    }
    train_opts.update({k: v for k, v in cli_train.items() if v is not None})
    try:
        config = TrainConfig.from_dict(train_opts)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"invalid training options: {e}") from e

    schemes = args.init or file_cfg.get("schemes") or ["sparse", "sparse3"]
    seeds = args.seed or file_cfg.get("seeds") or [1, 2, 3, 4, 5]
    data = DataSource.from_dict(file_cfg.get("data", {}))
    cli_paths = (args.train_data, args.train_labels, args.val_data, args.val_labels)
    if any(p is not None for p in cli_paths):
        data = DataSource.from_dict({**data.__dict__, **{
            k: v for k, v in zip(("train_data", "train_labels", "val_data", "val_labels"), cli_paths) if v is not None
        }})
    if args.data_seed is not None:
        data = DataSource.from_dict({**data.__dict__, "tinydigits_seed": args.data_seed})
    extras = [DataSource.from_dict(d) for d in file_cfg.get("datasets", [])]
    for item in args.dataset or []:
        name, *paths = item.split(",")
        if len(paths) != 4:
            raise ConfigError(f"--dataset needs NAME,TRAIN,TRAIN_LABELS,VAL,VAL_LABELS, got {item!r}")
        extras.append(DataSource.from_dict(dict(zip(("name", "train_data", "train_labels", "val_data", "val_labels"), [name, *paths]))))

    out_dir = args.out_dir or file_cfg.get("out_dir") or os.environ.get(OUT_DIR_ENV) or "bench-out"
    return ExperimentSpec(
        config=config,
        schemes=[InitScheme.parse(s) if isinstance(s, str) else InitScheme(**s) for s in schemes],
        seeds=[int(s) for s in seeds],
        base_seed=args.base_seed if args.base_seed is not None else int(file_cfg.get("base_seed", 10)),
        data=data,
        extra_datasets=extras,
        out_dir=out_dir,
        mode=args.mode or file_cfg.get("mode", "compare"),
        c1_offsets=tuple(args.c1_offsets or file_cfg.get("c1_offsets", GRID_C1_OFFSETS)),
        c2_offsets=tuple(args.c2_offsets or file_cfg.get("c2_offsets", GRID_C2_OFFSETS)),
        workers=args.workers or int(file_cfg.get("workers", 1)),
    )


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",")]


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",")]


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="deepinit-bench",
        description="Compare weight initialization schemes on feedforward networks.",
    )
    p.add_argument("--config", help="JSON config file; CLI flags override it")
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--init", action="append", help="scheme: standard, normalized, sparse[:k], sparse3[:c1,c2] (repeatable)")
    p.add_argument("--seed", action="append", type=int, help="run seed (repeatable)")
    p.add_argument("--base-seed", type=int)
    p.add_argument("--lr", type=float)
    p.add_argument("--epochs", type=int)
    p.add_argument("--arch", type=_ints, help="layer sizes, e.g. 100,80,80,200,10")
    p.add_argument("--wd-type", choices=["l0", "l1", "l2"])
    p.add_argument("--wd-value", type=float)
    p.add_argument("--batchsize", type=int)
    p.add_argument("--n-batches", type=int)
    p.add_argument("--testsize", type=int)
    p.add_argument("--momentum", type=float, help="EMA momentum coefficient lambda")
    p.add_argument("--momentum-schedule", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("--max-lambda", type=float)
    p.add_argument("--cost", choices=["mse", "nll", "ce"])
    p.add_argument("--act", choices=["sigmoid", "tanh", "linear"])
    p.add_argument("--out-dir", help=f"output directory (default ${OUT_DIR_ENV} or ./bench-out)")
    p.add_argument("--train-data")
    p.add_argument("--train-labels")
    p.add_argument("--val-data")
    p.add_argument("--val-labels")
    p.add_argument("--data-seed", type=int, help="seed of the generated TinyDigits split")
    p.add_argument("--dataset", action="append", help="extra dataset for crossdata: NAME,TRAIN,TRAIN_LABELS,VAL,VAL_LABELS")
    p.add_argument("--c1-offsets", type=_floats)
    p.add_argument("--c2-offsets", type=_floats)
    p.add_argument("--workers", type=int)
    p.add_argument("--verbose", action="store_true", help="print per-batch costs")
    return p


def run_spec(spec: ExperimentSpec) -> str:
    if spec.mode == "compare":
        return run_compare(spec)[1]
    if spec.mode == "curves":
        run_curves(spec)
        return (Path(spec.out_dir) / "summary.txt").read_text()
    if spec.mode == "gridsearch":
        return run_gridsearch(spec)[1]
    return run_crossdata(spec)[1]


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s", stream=sys.stderr)
    try:
        file_cfg = load_config_file(args.config) if args.config else {}
        spec = build_spec(file_cfg, args)
        print(run_spec(spec), end="")
    except (ConfigError, ds.InputError, ds.ParseError, OSError) as e:
        print(f"deepinit-bench: error: {e}", file=sys.stderr)
        return 2
    return 0


def write_tinydigits(out_dir, seed: int = 1, train_per_class: int = 90, val_per_class: int = 60,
                     params: ds.DeformParams = ds.DeformParams(), patterns_dir=None) -> dict[str, Path]:
    """Generate a TinyDigits train/validation pair as the four CSV files."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    state = RngState(seed, 0)
    patterns = ds.load_patterns(patterns_dir)
    paths = {}
    for split, n in (("train", train_per_class), ("val", val_per_class)):
        x, y = ds.generate_tinydigits(state, patterns, n, params)
        paths[f"{split}_data"] = out / f"{split}_data.csv"
        paths[f"{split}_labels"] = out / f"{split}_labels.csv"
        ds.write_csv(x, y, paths[f"{split}_data"], paths[f"{split}_labels"])
    return paths


def main_tinydigits(argv=None) -> int:
    p = argparse.ArgumentParser(prog="deepinit-tinydigits", description="Write a TinyDigits train/validation CSV pair.")
    p.add_argument("out_dir")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--train-per-class", type=int, default=90)
    p.add_argument("--val-per-class", type=int, default=60)
    p.add_argument("--patterns", help="directory of digit<d>_v<k>.txt pattern files")
    args = p.parse_args(argv)
    for name, path in write_tinydigits(args.out_dir, args.seed, args.train_per_class,
                                       args.val_per_class, patterns_dir=args.patterns).items():
        print(f"{name}: {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
