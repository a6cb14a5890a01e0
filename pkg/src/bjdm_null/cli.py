"""Command line interface.

Subcommands: ``sample``, ``convergence``, ``significance``, ``mine``,
``gen`` and ``bench``.  Exit codes: 0 success, 2 invalid arguments or input,
3 I/O error, 4 invariant violation detected by ``--check-invariants``.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

import numpy as np

from .bipartite import bjdm_of_dataset
from .dataset_io import (DatasetFormatError, generate_synthetic, read_sequential,
                         read_transactional, write_file, write_sequential,
                         write_transactional)
from .mining import fi_length_histogram, format_patterns, mine
from .samplers import (ALGORITHMS, InvariantViolation, SamplerConfig, make_chain, mh_step,
                       sample_many)
from .stats import (DEFAULT_K_GRID, convergence_trace,
                    significance_report, statistics_csv, to_json, westfall_young)

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_INVARIANT = 0, 2, 3, 4

COMMANDS = ("sample", "convergence", "significance", "mine", "gen", "bench")


class UsageError(ValueError):
    """Invalid combination of options."""


@dataclass
class JobConfig:
    """Options of one CLI invocation; round-trips through JSON."""

    command: str = ""
    input: list = field(default_factory=list)
    format: str = "auto"
    algo: list = field(default_factory=lambda: ["alice-a"])
    swaps: Optional[int] = None
    k: Optional[float] = None
    samples: int = 1
    theta: Optional[float] = None
    seed: int = 0
    parallelism: Optional[int] = None
    out: Optional[str] = None
    check_invariants: bool = False
    direction: str = "greater"
    k_grid: list = field(default_factory=lambda: list(DEFAULT_K_GRID))
    steps: int = 10000
    delta: float = 0.05
    wy_outer: int = 0
    wy_inner: int = 0
    stats_csv: Optional[str] = None
    transactions: int = 1000
    items: int = 100
    avg_length: float = 10.0
    zipf: float = 1.0

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "JobConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        data = dict(data)
        for key in ("input", "algo"):
            if isinstance(data.get(key), str):
                data[key] = [data[key]]
        return cls(**data)

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.format not in ("auto", "trans", "seq"):
            raise UsageError("--format must be auto, trans or seq")
        for a in self.algo:
            if a not in ALGORITHMS:
                raise UsageError(f"unknown sampler {a!r}; expected one of "
                                 f"{', '.join(ALGORITHMS)}")
        if self.swaps is not None and self.k is not None:
            raise UsageError("--swaps and --k are mutually exclusive")
        if self.swaps is not None and self.swaps < 0:
            raise UsageError("--swaps must be >= 0")
        if self.k is not None and self.k < 0:
            raise UsageError("--k must be >= 0")
        if self.samples < 1:
            raise UsageError("--samples must be >= 1")
        if self.direction not in ("greater", "less"):
            raise UsageError("--direction must be greater or less")
        if self.parallelism is not None and self.parallelism < 1:
            raise UsageError("--parallelism must be >= 1")
        needs_input = self.command not in ("gen",)
        if needs_input and not self.input:
            raise UsageError("--input is required")
        if self.command in ("convergence", "significance", "mine") and self.theta is None:
            raise UsageError("--theta is required")
        if self.command == "bench" and self.steps < 1:
            raise UsageError("--steps must be >= 1")
        if not 0.0 < self.delta < 1.0:
            raise UsageError("--delta must be in (0, 1)")
        if (self.wy_outer > 0) != (self.wy_inner > 0):
            raise UsageError("--wy-outer and --wy-inner must be given together")


def _theta(text: str):
    """``"2"`` is an absolute count, ``"0.8"`` a fraction."""
    try:
        return int(text)
    except ValueError:
        return float(text)


def _csv_list(conv):
    def parse(text):
        return [conv(x) for x in text.split(",") if x.strip()]
    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bjdm-null",
        description="BJDM-preserving null models for frequent pattern significance.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, sampler=True):
        p.add_argument("--config", help="JSON file with default option values")
        p.add_argument("--save-config", help="write the effective options as JSON")
        p.add_argument("--input", action="append", help="dataset file (repeatable)")
        p.add_argument("--format", choices=("auto", "trans", "seq"))
        p.add_argument("--seed", type=int)
        p.add_argument("--out", help="output file or directory")
        if sampler:
            p.add_argument("--algo", type=_csv_list(str),
                           help="sampler id(s), comma separated: " + ", ".join(ALGORITHMS))
            g = p.add_mutually_exclusive_group()
            g.add_argument("--swaps", type=int, help="number of steps s")
            g.add_argument("--k", type=float, help="steps as a multiple of w (s = k*w)")
            p.add_argument("--parallelism", type=int,
                           help="worker processes (BJDM_SAMPLER_THREADS overrides)")
            p.add_argument("--check-invariants", action="store_true", default=None,
                           help="verify degrees and BJDM after every step")

    p = sub.add_parser("sample", help="write sampled datasets and a manifest")
    common(p)
    p.add_argument("--samples", type=int)

    p = sub.add_parser("convergence", help="ARSD along one chain per sampler")
    common(p)
    p.add_argument("--theta", type=_theta)
    p.add_argument("--k-grid", type=_csv_list(float))

    p = sub.add_parser("significance", help="p-value of the number of frequent patterns")
    common(p)
    p.add_argument("--samples", type=int)
    p.add_argument("--theta", type=_theta)
    p.add_argument("--direction", choices=("greater", "less"))
    p.add_argument("--delta", type=float, help="FWER target for Westfall-Young")
    p.add_argument("--wy-outer", type=int, help="outer samples for Westfall-Young")
    p.add_argument("--wy-inner", type=int, help="inner samples for Westfall-Young")
    p.add_argument("--stats-csv", help="also write per-sample statistics as CSV")

    p = sub.add_parser("mine", help="mine frequent itemsets or sequential patterns")
    common(p, sampler=False)
    p.add_argument("--theta", type=_theta)

    p = sub.add_parser("gen", help="generate a synthetic transactional dataset")
    common(p, sampler=False)
    p.add_argument("--transactions", type=int)
    p.add_argument("--items", type=int)
    p.add_argument("--avg-length", type=float)
    p.add_argument("--zipf", type=float)

    p = sub.add_parser("bench", help="per-step latency distribution")
    common(p)
    p.add_argument("--steps", type=int)
    return parser


def make_config(argv) -> JobConfig:
    args = build_parser().parse_args(argv)
    base: dict = {}
    if args.config:
        base = json.loads(Path(args.config).read_text(encoding="utf-8"))
    cfg = JobConfig.from_dict({**base, "command": args.command})
    for f in fields(JobConfig):
        if f.name == "command":
            continue
        value = getattr(args, f.name, None)
        if value is not None:
            setattr(cfg, f.name, value)
    env = os.environ.get("BJDM_SAMPLER_THREADS")
    if env:
        try:
            cfg.parallelism = int(env)
        except ValueError:
            raise UsageError("BJDM_SAMPLER_THREADS must be an integer") from None
    cfg.validate()
    if getattr(args, "save_config", None):
        write_file(args.save_config, cfg.to_json())
    return cfg


def load_dataset(path, fmt="auto"):
    if fmt == "auto":
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
        fmt = "seq" if "-2" in text.split() else "trans"
    return read_sequential(path) if fmt == "seq" else read_transactional(path)


def _write_dataset(path, dataset):
    if hasattr(dataset, "transactions"):
        write_file(path, write_transactional(dataset))
    else:
        write_file(path, write_sequential(dataset))


def _sampler_config(cfg: JobConfig, algo: str, dataset) -> SamplerConfig:
    swaps = cfg.swaps
    if cfg.k is not None:
        swaps = int(cfg.k * dataset.total_length)
    return SamplerConfig(algo, swaps, cfg.seed, check_invariants=cfg.check_invariants)


def _emit(cfg: JobConfig, text: str):
    if cfg.out:
        write_file(cfg.out, text)
    else:
        sys.stdout.write(text)


def cmd_sample(cfg: JobConfig) -> None:
    observed = load_dataset(cfg.input[0], cfg.format)
    algo = cfg.algo[0]
    sc = _sampler_config(cfg, algo, observed)
    out = Path(cfg.out or "samples")
    out.mkdir(parents=True, exist_ok=True)
    results = sample_many(observed, sc, cfg.samples, cfg.parallelism, with_times=True)
    observed_sum = bjdm_of_dataset(observed).checksum()
    ext = ".txt" if hasattr(observed, "sequences") else ".dat"
    chains = []
    for i, (ds, seconds) in enumerate(results):
        name = f"sample_{i:04d}{ext}"
        _write_dataset(out / name, ds)
        checksum = bjdm_of_dataset(ds).checksum()
        if algo.startswith("alice") and checksum != observed_sum:
            raise InvariantViolation(f"sample {i}: BJDM differs from the observed one")
        chains.append({"index": i, "file": name, "seconds": round(seconds, 6),
                       "bjdm_sha256": checksum})
    manifest = {
        "input": str(cfg.input[0]),
        "sampler": algo,
        "seed": cfg.seed,
        "num_swaps": sc.swaps_for(observed),
        "observed_bjdm_sha256": observed_sum,
        "chains": chains,
    }
    write_file(out / "manifest.json", to_json(manifest))


def cmd_convergence(cfg: JobConfig) -> None:
    observed = load_dataset(cfg.input[0], cfg.format)
    lines = ["sampler,k,arsd,seconds"]
    for algo in cfg.algo:
        sc = SamplerConfig(algo, None, cfg.seed, check_invariants=cfg.check_invariants)
        for k, value, seconds in convergence_trace(observed, sc, cfg.k_grid, cfg.theta):
            lines.append(f"{algo},{k:g},{value:.6g},{seconds:.3f}")
    _emit(cfg, "\n".join(lines) + "\n")


def cmd_significance(cfg: JobConfig) -> None:
    observed = load_dataset(cfg.input[0], cfg.format)
    algo = cfg.algo[0]
    sc = _sampler_config(cfg, algo, observed)
    samples = sample_many(observed, sc, cfg.samples, cfg.parallelism)
    report = {"sampler": algo, "seed": cfg.seed, "num_swaps": sc.swaps_for(observed),
              "samples": cfg.samples}
    report.update(significance_report(observed, samples, cfg.theta, cfg.direction))
    if cfg.stats_csv:
        rows = [(i, "fi-count", n) for i, n in enumerate(report["sampled_fi_counts"])]
        write_file(cfg.stats_csv, statistics_csv(rows))
    if cfg.wy_outer:
        # fresh chains from a derived seed, independent of the ones above
        extra = SamplerConfig(algo, sc.num_swaps, cfg.seed + 1,
                              check_invariants=cfg.check_invariants)
        pool = sample_many(observed, extra, cfg.wy_outer + cfg.wy_inner, cfg.parallelism)
        wy = westfall_young(observed, pool[:cfg.wy_outer], pool[cfg.wy_outer:],
                            cfg.theta, cfg.delta, cfg.direction)
        labels = observed.item_labels
        wy["significant"] = [
            {"pattern": format_patterns([p], labels).split(" #SUP")[0],
             "support": p.support, "pvalue": pv}
            for p, pv in wy["significant"]]
        report["westfall_young"] = wy
    _emit(cfg, to_json(report))


def cmd_mine(cfg: JobConfig) -> None:
    dataset = load_dataset(cfg.input[0], cfg.format)
    patterns = mine(dataset, cfg.theta)
    _emit(cfg, format_patterns(patterns, dataset.item_labels))
    hist = fi_length_histogram(patterns)
    sys.stderr.write(f"{len(patterns)} patterns; by length {hist}\n")


def cmd_gen(cfg: JobConfig) -> None:
    ds = generate_synthetic(cfg.transactions, cfg.items, cfg.avg_length, cfg.seed, cfg.zipf)
    _emit(cfg, write_transactional(ds))


def step_latencies(dataset, algo: str, steps: int, seed: int = 0) -> np.ndarray:
    """Wall time in seconds of each of ``steps`` proposer + acceptance calls."""
    sc = SamplerConfig(algo, steps, seed)
    chain = make_chain(dataset, sc)
    propose, _, correct, _ = ALGORITHMS[algo]
    clock = time.perf_counter
    out = np.empty(steps)
    for n in range(steps):
        t0 = clock()
        mh_step(chain, propose(chain), correct)
        out[n] = clock() - t0
    return out


def cmd_bench(cfg: JobConfig) -> None:
    lines = ["sampler,dataset,transactions,min_us,median_us,p95_us,max_us"]
    for path in cfg.input:
        dataset = load_dataset(path, cfg.format)
        for algo in cfg.algo:
            if (ALGORITHMS[algo][1] == "sequential") != hasattr(dataset, "sequences"):
                raise UsageError(f"{algo} cannot run on {path}")
            lat = step_latencies(dataset, algo, cfg.steps, cfg.seed) * 1e6
            q = np.percentile(lat, [0, 50, 95, 100])
            lines.append(f"{algo},{path},{len(dataset)}," + ",".join(f"{x:.3f}" for x in q))
    _emit(cfg, "\n".join(lines) + "\n")


HANDLERS = {
    "sample": cmd_sample,
    "convergence": cmd_convergence,
    "significance": cmd_significance,
    "mine": cmd_mine,
    "gen": cmd_gen,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    try:
        cfg = make_config(argv)
        HANDLERS[cfg.command](cfg)
    except SystemExit as exc:  # argparse
        return int(exc.code or 0)
    except InvariantViolation as exc:
        sys.stderr.write(f"invariant violation: {exc}\n")
        return EXIT_INVARIANT
    except (UsageError, DatasetFormatError, ValueError, TypeError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"I/O error: {exc}\n")
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
