"""Command line entry point: ``faithdp {gen,cluster,oracle,eval,bench}``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from ._errors import (
    DegenerateDataError,
    GuardRefusedError,
    InvalidConfigError,
    InvalidInputError,
    WorkerError,
)
from .core import DEFAULT_BATCH, DEFAULT_DC_SAMPLE, DEFAULT_K, DEFAULT_PERCENTILE, RunConfig
from .datagen import five_spirals, gaussian_blobs
from .distances import make_source
from .fileio import read_fdpm_header, read_labels, read_matrix, write_fdpm, write_labels, write_vectors
from .metrics import ari, nmi
from .oracle import MAX_ORACLE_N, oracle_dp
from .runtime import resolve_dc, run_pipeline

logger = logging.getLogger("faithdp")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_DATA = 4
EXIT_GUARD = 5

MAX_PRECOMPUTED_N = 20000


class UsageError(Exception):
    pass


def _parse_size(text):
    text = text.strip().lower()
    scale = {"k": 10**3, "m": 10**6}.get(text[-1:], 1)
    if scale != 1:
        text = text[:-1]
    try:
        return int(float(text) * scale)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size {text!r}") from None


def _default_workers():
    env = os.environ.get("FAITHDP_WORKERS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"FAITHDP_WORKERS must be an integer, got {env!r}") from None
    return None


def _add_model_args(p, with_parallel=True):
    p.add_argument("--input", required=True, help="FDPM or CSV data matrix")
    p.add_argument("--metric", choices=("euclidean", "cosine", "precomputed"), default="euclidean")
    p.add_argument("--kernel", choices=("gaussian", "cutoff"), default="gaussian")
    dc = p.add_mutually_exclusive_group()
    dc.add_argument("--dc", type=float, help="cutoff distance")
    dc.add_argument("--dc-percentile", type=float, default=DEFAULT_PERCENTILE,
                    help="estimate dc as this percentile of sampled pairwise distances")
    p.add_argument("--dc-sample", type=int, default=DEFAULT_DC_SAMPLE)
    c = p.add_mutually_exclusive_group()
    c.add_argument("--clusters", type=int, help="number of clusters")
    c.add_argument("--auto-c", action="store_true", help="choose the number of clusters automatically")
    p.add_argument("--seed", type=int, default=0)
    if with_parallel:
        p.add_argument("--k", type=int, default=DEFAULT_K, help="neighbors per point")
        p.add_argument("--batch", type=int, default=DEFAULT_BATCH, help="rows per distance block")
        p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", required=True, help="output directory")


def build_parser():
    parser = argparse.ArgumentParser(prog="faithdp", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a synthetic dataset")
    g.add_argument("--kind", choices=("spirals5", "blobs"), required=True)
    g.add_argument("--n", type=_parse_size, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--noise", type=float, default=0.05, help="spiral coordinate noise")
    g.add_argument("--clusters", type=int, default=3, help="blob count")
    g.add_argument("--dims", type=int, default=2, help="blob dimensionality")
    g.add_argument("--separation", type=float, default=10.0)
    g.add_argument("--sigma", type=float, default=1.0)
    g.add_argument("--out", required=True, help="output directory")

    c = sub.add_parser("cluster", help="run the blocked parallel pipeline")
    _add_model_args(c)
    c.add_argument("--vectors", action="store_true", help="also dump rho, mu, delta, gamma")

    o = sub.add_parser("oracle", help="brute-force reference run (n <= 20000)")
    _add_model_args(o, with_parallel=False)

    e = sub.add_parser("eval", help="NMI and ARI between two label files")
    e.add_argument("--pred", required=True)
    e.add_argument("--truth", required=True)

    b = sub.add_parser("bench", help="time the pipeline over a sweep of dataset sizes")
    b.add_argument("--kind", choices=("spirals5", "blobs"), default="spirals5")
    b.add_argument("--sizes", default="10k,20k,40k",
                   type=lambda s: [_parse_size(x) for x in s.split(",") if x])
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--kernel", choices=("gaussian", "cutoff"), default="gaussian")
    b.add_argument("--dc-percentile", type=float, default=DEFAULT_PERCENTILE)
    b.add_argument("--clusters", type=int, default=None)
    b.add_argument("--k", type=int, default=DEFAULT_K)
    b.add_argument("--batch", type=int, default=DEFAULT_BATCH)
    b.add_argument("--workers", type=int, default=None)
    b.add_argument("--out", help="CSV path (stdout when omitted)")
    return parser


def _load_source(args):
    path = Path(args.input)
    if args.metric == "precomputed":
        with open(path, "rb") as fh:
            is_fdpm = fh.read(4) == b"FDPM"
        if is_fdpm:
            n, d = read_fdpm_header(path)
            if n != d:
                raise InvalidInputError(f"precomputed input must be square, got {n}x{d}")
            if n > MAX_PRECOMPUTED_N:
                raise GuardRefusedError(f"precomputed input limited to n <= {MAX_PRECOMPUTED_N}")
        data = read_matrix(path, mmap=True)
        if data.shape[0] > MAX_PRECOMPUTED_N:
            raise GuardRefusedError(f"precomputed input limited to n <= {MAX_PRECOMPUTED_N}")
    else:
        data = read_matrix(path)
    return make_source(data, args.metric)


def _config(args, with_parallel=True):
    if args.clusters is None and not args.auto_c:
        logger.info("no --clusters given; choosing the cluster count automatically")
    workers = None
    if with_parallel:
        workers = args.workers if args.workers is not None else _default_workers()
    return RunConfig(
        kernel=args.kernel,
        dc=args.dc,
        dc_percentile=args.dc_percentile,
        dc_sample_size=args.dc_sample,
        K=args.k if with_parallel else DEFAULT_K,
        batch_size=args.batch if with_parallel else DEFAULT_BATCH,
        workers=workers,
        n_clusters=args.clusters,
        seed=args.seed,
    )


def cmd_gen(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.kind == "spirals5":
        X, y = five_spirals(args.n, args.noise, args.seed)
    else:
        X, y = gaussian_blobs(args.n, args.clusters, args.dims, args.separation, args.sigma, args.seed)
    write_fdpm(out / "points.fdpm", X)
    write_labels(out / "labels.csv", y)
    logger.info("wrote %d points to %s", X.shape[0], out)
    return EXIT_OK


def _write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_cluster(args):
    config = _config(args)
    source = _load_source(args)
    result, report = run_pipeline(source, config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_labels(out / "labels.csv", result.labels)
    payload = report.to_dict()
    payload["metric"] = args.metric
    payload["input"] = str(args.input)
    payload["centers"] = [int(c) for c in result.centers]
    _write_json(out / "report.json", payload)
    if args.vectors:
        write_vectors(out / "vectors.csv", result.rho, result.leading.mu,
                      result.leading.delta, result.gamma)
    return EXIT_OK


def cmd_oracle(args):
    config = _config(args, with_parallel=False)
    source = _load_source(args)
    if source.n > MAX_ORACLE_N:
        raise GuardRefusedError(f"oracle refuses n={source.n} > {MAX_ORACLE_N}")
    dc = resolve_dc(source, config) if source.n > 1 else float(config.dc or 1.0)
    res = oracle_dp(source, dc, config.kernel, config.n_clusters)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_labels(out / "labels.csv", res.labels)
    write_vectors(out / "vectors.csv", res.rho, res.mu, res.delta, res.gamma)
    _write_json(out / "report.json", {
        "config": config.to_dict(), "metric": args.metric, "n": source.n, "dc": dc,
        "n_clusters": int(res.centers.shape[0]), "centers": [int(c) for c in res.centers],
    })
    return EXIT_OK


def cmd_eval(args):
    pred = read_labels(args.pred)
    truth = read_labels(args.truth)
    if pred.shape != truth.shape:
        raise UsageError(f"label files differ in length: {pred.shape[0]} vs {truth.shape[0]}")
    print(json.dumps({"nmi": nmi(pred, truth), "ari": ari(pred, truth)}))
    return EXIT_OK


BENCH_FIELDS = (
    "n", "wall_s", "dc_s", "stage1_s", "stage2_s", "stage3_s", "workers", "batches",
    "minicenters", "peak_block_entries", "distance_entries", "dc", "n_clusters", "nmi", "ari",
)


def cmd_bench(args):
    workers = args.workers if args.workers is not None else _default_workers()
    rows = []
    for n in args.sizes:
        if args.kind == "spirals5":
            X, y = five_spirals(n, 0.05, args.seed)
            clusters = args.clusters or 5
        else:
            X, y = gaussian_blobs(n, args.clusters or 3, 2, 10.0, 1.0, args.seed)
            clusters = args.clusters or 3
        config = RunConfig(kernel=args.kernel, dc_percentile=args.dc_percentile, K=args.k,
                           batch_size=args.batch, workers=workers, n_clusters=clusters,
                           seed=args.seed)
        t = time.perf_counter()
        result, report = run_pipeline(make_source(X), config)
        wall = time.perf_counter() - t
        tm = report.timings
        rows.append({
            "n": n, "wall_s": f"{wall:.4f}", "dc_s": f"{tm['dc']:.4f}",
            "stage1_s": f"{tm['stage1']:.4f}", "stage2_s": f"{tm['stage2']:.4f}",
            "stage3_s": f"{tm['stage3']:.4f}", "workers": report.workers,
            "batches": report.n_batches, "minicenters": report.n_minicenters,
            "peak_block_entries": report.peak_block_entries,
            # every stage-1 block plus the central mini-center rows
            "distance_entries": n * n + report.n_minicenters * n,
            "dc": repr(report.dc), "n_clusters": report.n_clusters,
            "nmi": f"{nmi(result.labels, y):.6f}", "ari": f"{ari(result.labels, y):.6f}",
        })
        logger.info("n=%d done in %.2fs", n, wall)
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.DictWriter(fh, fieldnames=BENCH_FIELDS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    finally:
        if args.out:
            fh.close()
    return EXIT_OK


COMMANDS = {"gen": cmd_gen, "cluster": cmd_cluster, "oracle": cmd_oracle,
            "eval": cmd_eval, "bench": cmd_bench}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (UsageError, InvalidConfigError) as exc:
        print(f"faithdp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GuardRefusedError as exc:
        print(f"faithdp: refused: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (InvalidInputError, DegenerateDataError) as exc:
        print(f"faithdp: invalid data: {exc}", file=sys.stderr)
        return EXIT_DATA
    except WorkerError as exc:
        cause = exc.cause
        print(f"faithdp: {exc}", file=sys.stderr)
        if isinstance(cause, (InvalidInputError, DegenerateDataError)):
            return EXIT_DATA
        return 1
    except OSError as exc:
        print(f"faithdp: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
