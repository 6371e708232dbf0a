"""Benchmark command line.

Subcommands:

* ``run``      run an experiment's solvers and write results.csv/results.json
* ``gen``      dump a generated instance (A, b, x_star / D) to files
* ``metrics``  evaluate a solution file against a dumped instance

Experiment names: lasso, hyperspectral, pbn1, pbn2, stationary.  A config
file (``--config``) uses the flat ``key = value`` grammar documented in
README.md; command-line flags override config values.
"""

import argparse
import json
import math
import sys
from pathlib import Path

from ..core import ProblemInstance
from ..manifold import MatrixInstance, Orientation
from ..matio import load_matrix, load_vector, save_matrix, save_vector
from ..solver import kkt_residual, nnz
from . import instances as gen
from .metrics import rres, rsnr
from .runner import (EXPERIMENTS, ExperimentConfig, _kkt_matrix, build_instance,
                     config_from_mapping, parse_config_file, run_experiment)


def _add_shared(parser):
    parser.add_argument("--experiment", choices=EXPERIMENTS,
                        help="experiment name (or set it in --config)")
    parser.add_argument("--config", type=Path,
                        help="flat key = value config file")
    parser.add_argument("--seed", type=int, help="instance seed")
    parser.add_argument("--j", type=int, help="size index for lasso (1..5)")
    parser.add_argument("--snr-db", type=float, dest="snr_db",
                        help="target SNR in dB for hyperspectral")


def _config_from_args(args, **extra):
    raw = parse_config_file(args.config) if args.config else {}
    overrides = {"experiment": args.experiment, "seed": args.seed,
                 "j": args.j, "snr_db": args.snr_db}
    overrides.update(extra)
    cfg = config_from_mapping(raw, **overrides)
    return cfg


def _cmd_run(args):
    cfg = _config_from_args(
        args,
        out_dir=str(args.out) if args.out else None,
        trace=True if args.trace else None,
        record_time=False if args.no_timing else None,
        nnz_eps=args.nnz_eps,
    )
    outcome = run_experiment(cfg)
    for row in outcome["report"]["rows"]:
        print(f"{row['solver']}: nnz={row['nnz']} obj={row['obj']:.6e} "
              f"kkt={row['kkt']:.6e} ct={row['ct_seconds']:.4f}s "
              f"[{row['termination']}]")
    if outcome["paths"]:
        print(f"reports written to {outcome['paths']['csv'].parent}")
    return 0


def _cmd_gen(args):
    cfg = _config_from_args(args)
    built = build_instance(cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ext = "." + args.format

    meta = dict(built["meta"])
    meta["kind"] = built["kind"]
    if built["kind"] == "matrix":
        save_matrix(out / f"D{ext}", built["instance"].a)
        meta["files"] = {"D": f"D{ext}"}
    else:
        inst = built["instance"]
        save_matrix(out / f"A{ext}", inst.a)
        save_vector(out / f"b{ext}", inst.b)
        meta["files"] = {"A": f"A{ext}", "b": f"b{ext}"}
        if "x_star" in built:
            save_vector(out / f"x_star{ext}", built["x_star"])
            meta["files"]["x_star"] = f"x_star{ext}"
        if "pbn" in built:
            save_matrix(out / f"P{ext}", built["pbn"].p)
            meta["files"]["P"] = f"P{ext}"
    (out / "meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    print(f"instance written to {out}")
    return 0


def _cmd_metrics(args):
    meta = json.loads((Path(args.instance) / "meta.json").read_text())
    files = {k: Path(args.instance) / v for k, v in meta["files"].items()}
    out = {}
    if meta["kind"] == "matrix":
        d = load_matrix(files["D"])
        inst = MatrixInstance(d, orientation=Orientation.ROW_STOCHASTIC)
        x = load_matrix(args.solution)
        resid = inst.a @ (x) - inst.b
        out["obj"] = 0.5 * float((resid * resid).sum())
        out["nnz"] = nnz(x.ravel(), args.nnz_eps)
        out["kkt"] = _kkt_matrix(inst, x)
        out["rres"] = rres(d.ravel(), x)
    else:
        inst = ProblemInstance(load_matrix(files["A"]), load_vector(files["b"]))
        x = load_vector(args.solution)
        r = inst.a @ x - inst.b
        out["obj"] = 0.5 * float(r @ r)
        out["nnz"] = nnz(x, args.nnz_eps)
        out["kkt"] = kkt_residual(inst, x)
        if "x_star" in files:
            x_star = load_vector(files["x_star"])
            val = rsnr(x_star, x)
            out["rsnr_db"] = val if math.isfinite(val) else "inf"
    print(json.dumps(out, indent=2, sort_keys=True))
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="bench", description="benchmark runner for simplex-constrained "
        "sparse least squares solvers")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment and write reports")
    _add_shared(p_run)
    p_run.add_argument("--out", type=Path, help="output directory for reports")
    p_run.add_argument("--trace", action="store_true",
                       help="also write per-iteration trace CSVs")
    p_run.add_argument("--no-timing", action="store_true",
                       help="write ct_seconds as 0.0 for byte-identical reports")
    p_run.add_argument("--nnz-eps", type=float, default=None, dest="nnz_eps",
                       help="magnitude threshold of the nnz column (default 1e-6)")
    p_run.set_defaults(func=_cmd_run)

    p_gen = sub.add_parser("gen", help="dump a generated instance to files")
    _add_shared(p_gen)
    p_gen.add_argument("--out", type=Path, required=True,
                       help="output directory for this instance")
    p_gen.add_argument("--format", choices=("csv", "bin"), default="csv")
    p_gen.set_defaults(func=_cmd_gen)

    p_met = sub.add_parser("metrics", help="evaluate a solution file")
    p_met.add_argument("--solution", type=Path, required=True)
    p_met.add_argument("--instance", type=Path, required=True,
                       help="instance directory written by 'bench gen'")
    p_met.add_argument("--nnz-eps", type=float, default=1e-6, dest="nnz_eps")
    p_met.set_defaults(func=_cmd_metrics)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
