"""Experiment orchestration: build an instance, run solvers, write reports.

A run produces ``results.csv`` with the fixed schema

    solver,nnz,kkt,obj,ct_seconds,iterations,lambda_final,termination

plus ``results.json`` carrying the same rows with experiment-specific extras
(reconstruction SNR, stationarity residual, constituent-network count), one
``solution_<label>.csv`` per solver, and optional per-iteration trace files
``trace_<label>.csv`` with columns iter,F,lambda,alpha,step_norm.

Initial guesses follow the benchmark convention x0 = 1/n and y0 = 1/sqrt(n)
(entrywise for the matrix problems).  With record_time disabled the timing
column is written as 0.0 so that reports of a fixed seed are byte-identical.
"""

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..baselines import AdmmParams, PgParams, admm_solve, pg_solve, project_simplex
from ..manifold import MatrixInstance, gpg_solve_matrix, objective_p
from ..solver import GpgParams, gpg_solve, kkt_residual, nnz
from . import instances as gen
from .metrics import rres, rsnr

EXPERIMENTS = ("lasso", "hyperspectral", "pbn1", "pbn2", "stationary")

_EXPERIMENT_STOPPING = {
    "lasso": (1e-4, 2000),
    "hyperspectral": (1e-5, 3000),
    "pbn1": (1e-5, 3000),
    "pbn2": (1e-5, 3000),
    "stationary": (1e-6, 6000),
}

_LASSO_LAMBDA = {1: 1e-2, 2: 1e-2 / math.sqrt(2.0), 3: 1e-2 / math.sqrt(3.0),
                 4: 0.5e-2, 5: 0.5e-2}

# Starting step of the adaptive sphere solver, tuned per instance family (the
# gradient scale at the uniform start differs by orders of magnitude between
# them; "reasonably large" is family-specific).
_GPG_ALPHA0 = {"lasso": 1.0, "hyperspectral": 1e-2, "pbn1": 2.0, "pbn2": 2.0,
               "stationary": 2.0}


@dataclass
class SolverSpec:
    """One table row: a method name, a report label, and parameter overrides."""

    method: str  # "pg" | "admm" | "gpg"
    label: str
    params: dict = field(default_factory=dict)


@dataclass
class ExperimentConfig:
    experiment: str
    j: int = 1
    snr_db: float = 40.0
    seed: int = 0
    solvers: list | None = None  # None -> experiment defaults
    tol: float | None = None
    it_max: int | None = None
    nnz_eps: float = 1e-6
    out_dir: str | None = None
    trace: bool = False
    record_time: bool = True

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        if self.experiment == "lasso" and not 1 <= self.j <= 5:
            raise ValueError("j must lie in 1..5")

    def stopping(self):
        tol, it_max = _EXPERIMENT_STOPPING[self.experiment]
        return (self.tol if self.tol is not None else tol,
                self.it_max if self.it_max is not None else it_max)


def default_solvers(cfg: ExperimentConfig):
    """The benchmark's standard solver set for each experiment."""
    a0 = _GPG_ALPHA0[cfg.experiment]
    if cfg.experiment == "lasso":
        lam = _LASSO_LAMBDA[cfg.j]
        return [
            SolverSpec("pg", "pg"),
            SolverSpec("admm", "admm", {"lam": lam}),
            SolverSpec("gpg", "gpg_fixed_lambda",
                       {"alpha0": a0, "lambda0": lam, "fixed_lambda": True}),
            SolverSpec("gpg", "gpg_varied_lambda", {"alpha0": a0, "lambda0": lam}),
        ]
    if cfg.experiment == "hyperspectral":
        return [
            SolverSpec("pg", "pg"),
            SolverSpec("admm", "admm", {"lam": 1e-2}),
            SolverSpec("gpg", "gpg_fixed_lambda",
                       {"alpha0": a0, "lambda0": 1e-2, "fixed_lambda": True}),
            SolverSpec("gpg", "gpg_varied_lambda", {"alpha0": a0, "lambda0": 3e-2}),
        ]
    if cfg.experiment in ("pbn1", "pbn2"):
        return [
            SolverSpec("pg", "pg"),
            SolverSpec("admm", "admm", {"lam": 1e-2}),
            SolverSpec("gpg", "gpg_fixed_lambda",
                       {"alpha0": a0, "lambda0": 1e-2, "fixed_lambda": True}),
            SolverSpec("gpg", "gpg_varied_lambda", {"alpha0": a0, "lambda0": 1e-2}),
        ]
    # stationary: the matrix problem is run with the sphere method only
    overrides = {"alpha0": a0, "delta2": 1e-5, "rho3": 0.95}
    return [
        SolverSpec("gpg", "gpg_fixed_lambda",
                   {"lambda0": 1e-3, "fixed_lambda": True, **overrides}),
        SolverSpec("gpg", "gpg_lambda0_1e-3", {"lambda0": 1e-3, **overrides}),
        SolverSpec("gpg", "gpg_lambda0_5e-4", {"lambda0": 5e-4, **overrides}),
    ]


def build_instance(cfg: ExperimentConfig):
    """Instantiate the configured experiment's data.

    Returns a dict with 'kind' ("vector" or "matrix"), 'instance', optional
    'x_star', and descriptive 'meta'.
    """
    if cfg.experiment == "lasso":
        inst, x_star = gen.gen_lasso(cfg.j, cfg.seed)
        meta = {"experiment": cfg.experiment, "j": cfg.j, "seed": cfg.seed,
                "m": inst.m, "n": inst.n, "x_star_nnz": nnz(x_star, 0.0)}
        return {"kind": "vector", "instance": inst, "x_star": x_star, "meta": meta}
    if cfg.experiment == "hyperspectral":
        inst, x_star = gen.gen_hyperspectral(cfg.snr_db, cfg.seed)
        meta = {"experiment": cfg.experiment, "snr_db": cfg.snr_db,
                "seed": cfg.seed, "m": inst.m, "n": inst.n,
                "x_star_nnz": nnz(x_star, 0.0)}
        return {"kind": "vector", "instance": inst, "x_star": x_star, "meta": meta}
    if cfg.experiment in ("pbn1", "pbn2"):
        p = gen.P1 if cfg.experiment == "pbn1" else gen.P2
        pbn = gen.build_pbn(p)
        meta = {"experiment": cfg.experiment, "seed": cfg.seed, "n_bn": pbn.n_bn,
                "m": pbn.problem.m, "n": pbn.problem.n}
        return {"kind": "vector", "instance": pbn.problem, "meta": meta,
                "pbn": pbn}
    inst = gen.stationary_instance()
    meta = {"experiment": "stationary", "seed": cfg.seed,
            "n": inst.unknown_shape[0]}
    return {"kind": "matrix", "instance": inst, "meta": meta}


def _kkt_matrix(inst: MatrixInstance, x) -> float:
    """Row-wise natural-map residual for the row-stochastic problem."""
    g = inst.ata @ x - inst.atb
    step = x - g
    projected = np.vstack([project_simplex(step[i]) for i in range(x.shape[0])])
    return float(np.linalg.norm(x - projected))


def _run_one(spec: SolverSpec, built, tol, it_max):
    inst = built["instance"]
    params = dict(spec.params)
    if built["kind"] == "matrix":
        if spec.method != "gpg":
            raise ValueError(f"{spec.method} does not support matrix instances")
        n = inst.unknown_shape[0]
        y0 = np.full(inst.unknown_shape, 1.0 / math.sqrt(n))
        gp = GpgParams(tol=tol, it_max=it_max, **params)
        result = gpg_solve_matrix(inst, gp, y0)
        obj = objective_p(inst, result.x)
        kkt = _kkt_matrix(inst, result.x)
        return result, obj, kkt

    n = inst.n
    if spec.method == "gpg":
        y0 = np.full(n, 1.0 / math.sqrt(n))
        gp = GpgParams(tol=tol, it_max=it_max, **params)
        result = gpg_solve(inst, gp, y0)
    elif spec.method == "pg":
        x0 = np.full(n, 1.0 / n)
        result = pg_solve(inst, PgParams(tol=tol, it_max=it_max, **params), x0)
    elif spec.method == "admm":
        x0 = np.full(n, 1.0 / n)
        result = admm_solve(inst, AdmmParams(tol=tol, it_max=it_max, **params), x0)
    else:
        raise ValueError(f"unknown solver method {spec.method!r}")
    r = inst.a @ result.x - inst.b
    obj = 0.5 * float(r @ r)
    kkt = kkt_residual(inst, result.x)
    return result, obj, kkt


def run_experiment(cfg: ExperimentConfig):
    """Run every configured solver and assemble (and optionally write) reports."""
    built = build_instance(cfg)
    tol, it_max = cfg.stopping()
    specs = cfg.solvers if cfg.solvers is not None else default_solvers(cfg)

    rows = []
    solutions = {}
    traces = {}
    for spec in specs:
        try:
            result, obj, kkt = _run_one(spec, built, tol, it_max)
        except Exception as exc:  # record the failure, keep the run going
            rows.append({
                "solver": spec.label, "nnz": -1, "kkt": math.nan, "obj": math.nan,
                "ct_seconds": 0.0, "iterations": 0, "lambda_final": math.nan,
                "termination": "error", "error": f"{type(exc).__name__}: {exc}",
            })
            continue
        ct = result.wall_time if cfg.record_time else 0.0
        row = {
            "solver": spec.label,
            "nnz": nnz(np.ravel(result.x), cfg.nnz_eps),
            "kkt": kkt,
            "obj": obj,
            "ct_seconds": ct,
            "iterations": result.iterations,
            "lambda_final": result.lambda_final,
            "termination": result.termination.value,
        }
        if "x_star" in built:
            row["rsnr_db"] = rsnr(built["x_star"], result.x)
        if built["kind"] == "matrix":
            row["rres"] = rres(gen.D1, result.x)
        rows.append(row)
        solutions[spec.label] = result.x
        traces[spec.label] = result

    report = {"meta": built["meta"], "tol": tol, "it_max": it_max,
              "nnz_eps": cfg.nnz_eps, "rows": rows}
    paths = {}
    if cfg.out_dir is not None:
        paths = _write_reports(cfg, report, solutions, traces)
    return {"report": report, "solutions": solutions, "results": traces,
            "paths": paths, "built": built}


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


_CSV_COLUMNS = ("solver", "nnz", "kkt", "obj", "ct_seconds", "iterations",
                "lambda_final", "termination")


def _write_reports(cfg, report, solutions, traces):
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "results.csv"
    lines = [",".join(_CSV_COLUMNS)]
    for row in report["rows"]:
        lines.append(",".join(_fmt(row.get(col, math.nan)) for col in _CSV_COLUMNS))
    csv_path.write_text("\n".join(lines) + "\n")

    json_path = out / "results.json"
    json_path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")

    paths = {"csv": csv_path, "json": json_path, "solutions": {}, "traces": {}}
    for label, x in solutions.items():
        sol_path = out / f"solution_{label}.csv"
        np.savetxt(sol_path, np.atleast_2d(x), delimiter=",", fmt="%.17g")
        paths["solutions"][label] = sol_path
    if cfg.trace:
        for label, result in traces.items():
            paths["traces"][label] = _write_trace(out / f"trace_{label}.csv", result)
    return paths


def _write_trace(path, result):
    lines = ["iter,F,lambda,alpha,step_norm"]
    f_hist = result.f_history
    lam = result.lambda_history
    alpha = result.alpha_history
    step = result.step_norm_history
    for k in range(len(f_hist)):
        lam_k = lam[k - 1] if 0 < k <= len(lam) else math.nan
        alpha_k = alpha[k - 1] if 0 < k <= len(alpha) else math.nan
        step_k = step[k - 1] if 0 < k <= len(step) else math.nan
        lines.append(
            f"{k},{_fmt(float(f_hist[k]))},{_fmt(float(lam_k))},"
            f"{_fmt(float(alpha_k))},{_fmt(float(step_k))}"
        )
    path.write_text("\n".join(lines) + "\n")
    return path


def parse_config_file(path):
    """Parse a flat key-value config file into a raw dict.

    Grammar: one ``key = value`` pair per line, ``#`` starts a comment, blank
    lines are ignored.  Dotted keys (``gpg.lambda0 = 0.03``) collect per-solver
    parameter overrides.  ``solvers`` is a comma-separated subset of
    pg, admm, gpg_fixed, gpg.
    """
    raw = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if not key:
            raise ValueError(f"{path}:{lineno}: empty key")
        raw[key] = _parse_scalar(value)
    return raw


def _parse_scalar(text):
    lowered = text.lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


_NAMED_SOLVERS = {
    "pg": ("pg", {}),
    "admm": ("admm", {}),
    "gpg_fixed": ("gpg", {"fixed_lambda": True}),
    "gpg": ("gpg", {}),
}


def config_from_mapping(raw, **overrides) -> ExperimentConfig:
    """Build an ExperimentConfig from parsed key-value pairs plus overrides."""
    raw = dict(raw)
    raw.update({k: v for k, v in overrides.items() if v is not None})
    solver_names = raw.pop("solvers", None)
    per_solver = {}
    for key in [k for k in raw if "." in k]:
        name, param = key.split(".", 1)
        per_solver.setdefault(name, {})[param] = raw.pop(key)

    known = {f.name for f in ExperimentConfig.__dataclass_fields__.values()}
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    cfg = ExperimentConfig(**raw)

    if solver_names is not None:
        specs = []
        for name in [s.strip() for s in str(solver_names).split(",") if s.strip()]:
            if name not in _NAMED_SOLVERS:
                raise ValueError(f"unknown solver {name!r} "
                                 f"(choose from {sorted(_NAMED_SOLVERS)})")
            method, base = _NAMED_SOLVERS[name]
            specs.append(SolverSpec(method, name,
                                    {**base, **per_solver.get(name, {})}))
        cfg.solvers = specs
    elif per_solver:
        specs = default_solvers(cfg)
        rename = {"gpg_fixed": "gpg_fixed_lambda", "gpg": "gpg_varied_lambda"}
        for name, params in per_solver.items():
            target = rename.get(name, name)
            for spec in specs:
                if spec.label == target or spec.label == name:
                    spec.params.update(params)
                    break
            else:
                raise ValueError(f"override for unknown solver {name!r}")
        cfg.solvers = specs
    return cfg
