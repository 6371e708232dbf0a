"""Benchmark harness: instance generators, metrics, experiment runner, CLI."""

from .instances import (D1, P1, P2, PbnInstance, build_pbn, gen_hyperspectral,
                        gen_lasso, stationary_instance)
from .metrics import rres, rsnr
from .rng import PortableRng
from .runner import (ExperimentConfig, SolverSpec, build_instance,
                     config_from_mapping, default_solvers, parse_config_file,
                     run_experiment)

__all__ = [
    "D1", "P1", "P2", "PbnInstance", "PortableRng", "ExperimentConfig",
    "SolverSpec", "build_instance", "build_pbn", "config_from_mapping",
    "default_solvers", "gen_hyperspectral", "gen_lasso", "parse_config_file",
    "rres", "rsnr", "run_experiment", "stationary_instance",
]
