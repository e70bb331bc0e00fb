"""Meta-learning online control for linear dynamical systems.

Thin wrapper around the compiled core. The heavy lifting (task-level online
control, meta-initialization learners, baselines, the benchmark harness) is
C++; this package exposes the main operations plus a JSON-parsing
convenience for experiment summaries.
"""

import json as _json

from ._core import (
    ConfigurationError,
    ConstantsBundle,
    DacDomain,
    DacParams,
    DivergenceError,
    StabilityCertificate,
    SynthesisError,
    SystemBounds,
    SystemMatrices,
    compute_constants,
    control_action,
    default_step_size,
    emit_disturbance,
    horizon,
    operator_norm,
    project,
    recover_disturbance,
    run_acceptance,
    run_experiment,
    step,
    synthesize_stabilizer,
    verify_strong_stability,
)

__all__ = [
    "ConfigurationError",
    "ConstantsBundle",
    "DacDomain",
    "DacParams",
    "DivergenceError",
    "StabilityCertificate",
    "SynthesisError",
    "SystemBounds",
    "SystemMatrices",
    "compute_constants",
    "control_action",
    "default_step_size",
    "emit_disturbance",
    "horizon",
    "operator_norm",
    "project",
    "recover_disturbance",
    "run_acceptance",
    "run_experiment",
    "run_experiment_summary",
    "step",
    "synthesize_stabilizer",
    "verify_strong_stability",
]


def run_experiment_summary(config_text):
    """Runs an experiment from a config document and returns the parsed
    summary (a dict mirroring summary.json)."""
    return _json.loads(run_experiment(config_text))
