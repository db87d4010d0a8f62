"""Echo state network benchmarks with a pluggable activation registry.

Builds fixed random reservoirs, trains linear readouts by ridge regression,
generates four benchmark time series, and scores teacher-forced and
free-running prediction with logNMSE and exact Wasserstein distances
between delay-coordinate attractor clouds.
"""

from .activations import ActivationFn, REGISTRY_NAMES, get_activation, register, registry
from .harness import (
    ExperimentConfig,
    ExperimentResult,
    aggregate,
    emit_outputs,
    run_experiment,
    run_free_running_task,
    run_normal_task,
)
from .metrics import (
    AttractorCloud,
    TransportPlan,
    embed_delay,
    log_nmse,
    shuffle_surrogate,
    solve_assignment,
    wasserstein_distance,
)
from .readout import ReadoutWeights, fit_readout, predict
from .reservoir import (
    DivergenceError,
    Reservoir,
    ReservoirConfig,
    build_reservoir,
    spectral_radius,
)
from .timeseries import (
    Dataset,
    SeriesSpec,
    Split,
    gen_logistic,
    gen_mackey_glass,
    gen_narma,
    make_dataset,
)

__version__ = "0.1.0"

__all__ = [
    "ActivationFn",
    "REGISTRY_NAMES",
    "get_activation",
    "register",
    "registry",
    "ExperimentConfig",
    "ExperimentResult",
    "aggregate",
    "emit_outputs",
    "run_experiment",
    "run_free_running_task",
    "run_normal_task",
    "AttractorCloud",
    "TransportPlan",
    "embed_delay",
    "log_nmse",
    "shuffle_surrogate",
    "solve_assignment",
    "wasserstein_distance",
    "ReadoutWeights",
    "fit_readout",
    "predict",
    "DivergenceError",
    "Reservoir",
    "ReservoirConfig",
    "build_reservoir",
    "spectral_radius",
    "Dataset",
    "SeriesSpec",
    "Split",
    "gen_logistic",
    "gen_mackey_glass",
    "gen_narma",
    "make_dataset",
    "__version__",
]
