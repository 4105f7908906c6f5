"""Two-type decomposable branching processes with immigration: simulation, exact moments and limit laws."""

import json

from ._core import (
    BudgetError,
    ConvergenceError,
    Error,
    Model,
    OverflowError,
    ValidationError,
    __version__,
    classify,
    laplace_joint_case2,
    laplace_joint_fosterney,
    laplace_sbp,
    run_acceptance,
    run_command,
    sbp_marginal_cdf,
)
from ._core import stationary_pmf as _stationary_pmf


def model_from_dict(spec):
    """Build a Model from a dict in the model-file format."""
    return Model.from_json(json.dumps(spec))


def stationary_pmf(offspring, immigration, N=256, M=4096):
    """pmf p_0..p_N of the stationary law for univariate law dicts."""
    return _stationary_pmf(json.dumps(offspring), json.dumps(immigration), N, M)


__all__ = [
    "BudgetError",
    "ConvergenceError",
    "Error",
    "Model",
    "OverflowError",
    "ValidationError",
    "__version__",
    "classify",
    "laplace_joint_case2",
    "laplace_joint_fosterney",
    "laplace_sbp",
    "model_from_dict",
    "run_acceptance",
    "run_command",
    "sbp_marginal_cdf",
    "stationary_pmf",
]
