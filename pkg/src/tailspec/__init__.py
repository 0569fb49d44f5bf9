"""tailspec: a numerical laboratory for heavy-tailed random matrix bounds.

The package has five layers:

* :mod:`tailspec.tailmodels` — column distributions: exact samplers,
  tails, moments and the small analytic calculators,
* :mod:`tailspec.speclab` — exact extremal sparse spectral statistics by
  support enumeration over a self-contained Jacobi eigensolver,
* :mod:`tailspec.bounds` — closed-form calculators for every bound,
* :mod:`tailspec.harness` — the seeded Monte Carlo experiments,
* :mod:`tailspec.cli` — the ``tailspec`` command-line front end
  (:mod:`tailspec.report` renders its CSV + figure suites).
"""

from .tailmodels import (
    GENERATOR_ID,
    ColumnModel,
    TailHypothesis,
    coupon_basis,
    gaussian,
    pareto,
    sample_column,
    scaled,
    second_moment,
    sym_weibull,
    truncated_pareto,
)
from .speclab import (
    ConvergenceError,
    ResourceCapError,
    SampleMatrix,
    SparseExtremum,
    bilinear_Q,
    covariance_deviation_S,
    exact_Ak,
    exact_Bk_sq,
    exact_delta_m,
    exact_Qk,
    generate_matrix,
    load_matrix,
    save_matrix,
)
from .harness import ExperimentSpec, TrialSummary, run_experiment

__version__ = "0.1.0"

__all__ = [
    "GENERATOR_ID",
    "ColumnModel",
    "TailHypothesis",
    "coupon_basis",
    "gaussian",
    "pareto",
    "sample_column",
    "scaled",
    "second_moment",
    "sym_weibull",
    "truncated_pareto",
    "ConvergenceError",
    "ResourceCapError",
    "SampleMatrix",
    "SparseExtremum",
    "bilinear_Q",
    "covariance_deviation_S",
    "exact_Ak",
    "exact_Bk_sq",
    "exact_delta_m",
    "exact_Qk",
    "generate_matrix",
    "load_matrix",
    "save_matrix",
    "ExperimentSpec",
    "TrialSummary",
    "run_experiment",
    "__version__",
]
