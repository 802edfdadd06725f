"""Exact moments of the flat density-matrix ensemble and the probability simplex.

The exact engines (``combinat``, ``characters``, ``classical``, ``quantum``)
work in arbitrary-precision integer/rational arithmetic; ``montecarlo``
provides the floating-point verification oracle and ``cli`` the command-line
front end.
"""

from .classical import (
    DirichletSpec,
    SimplexMomentSpec,
    beta_function,
    dirichlet_moment,
    sample_simplex,
    simplex_moment,
)
from .combinat import (
    CycleType,
    Partition,
    class_order,
    enumerate_cycle_types,
    enumerate_partitions,
    lower_triangle_count,
    super_factorial,
    vandermonde,
)
from .characters import (
    PowerSumPoly,
    dim_char_sum,
    eval_power_sums,
    sym_character,
    unitary_char_eval,
    unitary_char_poly,
    unitary_char_ratio,
    weyl_dim,
)
from .errors import CapExceededError, DegenerateSpectrumError
from .montecarlo import (
    EstimateReport,
    KsReport,
    estimate_entry_moment,
    estimate_mgf,
    estimate_purity,
    ks_eigenvalue_check,
    sample_density,
)
from .quantum import (
    EntryMomentSpec,
    ScaledRational,
    TraceProductExpr,
    det_lemma_value,
    entry_moment,
    hs_volume,
    int_lemma_value,
    mgf_coefficient,
    moment_traces,
    omega_expand,
    purity_mean,
)

__version__ = "0.1.0"

__all__ = [
    "Partition",
    "CycleType",
    "enumerate_partitions",
    "enumerate_cycle_types",
    "class_order",
    "vandermonde",
    "super_factorial",
    "lower_triangle_count",
    "PowerSumPoly",
    "sym_character",
    "unitary_char_poly",
    "eval_power_sums",
    "unitary_char_eval",
    "unitary_char_ratio",
    "weyl_dim",
    "dim_char_sum",
    "SimplexMomentSpec",
    "DirichletSpec",
    "simplex_moment",
    "dirichlet_moment",
    "beta_function",
    "sample_simplex",
    "ScaledRational",
    "EntryMomentSpec",
    "TraceProductExpr",
    "hs_volume",
    "det_lemma_value",
    "int_lemma_value",
    "mgf_coefficient",
    "omega_expand",
    "moment_traces",
    "entry_moment",
    "purity_mean",
    "EstimateReport",
    "KsReport",
    "sample_density",
    "estimate_entry_moment",
    "estimate_purity",
    "estimate_mgf",
    "ks_eigenvalue_check",
    "CapExceededError",
    "DegenerateSpectrumError",
    "__version__",
]
