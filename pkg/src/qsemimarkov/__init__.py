"""Quantum semi-Markov dynamics and non-Markovianity measures.

Construct renewal (semi-Markov) quantum processes from waiting-time
distributions, evolve them through time-local and memory-kernel master
equations, and quantify their departure from semigroup dynamics:

- ``semimarkov``: waiting-time distributions, the dephasing and non-unital
  qubit families, coherence factors q(t) and canonical rates gamma(t),
  time-local evolution, memory kernels, and a classical Monte Carlo
  renewal simulator.
- ``quantum``: states, Kraus/superoperator/Choi conversions, CPTP checks,
  intermediate maps, and generator snapshots.
- ``measures``: the deviation-from-semigroup measure xi (rate and Choi
  routes, fixed and minimized references), zeta = xi/(1+xi), trace-distance
  revivals, CP-divisibility scans with a boundary bisection, and Holevo
  information curves.
- ``numerics``: Hermitian eigensolves, trace norms, entropies, adaptive
  quadrature with singularity excision, a Volterra integro-differential
  solver, golden-section minimization, and bracketed root finding.
- ``emitters`` / ``cli``: CSV/JSON/SVG serialization behind the ``qsm``
  command-line tool.

All randomness is counter-based and seeded explicitly; all evaluation
functions are pure, so sweeps parallelize with deterministic output.
"""

from .errors import (
    ConfigError,
    DimensionMismatch,
    DomainError,
    GridError,
    InvalidState,
    NoConvergence,
    NonHermitianInput,
    NoSignChange,
    NumericalError,
    QsmError,
    SingularMap,
    Singularity,
    SingularityOnGrid,
    ToleranceNotMet,
    UnsupportedVariant,
)
from .numerics import (
    QuadratureResult,
    Spectrum,
    VolterraSolution,
    adaptive_quad,
    binary_entropy,
    find_root,
    hermitian_eig,
    minimize_scalar,
    solve_volterra,
    trace_norm,
    von_neumann_entropy,
)
from .quantum import (
    CPTPReport,
    DephasingGenerator,
    ProjectorGenerator,
    apply_kraus,
    apply_superop,
    check_density_matrix,
    choi_of_generator,
    choi_of_map,
    choi_of_superop,
    intermediate_map,
    is_cptp,
    kraus_from_choi,
    kraus_trace_defect,
    superop_of_kraus,
    weyl_z,
)
from .semimarkov import (
    ClassicalSimResult,
    DeltaKernel,
    DephasingSemiMarkov,
    ExpConvolutionWTD,
    ExponentialKernel,
    ExponentialWTD,
    NonUnitalSemiMarkov,
    REGIME_DIVISIBLE,
    REGIME_INDIVISIBLE,
    REGIME_SEMIGROUP,
    TanhSechWTD,
    classical_jump_simulate,
    coherence_zeros,
    eta,
    evolve_timelocal,
    gamma_dephasing,
    gamma_nonunital,
    jump_superop,
    kernel_closed_form,
    map_at,
    q_derivative,
    q_of_t,
    superop_at,
)
from .measures import (
    BLPResult,
    BoundaryEstimate,
    DivisibilityReport,
    MINUS_STATE,
    MeasureResult,
    PLUS_STATE,
    SSSConfig,
    blp_measure,
    cp_divisibility_scan,
    divisibility_boundary,
    holevo_curve,
    sss_choi_form,
    sss_measure,
    sss_rate_form,
)
from .emitters import JSON_SCHEMA, ResultTable, to_csv, to_json, to_svg

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "QsmError", "ConfigError", "UnsupportedVariant", "NumericalError",
    "NonHermitianInput", "NoConvergence", "InvalidState", "DomainError",
    "ToleranceNotMet", "GridError", "NoSignChange", "DimensionMismatch",
    "SingularMap", "Singularity", "SingularityOnGrid",
    # numerics
    "Spectrum", "QuadratureResult", "VolterraSolution", "hermitian_eig",
    "trace_norm", "von_neumann_entropy", "binary_entropy", "adaptive_quad",
    "solve_volterra", "minimize_scalar", "find_root",
    # quantum
    "weyl_z", "check_density_matrix", "apply_kraus", "kraus_trace_defect",
    "superop_of_kraus", "apply_superop", "choi_of_map", "choi_of_superop",
    "kraus_from_choi", "CPTPReport", "is_cptp", "intermediate_map",
    "DephasingGenerator", "ProjectorGenerator", "choi_of_generator",
    # semimarkov
    "ExponentialWTD", "ExpConvolutionWTD", "TanhSechWTD", "DeltaKernel",
    "ExponentialKernel", "kernel_closed_form", "eta", "REGIME_SEMIGROUP",
    "REGIME_DIVISIBLE", "REGIME_INDIVISIBLE", "DephasingSemiMarkov",
    "NonUnitalSemiMarkov", "q_of_t", "q_derivative", "gamma_dephasing",
    "gamma_nonunital", "coherence_zeros", "map_at", "superop_at",
    "jump_superop", "evolve_timelocal", "ClassicalSimResult",
    "classical_jump_simulate",
    # measures
    "PLUS_STATE", "MINUS_STATE", "SSSConfig", "MeasureResult",
    "sss_rate_form", "sss_choi_form", "sss_measure", "BLPResult",
    "blp_measure", "DivisibilityReport", "cp_divisibility_scan",
    "BoundaryEstimate", "divisibility_boundary", "holevo_curve",
    # emitters
    "ResultTable", "to_csv", "to_json", "to_svg", "JSON_SCHEMA",
]
