"""Certified inter-sample constraint verification for linear systems.

A sampled linear system can satisfy polytopic state constraints at every
sampling instant yet leave the polytope between samples.  This package
bounds the worst excursion rigorously: each facet of the polytope induces a
scalar function of time over one sampling period, and a branch-and-bound
scheme built on interval arithmetic brackets its maximum to a requested
gap.  Every bound is certified, meaning floating-point rounding is pushed
outward so the reported enclosures are true statements about the real
trajectory, not about its floating-point shadow.

Layers, bottom up:

  * intervals        closed interval scalars and matrices, outward rounding
  * matexp           enclosures and point values of the matrix exponential
  * facet            the per-facet objective, derivatives, analytic cases
  * overestimators   concave surrogate bounds on indefinite windows
  * solver           the branch-and-bound maximizer
  * verifier, cli    system-level ingestion, batch verdicts, reports
"""

from .facet import (
    AnalyticCase,
    CaseKind,
    FacetProblem,
    derivative_inclusions,
    detect_analytic_case,
    eval_f,
    eval_f_prime,
    eval_f_second,
    nilpotent_polynomial,
    solve_eigenvector_case,
)
from .intervals import (
    Interval,
    IntervalMatrix,
    outward_rounding_enabled,
    rounding,
    set_outward_rounding,
)
from .matexp import (
    ExpParams,
    ScalingTooSmall,
    augmented_phi,
    interval_exp,
    point_exp,
    point_exp_enclosure,
)
from .overestimators import (
    AffineHat,
    BoundCertificate,
    ConcaveShift,
    HypothesisViolated,
    OverestimatorKind,
    QuadraticHat,
    bound_for,
    bound_type1,
    bound_type2,
    bound_type3,
    concave_max,
    default_tol_t,
)
from .solver import (
    ConfigInvalid,
    SolveReport,
    SolverConfig,
    SolveStatus,
    TraceEvent,
    solve,
    solve_with_trace,
)
from .verifier import (
    VERDICT_INCONCLUSIVE,
    VERDICT_SATISFIED,
    VERDICT_VIOLATION,
    FacetResult,
    QueryPoint,
    QueryReport,
    SystemSpec,
    VerificationReport,
    discretize,
    dump_json,
    dumps_json,
    facet_problems,
    facet_verdict,
    load_system,
    load_system_file,
    report_from_dict,
    report_to_dict,
    sample_rows,
    trace_event_to_dict,
    verify_query,
    verify_system,
    write_samples_csv,
)

__version__ = "0.1.0"

__all__ = [
    "AffineHat",
    "AnalyticCase",
    "BoundCertificate",
    "CaseKind",
    "ConcaveShift",
    "ConfigInvalid",
    "ExpParams",
    "FacetProblem",
    "FacetResult",
    "HypothesisViolated",
    "Interval",
    "IntervalMatrix",
    "OverestimatorKind",
    "QuadraticHat",
    "QueryPoint",
    "QueryReport",
    "ScalingTooSmall",
    "SolveReport",
    "SolveStatus",
    "SolverConfig",
    "SystemSpec",
    "TraceEvent",
    "VERDICT_INCONCLUSIVE",
    "VERDICT_SATISFIED",
    "VERDICT_VIOLATION",
    "VerificationReport",
    "augmented_phi",
    "bound_for",
    "bound_type1",
    "bound_type2",
    "bound_type3",
    "concave_max",
    "default_tol_t",
    "derivative_inclusions",
    "detect_analytic_case",
    "discretize",
    "dump_json",
    "dumps_json",
    "eval_f",
    "eval_f_prime",
    "eval_f_second",
    "facet_problems",
    "facet_verdict",
    "interval_exp",
    "load_system",
    "load_system_file",
    "nilpotent_polynomial",
    "outward_rounding_enabled",
    "point_exp",
    "point_exp_enclosure",
    "report_from_dict",
    "report_to_dict",
    "rounding",
    "sample_rows",
    "set_outward_rounding",
    "solve",
    "solve_eigenvector_case",
    "solve_with_trace",
    "trace_event_to_dict",
    "verify_query",
    "verify_system",
    "write_samples_csv",
]
