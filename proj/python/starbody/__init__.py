from ._core import (
    DomainError,
    NumericError,
    PreconditionError,
    calibrate_kappa,
    cf_expand,
    circle_coverage,
    eval_distance,
    gap_structure,
    halfwidth,
    lambda_value,
    nr_sequence,
    orbit_points,
    planar_coverage,
    rho_sequence,
    run_cli,
    union_measure,
)

__all__ = [
    "DomainError",
    "NumericError",
    "PreconditionError",
    "calibrate_kappa",
    "cf_expand",
    "circle_coverage",
    "eval_distance",
    "gap_structure",
    "halfwidth",
    "lambda_value",
    "nr_sequence",
    "orbit_points",
    "planar_coverage",
    "rho_sequence",
    "run_cli",
    "union_measure",
]
