"""Hermite-chaos calculus, Mehler kernels and Gaussian Hardy-space
functionals for the Ornstein-Uhlenbeck semigroup."""

from ._gausshardy import (
    admissibility,
    analyze,
    apply_semigroup,
    gauss_hermite_rule,
    gaussian_ball_measure,
    h1_norms,
    hermite_eval,
    mehler,
    reproducing_constant,
    riesz,
    run_suite,
    suite_names,
    synthesize,
    tensor_grid,
)

__all__ = [
    "admissibility",
    "analyze",
    "apply_semigroup",
    "gauss_hermite_rule",
    "gaussian_ball_measure",
    "h1_norms",
    "hermite_eval",
    "mehler",
    "reproducing_constant",
    "riesz",
    "run_suite",
    "suite_names",
    "synthesize",
    "tensor_grid",
]
