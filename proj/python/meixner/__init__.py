"""Multivariate Meixner polynomials and the birth-death process they diagonalise."""

from ._core import (
    MeixnerError,
    Model,
    Spectral,
    build_spectral,
    build_u,
    degenerate_spectrum,
    dense_spectrum,
    eigen_check,
    eigenvalue,
    meixner,
    meixner_1d,
    meixner_genfun,
    orthogonality_check,
    poly_table,
    simulate,
    solve_spectrum,
    transition_prob,
    verify,
    weight,
)

__all__ = [
    "MeixnerError",
    "Model",
    "Spectral",
    "build_spectral",
    "build_u",
    "degenerate_spectrum",
    "dense_spectrum",
    "eigen_check",
    "eigenvalue",
    "meixner",
    "meixner_1d",
    "meixner_genfun",
    "orthogonality_check",
    "poly_table",
    "simulate",
    "solve_spectrum",
    "transition_prob",
    "verify",
    "weight",
]
