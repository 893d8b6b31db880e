"""Locality-sensitive hashing on the Hamming cube from error-correcting codes."""

from .bitvec import ErrorModel, Word, apply_error, hamming_distance, rho, sigma
from .distdist import (
    DistDist,
    PointSet,
    collision_probability,
    distance_distribution,
    distance_sum,
    error_exponent,
    rho_exponent,
)

__version__ = "0.1.0"

__all__ = [
    "DistDist",
    "ErrorModel",
    "PointSet",
    "Word",
    "apply_error",
    "collision_probability",
    "distance_distribution",
    "distance_sum",
    "error_exponent",
    "hamming_distance",
    "rho",
    "rho_exponent",
    "sigma",
]
