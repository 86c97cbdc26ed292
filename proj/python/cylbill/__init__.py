"""Billiards among cylinders on the edges of the cubic lattice."""

from ._core import (
    ConstructionError,
    construct,
    count_reduced_words,
    lower_bound_words,
    reduce,
    rotation_vector,
    run_cli,
    simulate,
    upper_bound,
)

__all__ = [
    "ConstructionError",
    "construct",
    "count_reduced_words",
    "lower_bound_words",
    "reduce",
    "rotation_vector",
    "run_cli",
    "simulate",
    "upper_bound",
]
