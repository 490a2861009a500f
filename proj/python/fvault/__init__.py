"""Improved fuzzy vault, record-multiplicity attacks and security bounds."""

from ._fvault import (
    FormatError,
    brute_force,
    char_poly,
    enroll,
    experiment_full,
    experiment_partial,
    full_recovery,
    full_recovery_lower_bound,
    full_recovery_upper_bound,
    gf_mul,
    leakage_bound,
    partial_recovery,
    sample_sets,
    single_record_bound,
    unlock,
)

__all__ = [
    "FormatError",
    "brute_force",
    "char_poly",
    "enroll",
    "experiment_full",
    "experiment_partial",
    "full_recovery",
    "full_recovery_lower_bound",
    "full_recovery_upper_bound",
    "gf_mul",
    "leakage_bound",
    "partial_recovery",
    "sample_sets",
    "single_record_bound",
    "unlock",
]
