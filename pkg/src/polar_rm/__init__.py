"""Polar-code rate matching organised by binary domination."""

from .codec import encode, sc_decode, zero_llr_propagate
from .domination import Posequence, count_posequences, is_posequence
from .exceptions import CapacityError, InvalidPatternError, UnsupportedSizeError
from .puncture import incapable_set, psi_family, widely_equivalent_patterns
from .ratematch import RmConfig, allocate_channels, dematch, rate_match, zero_capacity_set
from .shorten import fixed_set

__all__ = [
    "CapacityError",
    "InvalidPatternError",
    "Posequence",
    "RmConfig",
    "UnsupportedSizeError",
    "allocate_channels",
    "count_posequences",
    "dematch",
    "encode",
    "fixed_set",
    "incapable_set",
    "is_posequence",
    "psi_family",
    "rate_match",
    "sc_decode",
    "widely_equivalent_patterns",
    "zero_capacity_set",
    "zero_llr_propagate",
]
