"""Balance, period, tuple and run statistics of sequences over Z_v.

The main source of sequences is the ElGamal construction: reduce the powers of
a primitive root g modulo v. Random balanced sequences serve as a baseline.
"""

from .errors import (
    ConfigurationError,
    InvariantViolation,
    ParameterError,
    ResourceCapError,
    UnsupportedRegimeError,
    ZvSeqError,
)
from .seqgen import ElGamalParams, SequenceZv, elgamal_sequence, random_balanced_sequence

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "ElGamalParams",
    "InvariantViolation",
    "ParameterError",
    "ResourceCapError",
    "SequenceZv",
    "UnsupportedRegimeError",
    "ZvSeqError",
    "elgamal_sequence",
    "random_balanced_sequence",
]
