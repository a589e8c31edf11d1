"""Exact resultants and discriminants of systems with two-block symmetric-group symmetry."""

__version__ = "0.1.0"

from .polyring import Polynomial, RingContext, parse
from .combinatorics import Partition, PartitionPair, enumerate_pairs, enumerate_partitions, multinomial_m
from .equivariant import EquivariantSystem, check_equivariance, check_invariance, divided_difference
from .resultant import macaulay_resultant, resultant, sylvester_resultant
from .decompose import a_exponent, decompose_discriminant, decompose_resultant, mu_exponent
from .oracle import random_equivariant_system, verify_decomposition, verify_discriminant

__all__ = [
    "Polynomial", "RingContext", "parse",
    "Partition", "PartitionPair", "enumerate_pairs", "enumerate_partitions", "multinomial_m",
    "EquivariantSystem", "check_equivariance", "check_invariance", "divided_difference",
    "macaulay_resultant", "resultant", "sylvester_resultant",
    "a_exponent", "decompose_discriminant", "decompose_resultant", "mu_exponent",
    "random_equivariant_system", "verify_decomposition", "verify_discriminant",
]
