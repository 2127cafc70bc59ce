"""Finite-group computations of subgroup predicates relative to prime partitions.

A prime partition ``sigma`` splits the primes into classes. The package
decides modularity, sigma-subnormality, sigma-quasinormality, sigma-centrality
and related properties for subgroups of small permutation groups, and checks
the standard structure theorems about them with independent oracles.
"""

from .arith import PrimePartition, Remainder, factorize, parse_sigma
from .catalog import (
    STANDARD_SIGMAS,
    STANDARD_SUITE,
    build,
    example12_analog,
    parse_group,
    standard_suite,
)
from .chief import (
    ChiefFactor,
    chief_series_through,
    is_sigma_central,
    schmidt_decomposition,
    sigma_hypercentre,
)
from .errors import DomainError, FalsificationError, ResourceLimitError
from .groups import FiniteGroup, group_from_permutations, quotient_group
from .harness import ClaimRecord, VerificationReport, survey, verify_all
from .predicates import (
    classify,
    is_modular,
    is_quasinormal,
    is_sigma_nilpotent,
    is_sigma_quasinormal,
    is_sigma_seminormal,
    is_sigma_subnormal,
    refute_modular,
    verify_sigma_chain,
)
from .subgroups import Subgroup, generated, lattice, lattice_limits

__version__ = "0.1.0"
