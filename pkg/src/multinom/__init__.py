"""Divisibility structure of multinomial coefficients.

Carry counting after Kummer, gcd lower bounds for binomial pairs from orbit
counting, brute-force orbit enumeration, and an exhaustive, checkpointable
scan for counterexamples to Wasserman's conjecture (that any k proper
k-nomial coefficients of equal weight share a divisor).
"""

from .binom_bounds import (
    BoundReport,
    OrbitSpectrum,
    gcd_bound_report,
    identity_A,
    orbit_spectrum,
    verify_es_pair,
)
from .kummer import (
    AcceptanceProfile,
    Decomposition,
    acceptance_profile,
    carry_count,
    ch_value,
    is_p_acceptable,
    p_threshold,
)
from .num_core import (
    FactoredInteger,
    PrimePower,
    digit_sum,
    digits_base_p,
    is_prime,
    largest_prime_power_leq,
    prime_power_factors,
    prime_powers_up_to,
    primes_up_to,
)
from .orbit_lab import (
    BruteForceLimitError,
    OrbitClass,
    PartitionShape,
    enumerate_orbits,
)
from .wasserman_search import (
    CoverageReport,
    FilterVerdict,
    GapRecord,
    RelevantPrimeReport,
    ScanRecord,
    ScanReport,
    SearchLimitError,
    StrengtheningReport,
    coverage,
    decompositions,
    digit_sum_survivors,
    exclusion_verdict,
    gap_candidates,
    gap_records,
    relevant_c_value,
    relevant_report,
    scan_range,
    search_counterexample,
    strengthening_checks,
    summand_bound_filters,
)

__version__ = "0.1.0"
