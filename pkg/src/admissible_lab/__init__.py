"""Admissible tuples, explicit Mertens-type bounds and translate prime searches."""

__version__ = "0.1.0"

from .bounds import (
    ChainViolation,
    LogFactorial,
    SizingReport,
    half_log_bound,
    log_factorial,
    mertens_product,
    mertens_product_exact,
    required_r,
    rosser_schoenfeld_lower,
)
from .extended import ExtendedReal
from .heuristic import HeuristicSum, UnsupportedTail, heuristic_expected_primes
from .primal import (
    PrimalityStatus,
    PrimalityVerdict,
    PrimeRange,
    SegmentTooLarge,
    is_prime_64,
    is_probable_prime,
    primes_up_to,
    sieve_range,
)
from .search import (
    Certainty,
    HarnessReport,
    PresievePlan,
    SearchResult,
    ShiftHit,
    TranslateQuery,
    build_presieve,
    count_primes_in_translate,
    refutation_harness,
    shift_search,
    shift_search_naive,
)
from .sequences import SequenceKind, SequenceSpec, SequenceTerm, parse_sequence_spec, prefix, term
from .tuples import (
    AdmissibilityReport,
    ExtractionTrace,
    OffsetTuple,
    drop_thinnest_class,
    extract_admissible_subset,
    is_admissible,
    residues_mod,
)
