"""Rate-compatible punctured polar codes and an IR-HARQ link simulator."""

from .codec import (
    DecodeResult,
    EncodeResult,
    ReducedCode,
    TransmissionSchedule,
    attach_crc,
    check_crc,
    encode_session,
    precode,
    reduce_code,
    sc_decode,
    schedule,
    scl_decode,
    scl_decode_batch,
)
from .construct import (
    BENCHMARK_I,
    BENCHMARK_II,
    PROPOSED,
    CopyPair,
    EffectiveSetChain,
    PrecodingMap,
    RateLadder,
    RcppFamily,
    benchmark_family,
    build_family,
    effective_sets,
    family_from_manifest,
    family_manifest,
    make_family,
    optimal_sets,
    precoding_map,
)
from .harqsim import (
    FerPoint,
    HarqStats,
    awgn_llrs,
    ebn0_db,
    esn0_db_to_sigma2,
    estimate_fer,
    frame_rng,
    run_cc_session,
    run_ir_session,
    run_sessions,
    throughput,
    wilson_interval,
)
from .puncturing import (
    Permutation,
    PuncturingPattern,
    SeedSequence,
    is_hierarchical,
    is_reciprocal,
    pattern_from_seed,
    permute_pattern,
    rc_chain,
    seed_sequence,
    successive_pattern,
)
from .reliability import (
    BEC,
    BiAWGN,
    ReliabilityProfile,
    bec_capacities,
    ga_reliabilities,
    max_ind,
    min_ind,
    reliability_profile,
    select_information_set,
    zero_capacity_set,
)
from .transform import (
    bit_reverse,
    decode_position,
    dominates,
    gn_matrix,
    gn_submatrix,
    polar_transform,
)

__all__ = [
    "BEC",
    "BENCHMARK_I",
    "BENCHMARK_II",
    "BiAWGN",
    "CopyPair",
    "DecodeResult",
    "EffectiveSetChain",
    "EncodeResult",
    "FerPoint",
    "HarqStats",
    "PROPOSED",
    "Permutation",
    "PrecodingMap",
    "PuncturingPattern",
    "RateLadder",
    "RcppFamily",
    "ReducedCode",
    "ReliabilityProfile",
    "SeedSequence",
    "TransmissionSchedule",
    "attach_crc",
    "awgn_llrs",
    "bec_capacities",
    "benchmark_family",
    "bit_reverse",
    "build_family",
    "check_crc",
    "decode_position",
    "dominates",
    "ebn0_db",
    "effective_sets",
    "encode_session",
    "esn0_db_to_sigma2",
    "estimate_fer",
    "family_from_manifest",
    "family_manifest",
    "frame_rng",
    "ga_reliabilities",
    "gn_matrix",
    "gn_submatrix",
    "is_hierarchical",
    "is_reciprocal",
    "make_family",
    "max_ind",
    "min_ind",
    "optimal_sets",
    "pattern_from_seed",
    "permute_pattern",
    "polar_transform",
    "precode",
    "precoding_map",
    "rc_chain",
    "reduce_code",
    "reliability_profile",
    "run_cc_session",
    "run_ir_session",
    "run_sessions",
    "sc_decode",
    "schedule",
    "scl_decode",
    "scl_decode_batch",
    "seed_sequence",
    "select_information_set",
    "successive_pattern",
    "throughput",
    "wilson_interval",
    "zero_capacity_set",
]
