"""Streaming grammar compression with online repeated-pattern discovery.

Parse trees are built by edit-sensitive parsing, so equal substrings get
near-identical subtrees and repeats surface as shared grammar variables while
the input streams through.  The library exposes the offline reference parser,
the single-pass compressor, a succinct serialized grammar form, and exact
evaluation utilities for the discovered patterns.
"""

from .esp import (
    DEFAULT_CONFIG,
    ReductionConfig,
    Segment,
    build_offline,
    esp_round,
    find_landmarks,
    iter_log,
    left_aligned_parse,
    parse_type2,
    reduce_full,
    reduce_once,
    segment,
)
from .grammar import (
    EMPTY_ROOT,
    Poslp,
    PoslpFormatError,
    RuleStore,
    deserialize,
    from_poslp,
    serialize,
    structural_signature,
    to_poslp,
)
from .patterns import (
    CoverReport,
    FrequentPattern,
    ParseTreeIndex,
    best_core,
    exact_frequent,
    is_inclusive,
    report_table,
    top_k_non_inclusive,
    verify_core,
)
from .streaming import Compressor, CoreEvent, compress_bytes

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_CONFIG",
    "EMPTY_ROOT",
    "Compressor",
    "CoreEvent",
    "CoverReport",
    "FrequentPattern",
    "ParseTreeIndex",
    "Poslp",
    "PoslpFormatError",
    "ReductionConfig",
    "RuleStore",
    "Segment",
    "best_core",
    "build_offline",
    "compress_bytes",
    "deserialize",
    "esp_round",
    "exact_frequent",
    "find_landmarks",
    "from_poslp",
    "is_inclusive",
    "iter_log",
    "left_aligned_parse",
    "parse_type2",
    "reduce_full",
    "reduce_once",
    "report_table",
    "segment",
    "serialize",
    "structural_signature",
    "to_poslp",
    "top_k_non_inclusive",
    "verify_core",
    "__version__",
]
