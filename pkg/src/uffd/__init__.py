"""Non-adaptive group testing codes: union-free codes with fast decoding."""

__version__ = "0.1.0"

from .bitmatrix import (
    BitVector,
    CodeMatrix,
    DimensionError,
    MatrixFormatError,
    boolean_sum,
    covered_columns,
    covers,
    outcome,
)
from .construct import EnsembleParams, build_uffd2, expurgate, find_bad_pairs, sample_constant_weight
from .decoders import DecodeResult, decode_bruteforce, decode_comp, decode_dd, decode_uffd
from .properties import (
    PropertyReport,
    check_hierarchy,
    is_disjunctive,
    is_ssm,
    is_uffd,
    is_union_free,
)
from .ratebound import collision_probs, entropy, known_bounds, optimize_rate
