"""Univoque bases of real numbers: expansions, base solving, Cantor-set geometry
and frequency constructions, with certified arithmetic throughout."""

from .symbolic import Alphabet, Ordering, PeriodicSeq, Word, lex_compare, parse_seq, reflect, rho_distance, shift
from .reals import CertifiedReal, PrecisionExhausted, Quadratic
from .expansion import (
    Univoque,
    alpha,
    eval_seq,
    finite_base_M1_expansion,
    greedy_expand,
    is_univoque_point,
    is_valid_alpha,
    lazy_expand,
    q_G,
    quasi_greedy_expand,
)
from .solver import interval_endpoints, komornik_loreti, phi_inverse, solve_base
from .cantor import (
    Cover,
    build_cover,
    build_hulls,
    enumerate_omega,
    intersect_covers,
    moran_dim_estimate,
    newhouse_dim_bound,
    sum_image_check,
    thickness_ordered,
    thickness_star,
)
from .freqsets import (
    block_length_mk,
    build_Delta_jk,
    build_or_count_Djk,
    checkpoint_lengths,
    count_D,
    dim_lower_Ir,
    dim_lower_SN,
    freq_vectors,
    oscillation_evidence,
    sample_irregular,
    sample_simply_normal,
)

__version__ = "0.1.0"
