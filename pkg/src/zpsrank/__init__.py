"""Exact linear algebra over Z_{p^s}, MRD codes by p-adic lifting, and
certified invariants of generalized bilinear forms graphs."""

from .canonical import (
    CanonicalForm,
    canonical_form,
    find_invertible_complement,
    has_right_inverse,
    inner_rank,
    inner_rank_oracle,
    lift_canonical,
    mccoy_rank,
    rank_distance,
    try_inverse,
)
from .codes import RankCode, hamming_mds_check, is_linear_code, lift_mrd, min_rank_distance, verify_mrd
from .gf import build_field, gabidulin_code
from .graph import (
    GammaSpec,
    alpha_certificate,
    classify_max_clique,
    complement_chi_certificate,
    omega_certificate,
    path_between,
)
from .matrix import MatZ, random_invertible, random_matrix, reduce_mod_p
from .ring import Residue, RingSpec, make_ring

__version__ = "0.1.0"
