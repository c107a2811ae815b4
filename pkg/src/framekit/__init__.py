"""framekit: dual-pair and operator-valued frames at finite dimension.

Vector frames live in `frames`, operator-valued ones in `ovf`, frame
factories in `constructors`, algorithms and certificates in `analysis`,
the lp (Banach) theory in `pframes`, file formats in `io`.
"""

from .numerics import (
    PNormInterval,
    SpectralReport,
    Tolerance,
    herm_sqrt,
    pnorm_estimate,
    principal_power,
    spectral,
)
from .frames import (
    FramePair,
    FrameReport,
    canonical_dual,
    classify,
    common_dual,
    dilate,
    direct_sum,
    frame_idempotent,
    frame_operator,
    interpolate_parseval,
    is_dual,
    is_orthogonal,
    make_dual_from_params,
    parsevalize,
    similarity_detect,
    tensor_product,
    verify,
)
from .ovf import (
    OvfPair,
    OvfReport,
    canonical_dual_ovf,
    compose_ovf,
    dilate_ovf,
    duality_relation,
    extend_tight_ovf,
    factorize_against_onb,
    onb_blocks,
    ovf_bridge,
    ovf_bridge_inverse,
    ovf_operators,
    right_similarity_detect,
    tensor_ovf,
    verify_ovf,
    weighted_onb_bessel_check,
)
from .constructors import (
    GroupTable,
    Representation,
    check_group_invariance,
    circular_general,
    circular_kl,
    group_frame,
    left_regular,
    synthesize_representation,
)
from .analysis import (
    IterationTrace,
    PerturbCertificate,
    complex_to_real,
    extend_tight_append,
    extend_tight_minimal,
    formulas_report,
    iterate_reconstruct,
    perturb_normsum,
    perturb_quadratic,
    perturb_sampled,
    real_to_complex,
    span_characterization,
    trace_formula,
    weighted_onb_check,
)
from .pframes import (
    PFramePair,
    banach_formulas,
    four_laws_check,
    p_canonical_dual,
    p_orthonormal_check,
    p_verify,
    paley_wiener_check,
    project_line_l4,
    riesz_p_bounds,
)

__version__ = "0.1.0"
