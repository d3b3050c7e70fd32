"""tropchow: integral Chow rings, Minkowski weights and duality certificates
for smooth fans supported on tropical linear spaces."""

from .bergman import (
    PointNotInSpace,
    fine_subdivision,
    linear_space_contains,
    local_cone_contains,
    quotient_coordinates,
)
from .chow import (
    ChowClass,
    ChowGroupPresentation,
    CourantPolynomial,
    DegreeMismatch,
    FanMismatch,
    MinkowskiWeight,
    NotSmooth,
    chow_group,
    class_as_polynomial,
    courant_value,
    evaluate,
    is_balanced,
    minkowski_weight_basis,
    monomial_class,
    multiply,
    normal_form,
    pl_to_class,
    reduce_monomial,
    unit_class,
    zero_class,
)
from .duality import (
    DualityCertificate,
    FanMorphism,
    IncompatibleMorphism,
    NoCertificate,
    NotBalanced,
    certify_poincare_duality,
    class_action,
    cocycle_action,
    cycle_to_cocycle,
    divisor_action_direct,
    fundamental_weight,
    intersect_cycles,
    pullback_class,
    pullback_cycle,
    pushforward_class,
    refine_weight,
    validate_morphism,
)
from .fan import (
    ConeNotInFan,
    DimensionMismatch,
    Fan,
    NotARefinement,
    RefinementMap,
    ZeroCone,
    canonical_fan,
    is_smooth,
    lineality_space,
    make_fan,
    refinement_map,
    star,
    stellar_subdivision,
    support_contains,
    validate_fan,
)
from .intlinalg import (
    LatticeProjection,
    NoSolution,
    SmithDecomposition,
    determinant,
    hermite_normal_form,
    integer_kernel,
    kernel_basis,
    quotient_lattice,
    smith_normal_form,
    solve_prescribed_pairings,
)
from .matroid import (
    InvalidBasepoint,
    LoopsPresent,
    Matroid,
    bases,
    direct_sum,
    make_matroid,
    matroid_from_bases,
    parallel_connection,
    proper_flats,
    rank_of_subset,
    validate_matroid,
    weight_selected_matroid,
)

__version__ = "0.1.0"
