"""Exact lambda-ring and K-theory calculus on products of projective spaces."""

from .chow import (
    ChowClass,
    RelativeMap,
    chern_character,
    chi_n_class,
    chow_pushforward,
    cotangent_class,
    k_pushforward,
    tangent_class,
    theta_k,
    todd_class,
    total_chern,
    verify_arr,
    verify_grr,
    verify_hrr,
    verify_omega_chi,
)
from .lambda_k import (
    POINT,
    BaseSpace,
    SplitElement,
    adams_op,
    dual,
    gamma_op,
    lambda_op,
    normal_form,
    verify_special_axioms,
)
from .operations import (
    AdditiveOpSeries,
    GammaSeries,
    additive_to_gamma,
    apply_operation,
    classify_multiplicative_endo,
    gamma_to_additive,
    multiplicative_class,
    star_compose,
)
from .report import emit_report
from .scalars import Q, Z, DomainError, ScalarDomain
from .series import TruncSeries, from_binomial_basis, log_power_basis, to_binomial_basis
from .stable import StableElement, chi_interval, phi, pi_n, psi_stable, sigma, sigma_inverse, stable_compose
from .symmetric import (
    WeightedPoly,
    additive_symmetrization,
    chi_poly,
    elementary_to_power_sums,
    multiplicative_symmetrization,
    power_sums_to_elementary,
    universal_plethysm_poly,
    universal_product_poly,
)
from .towers import (
    GroupDescriptor,
    LimReport,
    TowerDescriptor,
    analyze_tower,
    ext_q,
    fp_canonical_lift,
    fp_membership_L,
    hom_q,
    milnor_report,
    omega_apply,
    omega_lift,
    tower_lift_to_depth,
)
from .truncpoly import NilPoly

__version__ = "0.1.0"
