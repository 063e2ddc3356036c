//! Convergence-rate machinery for the Lindeberg central limit theorem.
//!
//! The crate computes, at desk scale and with explicit accuracy contracts:
//!
//! - truncated second/third moments and the Lindeberg fraction of finite
//!   discrete laws, plus the weighted Esseen-type and Rozovskii-type
//!   fractions, both from their definitions and through closed forms for
//!   i.i.d. two-point summands ([`fractions`]);
//! - exact n-fold convolutions of lattice laws and the exact uniform
//!   distance of the standardized sum to the normal law ([`dist`]);
//! - every named scalar constant of the bound machinery (x₀, κ, γ*, x_Φ,
//!   C_Φ, p_Φ, p₀, γ₀) from its defining equation ([`constants`],
//!   [`bounds::gamma0`]);
//! - two-sided bounds for the exact, asymptotically exact, and
//!   asymptotically best constants, including the computed upper-bound and
//!   lower-bound tables ([`bounds`]);
//! - convergence experiments and a seeded inequality fuzzer
//!   ([`experiments`]).
//!
//! Everything is pure computation over immutable values; all public
//! functions are safe for concurrent use.

// `!(x > 0.0)` is used for domain checks on purpose: unlike `x <= 0.0`
// it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod constants;
pub mod dist;
pub mod error;
pub mod experiments;
pub mod fractions;
pub mod specfun;

pub use bounds::{
    abe_lower_esseen, abe_lower_rozovskii, aex_two_sided, aex_upper_esseen, aex_upper_rozovskii,
    asymptotic_lower_bounds, compute_table3, compute_table4, exact_constant_lower_bounds, gamma0,
    k_function, reference_lookup, sup_over_p, AexTwoSided, BoundKind, BoundTarget, ConstantBound,
    KFunction, Optimizer1D, RefGamma, ReferenceRow, Table3Row, Table4Column, TwoSided,
    REFERENCE_TABLE_ESSEEN, REFERENCE_TABLE_ROZOVSKII, TABLE4_GAMMAS,
};
pub use constants::{compute_constants, core_constants, delta1, psi, psi_tilde, t_thresholds, CoreConstants, TThresholds};
pub use dist::{convolve_iid, convolve_iid_limited, Atom, DiscreteDistribution, IidConvolution, ParseOptions, SumLaw, DEFAULT_ATOM_LIMIT};
pub use error::{Error, Result};
pub use experiments::{
    esseen_expansion_experiment, inequality_fuzzer, parse_csv, three_point_bessel_experiment,
    ConvergenceReport, CsvRecord, FuzzConfig, FuzzReport, FuzzRow, FuzzViolation, CSV_HEADER,
};
pub use fractions::{
    abs_third_moment_fraction, esseen_fraction, esseen_fraction_iid, lindeberg_fraction,
    lindeberg_fraction_iid, rozovskii_fraction, rozovskii_fraction_iid, third_moment_fraction,
    two_point_fraction_closed_form, Attained, FractionKind, FractionParams, FractionValue, Method,
    WeightFunction, WeightKind,
};
pub use specfun::{bessel_i0, bessel_i0_scaled, find_root, lower_gamma, std_normal_cdf, upper_gamma, Bracket, Tolerance};
