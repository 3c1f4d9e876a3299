//! Numerical analysis of the radial p-Laplace equation
//! `-div(|grad u|^(p-2) grad u) - V |u|^(p-2) u = 0` with Hardy-type
//! potentials on annuli and exterior domains.
//!
//! The crate computes the critical constants and exponent roots of the
//! power and log-power solution families, classifies family members by the
//! sign of their residual, verifies the convexity inequality behind the
//! superposition principle for differences of sub- and supersolutions,
//! integrates radial trajectories in flux form, and runs comparison and
//! quotient diagnostics for the two asymptotic alternatives that monotone
//! subsolutions can follow.

pub mod comparison;
pub mod error;
pub mod exponents;
pub mod family;
pub mod grid;
pub mod inequality;
pub mod ode;
pub mod params;
pub mod radial;
pub mod roots;
pub mod table1;

pub use comparison::{
    comparison_verify, growth_dichotomy_check, solve_bvp, star_certificate, BvpProblem,
    ComparisonReport, GrowthDichotomyReport,
};
pub use error::{Error, Result};
pub use exponents::{
    hardy_roots, improved_coupling_of_beta, improved_roots, lambda_of_alpha, mu_of_beta,
    rescaled_roots, ExponentPair,
};
pub use family::{
    classify, radial_l, residual, residual_sample, Annulus, ClassificationReport, Potential,
    RadialFamily, ResidualSample, Verdict, GRADIENT_FLOOR, RESIDUAL_DEAD_BAND,
};
pub use grid::GridSpec;
pub use inequality::{
    admissible_scale, convexity_gap, convexity_gap_scaled, convexity_scale, superposition_check,
    supersolution_difference_check, DifferenceReport, Quadruple,
};
pub use ode::{
    decay_fit, integrate, pl_alternative, quotient_extrema_scan, Alternative, IntegratorOptions,
    Monotonicity, PlOptions, QuotientScanReport, RatioDiagnostic, RatioTrend, Termination,
    Trajectory,
};
pub use params::{HardyConstants, Params};
pub use radial::RadialFn;
pub use table1::{table1_row, table1_suite, Table1Cell, Table1Report};
