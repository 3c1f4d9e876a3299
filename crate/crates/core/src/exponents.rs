//! Critical exponents of radial power solutions for Hardy-type potentials.
//!
//! The scalar map at the center of this module is
//!
//! ```text
//! lambda_alpha = alpha |alpha|^(p-2) (p - N - (p-1) alpha),
//! ```
//!
//! whose value at `alpha` is the exact Hardy coupling for which `r^alpha`
//! solves the radial equation. It increases on `(-inf, (p-N)/p)`, decreases
//! on `((p-N)/p, inf)`, and attains its maximum `C_H = |(p-N)/p|^p` at the
//! branch split. Every root returned here is certified by bracketing on one
//! of the two monotone branches.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::Params;
use crate::roots::bracketed_root;

/// Inputs within this relative distance above the critical value are treated
/// as the critical value itself (callers routinely pass `C_H` recomputed in
/// floating point).
const CLAMP_REL: f64 = 1e-12;

/// Two roots of a unimodal exponent equation, `lower <= upper`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentPair {
    pub lower: f64,
    pub upper: f64,
    /// True when the two roots coincide (coupling at its critical value).
    pub degenerate: bool,
}

impl ExponentPair {
    fn new(lower: f64, upper: f64) -> Self {
        // Double roots are resolved to ~sqrt(eps), hence the loose band.
        let degenerate = (upper - lower).abs() <= 1e-10 * (1.0 + lower.abs());
        Self {
            lower,
            upper,
            degenerate,
        }
    }

    fn degenerate_at(x: f64) -> Self {
        Self {
            lower: x,
            upper: x,
            degenerate: true,
        }
    }
}

/// `lambda_alpha = alpha |alpha|^(p-2) (p - N - (p-1) alpha)`.
///
/// Evaluated as `sign(alpha) |alpha|^(p-1) (...)` so the `|alpha|^(p-2)`
/// singularity at `alpha = 0` for `p < 2` never appears; the map is total.
pub fn lambda_of_alpha(params: &Params, alpha: f64) -> f64 {
    let (p, n) = (params.p, params.n_f64());
    if alpha == 0.0 {
        return 0.0;
    }
    alpha.signum() * alpha.abs().powf(p - 1.0) * (p - n - (p - 1.0) * alpha)
}

/// Clamps `x` into `[0, cap]`, accepting a `CLAMP_REL` overshoot above `cap`
/// and returning `None` when `x` is genuinely outside.
fn clamp_to_critical(x: f64, cap: f64) -> Option<f64> {
    if !x.is_finite() || x < 0.0 {
        return None;
    }
    if x <= cap {
        return Some(x);
    }
    if x <= cap * (1.0 + CLAMP_REL) {
        return Some(cap);
    }
    None
}

/// The two exponents `alpha_lambda <= alpha_bar_lambda` with
/// `lambda_alpha = lambda`, for `0 <= lambda <= C_H` and `p != N`.
///
/// Exact endpoints are returned without iteration: `((p-N)/(p-1), 0)` at
/// `lambda = 0` and the degenerate pair `((p-N)/p, (p-N)/p)` at
/// `lambda = C_H`.
pub fn hardy_roots(params: &Params, lambda: f64) -> Result<ExponentPair> {
    if params.is_dimension_critical() {
        if lambda == 0.0 {
            return Ok(ExponentPair::degenerate_at(0.0));
        }
        if lambda > 0.0 {
            return Err(Error::DegenerateDimension(
                "C_H = 0 when p = N; only lambda = 0 admits power roots".into(),
            ));
        }
        return Err(Error::Domain(format!("lambda = {lambda} is negative")));
    }
    let c_h = params.c_h();
    let lambda = clamp_to_critical(lambda, c_h).ok_or_else(|| {
        Error::Domain(format!(
            "lambda = {lambda} outside [0, C_H] with C_H = {c_h}"
        ))
    })?;

    let split = params.critical_alpha(); // argmax of lambda_alpha
    let zero_end = params.harmonic_alpha(); // the non-trivial zero
    if lambda == 0.0 {
        let (lo, hi) = if zero_end < 0.0 {
            (zero_end, 0.0)
        } else {
            (0.0, zero_end)
        };
        return Ok(ExponentPair::new(lo, hi));
    }
    if lambda == c_h {
        return Ok(ExponentPair::degenerate_at(split));
    }

    let f = |a: f64| lambda_of_alpha(params, a) - lambda;
    let (root_a, root_b);
    if params.p < params.n_f64() {
        // Roots sit in [ (p-N)/(p-1), (p-N)/p ] and [ (p-N)/p, 0 ].
        root_a = bracketed_root(f, zero_end, split);
        root_b = bracketed_root(f, split, 0.0);
    } else {
        root_a = bracketed_root(f, 0.0, split);
        root_b = bracketed_root(f, split, zero_end);
    }
    Ok(ExponentPair::new(root_a.min(root_b), root_a.max(root_b)))
}

/// Left side of the improved-Hardy exponent equation:
/// `(1/2) |(p-N)/p|^(p-2) (p-1) (2 - beta p) beta` for `p != N`,
/// `(N-1) (1 - beta) beta |beta|^(N-2)` for `p = N`.
pub fn improved_coupling_of_beta(params: &Params, beta: f64) -> f64 {
    let (p, n) = (params.p, params.n_f64());
    if params.is_dimension_critical() {
        if beta == 0.0 {
            return 0.0;
        }
        (n - 1.0) * (1.0 - beta) * beta.signum() * beta.abs().powf(n - 1.0)
    } else {
        0.5 * params.critical_alpha().abs().powf(p - 2.0) * (p - 1.0) * (2.0 - beta * p) * beta
    }
}

/// Roots `beta_eps <= beta_bar_eps` of the improved-Hardy exponent equation,
/// for `0 <= epsilon <= C_*`.
///
/// For `p != N` they satisfy `0 <= beta_eps <= 1/p <= beta_bar_eps <= 2/p`;
/// for `p = N` the pivot is `(N-1)/N` and the outer endpoint is 1.
pub fn improved_roots(params: &Params, epsilon: f64) -> Result<ExponentPair> {
    let c_star = params.c_star();
    let epsilon = clamp_to_critical(epsilon, c_star).ok_or_else(|| {
        Error::Domain(format!(
            "epsilon = {epsilon} outside [0, C_*] with C_* = {c_star}"
        ))
    })?;
    let (split, hi_end) = if params.is_dimension_critical() {
        ((params.n_f64() - 1.0) / params.n_f64(), 1.0)
    } else {
        (1.0 / params.p, 2.0 / params.p)
    };
    if epsilon == 0.0 {
        return Ok(ExponentPair::new(0.0, hi_end));
    }
    if epsilon == c_star {
        return Ok(ExponentPair::degenerate_at(split));
    }
    let f = |b: f64| improved_coupling_of_beta(params, b) - epsilon;
    let lower = bracketed_root(f, 0.0, split);
    let upper = bracketed_root(f, split, hi_end);
    Ok(ExponentPair::new(lower, upper))
}

/// `mu_beta = (p-1) beta |beta|^(p-2) (1 - beta)`, the rescaled exponent map
/// obtained from `lambda_alpha` under `alpha = beta (p-N)/(p-1)`.
pub fn mu_of_beta(params: &Params, beta: f64) -> f64 {
    if beta == 0.0 {
        return 0.0;
    }
    (params.p - 1.0) * beta.signum() * beta.abs().powf(params.p - 1.0) * (1.0 - beta)
}

/// Roots `(beta_2, beta_1)` of `mu_beta = |(p-1)/(p-N)|^p lambda` with
/// `beta_2 in [0, (p-1)/p]` and `beta_1 in [(p-1)/p, 1]`; rescaling each by
/// `(p-N)/(p-1)` reproduces the `hardy_roots` pair up to ordering.
pub fn rescaled_roots(params: &Params, lambda: f64) -> Result<ExponentPair> {
    if params.is_dimension_critical() {
        return Err(Error::DegenerateDimension(
            "the beta rescaling divides by p - N".into(),
        ));
    }
    let c_h = params.c_h();
    let lambda = clamp_to_critical(lambda, c_h).ok_or_else(|| {
        Error::Domain(format!(
            "lambda = {lambda} outside [0, C_H] with C_H = {c_h}"
        ))
    })?;
    let split = (params.p - 1.0) / params.p;
    if lambda == 0.0 {
        return Ok(ExponentPair::new(0.0, 1.0));
    }
    let target = ((params.p - 1.0) / (params.p - params.n_f64()))
        .abs()
        .powf(params.p)
        * lambda;
    let mu_max = mu_of_beta(params, split);
    if target >= mu_max * (1.0 - 1e-14) {
        return Ok(ExponentPair::degenerate_at(split));
    }
    let f = |b: f64| mu_of_beta(params, b) - target;
    let beta2 = bracketed_root(f, 0.0, split);
    let beta1 = bracketed_root(f, split, 1.0);
    Ok(ExponentPair::new(beta2, beta1))
}
