//! Convexity inequality behind the superposition principle, and pointwise
//! verification that differences of ordered sub/supersolutions keep the
//! expected residual sign.
//!
//! The scalar inequality states that for `a, b >= 0`, `c, d > 0`,
//!
//! ```text
//! (a+b)^q / (c+d)^(q-1)  <=  a^q/c^(q-1) + b^q/d^(q-1)   when q >= 1,
//! ```
//!
//! with the opposite direction for `0 < q <= 1` and equality exactly when
//! `q = 1` or `ad = bc`. Applied with `q = p-1`, `a = u-v`, `b = v` and the
//! matching derivative differences it turns the difference `u - v` of a
//! subsolution and a smaller supersolution into a subsolution when `p >= 2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{
    residual_sample, signed_pow, Annulus, Potential, ResidualSample, RESIDUAL_DEAD_BAND,
};
use crate::grid::GridSpec;
use crate::params::Params;
use crate::radial::RadialFn;

/// Inputs of the convexity inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quadruple {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub q: f64,
}

impl Quadruple {
    pub fn new(a: f64, b: f64, c: f64, d: f64, q: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a >= 0.0 && b >= 0.0) {
            return Err(Error::Domain(format!("need a, b >= 0, got a={a}, b={b}")));
        }
        if !(c.is_finite() && d.is_finite() && c > 0.0 && d > 0.0) {
            return Err(Error::Domain(format!("need c, d > 0, got c={c}, d={d}")));
        }
        if !(q.is_finite() && q > 0.0) {
            return Err(Error::Domain(format!("need q > 0, got {q}")));
        }
        Ok(Self { a, b, c, d, q })
    }

    /// Natural logs of the three terms `a^q/c^(q-1)`, `b^q/d^(q-1)`,
    /// `(a+b)^q/(c+d)^(q-1)`; `-inf` where a numerator vanishes.
    fn term_logs(&self) -> (f64, f64, f64) {
        let lt = |num: f64, den: f64| {
            if num == 0.0 {
                f64::NEG_INFINITY
            } else {
                self.q * num.ln() - (self.q - 1.0) * den.ln()
            }
        };
        (
            lt(self.a, self.c),
            lt(self.b, self.d),
            lt(self.a + self.b, self.c + self.d),
        )
    }
}

/// `a^q/c^(q-1) + b^q/d^(q-1) - (a+b)^q/(c+d)^(q-1)`.
///
/// Non-negative for `q >= 1`, non-positive for `q <= 1`, zero iff `q = 1` or
/// `ad = bc`. Terms whose magnitude leaves the comfortable double range are
/// evaluated in log space with the common maximum factored out, so the sign
/// survives even when the value itself overflows to infinity.
pub fn convexity_gap(quad: &Quadruple) -> f64 {
    let (l1, l2, l3) = quad.term_logs();
    let m = l1.max(l2).max(l3);
    if m == f64::NEG_INFINITY {
        return 0.0; // a = b = 0
    }
    if m.abs() < 600.0 {
        // Direct evaluation; powf carries less rounding than exp(ln ...).
        let t1 = quad.a.powf(quad.q) / quad.c.powf(quad.q - 1.0);
        let t2 = quad.b.powf(quad.q) / quad.d.powf(quad.q - 1.0);
        let t3 = (quad.a + quad.b).powf(quad.q) / (quad.c + quad.d).powf(quad.q - 1.0);
        return t1 + t2 - t3;
    }
    let reduced = (l1 - m).exp() + (l2 - m).exp() - (l3 - m).exp();
    m.exp() * reduced
}

/// `convexity_gap` normalized by the term sum; always finite, in `[-1, 1]`.
pub fn convexity_gap_scaled(quad: &Quadruple) -> f64 {
    let (l1, l2, l3) = quad.term_logs();
    let m = l1.max(l2).max(l3);
    if m == f64::NEG_INFINITY {
        return 0.0;
    }
    let (e1, e2, e3) = ((l1 - m).exp(), (l2 - m).exp(), (l3 - m).exp());
    (e1 + e2 - e3) / (e1 + e2 + e3)
}

/// Sum of all three term magnitudes, the scale used by the signed-gap
/// contracts.
pub fn convexity_scale(quad: &Quadruple) -> f64 {
    let (l1, l2, l3) = quad.term_logs();
    let m = l1.max(l2).max(l3);
    if m == f64::NEG_INFINITY {
        return 0.0;
    }
    m.exp() * ((l1 - m).exp() + (l2 - m).exp() + (l3 - m).exp())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DifferenceReport {
    /// True when every node kept the contracted residual sign within the
    /// dead-band.
    pub confirmed: bool,
    pub checked_nodes: usize,
    /// Nodes where `u' = v'` within tolerance; checked via the reduced
    /// condition `0 <= V w^(p-1)` instead of the full residual.
    pub degenerate_nodes: usize,
    /// Largest scaled residual of the offending sign observed.
    pub worst_scaled: f64,
    pub first_violation: Option<ResidualSample>,
    pub evidence: Vec<ResidualSample>,
}

fn ensure_positive_ordering(u: &dyn RadialFn, v: &dyn RadialFn, nodes: &[f64]) -> Result<()> {
    for &r in nodes {
        let (uv, vv) = (u.eval(r), v.eval(r));
        if !(vv > 0.0) {
            return Err(Error::Precondition(format!("v(r) <= 0 at r = {r}")));
        }
        if vv > uv * (1.0 + 1e-12) {
            return Err(Error::Precondition(format!(
                "ordering 0 < v <= u fails at r = {r}: u = {uv}, v = {vv}"
            )));
        }
    }
    Ok(())
}

/// Checks the monotone-derivative hypothesis: either `u' <= v' < 0`
/// everywhere or `u' >= v' > 0` everywhere; `strict` demands the strict
/// variants with a relative margin.
fn derivative_ordering(
    u: &dyn RadialFn,
    v: &dyn RadialFn,
    nodes: &[f64],
    strict: bool,
) -> Result<bool> {
    let dv0 = v.deriv(nodes[0]);
    let decreasing = dv0 < 0.0;
    for &r in nodes {
        let (du, dv) = (u.deriv(r), v.deriv(r));
        let margin = 1e-12 * (du.abs() + dv.abs());
        let slack = if strict { -margin } else { margin };
        let ok = if decreasing {
            dv < 0.0 && du <= dv + slack
        } else {
            dv > 0.0 && du >= dv - slack
        };
        if !ok {
            return Err(Error::Precondition(format!(
                "derivative ordering fails at r = {r}: u' = {du}, v' = {dv} ({} case{})",
                if decreasing { "decreasing" } else { "increasing" },
                if strict { ", strict" } else { "" },
            )));
        }
    }
    Ok(decreasing)
}

/// Residual sign of a candidate at every node; `want_sub` demands
/// subsolution-or-solution, otherwise supersolution-or-solution.
fn ensure_side(
    params: &Params,
    f: &dyn RadialFn,
    pot: &Potential,
    nodes: &[f64],
    want_sub: bool,
    who: &str,
) -> Result<()> {
    for &r in nodes {
        let s = residual_sample(params, f, pot, r)?;
        let bad = if want_sub {
            s.scaled > RESIDUAL_DEAD_BAND
        } else {
            s.scaled < -RESIDUAL_DEAD_BAND
        };
        if bad {
            return Err(Error::Precondition(format!(
                "{who} is not a {} at r = {r}: scaled residual {:e}",
                if want_sub { "subsolution" } else { "supersolution" },
                s.scaled
            )));
        }
    }
    Ok(())
}

fn difference_nodes(
    params: &Params,
    u: &dyn RadialFn,
    v: &dyn RadialFn,
    pot: &Potential,
    nodes: &[f64],
    expect_sub: bool,
) -> DifferenceReport {
    let p = params.p;
    let mut evidence = Vec::with_capacity(nodes.len());
    let mut degenerate_nodes = 0;
    let mut worst: f64 = 0.0;
    let mut first_violation = None;
    for &r in nodes {
        let w = u.eval(r) - v.eval(r);
        let dw = u.deriv(r) - v.deriv(r);
        let reaction = pot.eval(params, r) * signed_pow(w.max(0.0), p - 1.0);
        let degenerate = dw.abs() <= 1e-12 * (u.deriv(r).abs() + v.deriv(r).abs());
        let (residual, scale) = if degenerate {
            // The proof's u' = v' branch: the inequality reduces to
            // 0 <= V w^(p-1), recorded as a pure reaction residual.
            degenerate_nodes += 1;
            (-reaction, reaction.abs() + 1e-300)
        } else {
            let grad = if p == 2.0 { 1.0 } else { dw.abs().powf(p - 2.0) };
            let ddw = u.second_deriv(r) - v.second_deriv(r);
            let lw = (p - 1.0) * ddw + (params.n_f64() - 1.0) / r * dw;
            let diffusion = grad * lw;
            let magnitude =
                grad * ((p - 1.0) * ddw.abs() + (params.n_f64() - 1.0) / r * dw.abs());
            (-diffusion - reaction, magnitude + reaction.abs() + 1e-300)
        };
        let scaled = residual / scale;
        let sample = ResidualSample {
            r,
            u: w,
            du: dw,
            residual,
            scale,
            scaled,
        };
        let offending = if expect_sub { scaled } else { -scaled };
        if offending > worst {
            worst = offending;
            if offending > RESIDUAL_DEAD_BAND && first_violation.is_none() {
                first_violation = Some(sample);
            }
        }
        evidence.push(sample);
    }
    DifferenceReport {
        confirmed: worst <= RESIDUAL_DEAD_BAND,
        checked_nodes: nodes.len(),
        degenerate_nodes,
        worst_scaled: worst,
        first_violation,
        evidence,
    }
}

/// Verifies that `w = u - v` behaves as a subsolution on the annulus grid,
/// given a subsolution `u` above a supersolution `v` with the monotone
/// derivative ordering (`p >= 2`).
pub fn superposition_check(
    params: &Params,
    u: &dyn RadialFn,
    v: &dyn RadialFn,
    pot: &Potential,
    ann: &Annulus,
    grid: &GridSpec,
) -> Result<DifferenceReport> {
    params.require_p_at_least_two()?;
    let hi = ann.r1.min(u.max_radius()).min(v.max_radius());
    if !hi.is_finite() {
        return Err(Error::Domain(
            "difference checks need a finite outer radius".into(),
        ));
    }
    let nodes = grid.sample(ann.r0, hi)?;
    ensure_positive_ordering(u, v, &nodes)?;
    derivative_ordering(u, v, &nodes, false)?;
    ensure_side(params, u, pot, &nodes, true, "u")?;
    ensure_side(params, v, pot, &nodes, false, "v")?;
    Ok(difference_nodes(params, u, v, pot, &nodes, true))
}

/// Dual check for `1 <= p <= 2`: a supersolution `u` above a subsolution `v`
/// with strictly ordered derivatives leaves `u - v` a supersolution.
pub fn supersolution_difference_check(
    params: &Params,
    u: &dyn RadialFn,
    v: &dyn RadialFn,
    pot: &Potential,
    ann: &Annulus,
    grid: &GridSpec,
) -> Result<DifferenceReport> {
    if !(1.0 <= params.p && params.p <= 2.0) {
        return Err(Error::Precondition(format!(
            "supersolution difference check needs 1 <= p <= 2, got p = {}",
            params.p
        )));
    }
    let hi = ann.r1.min(u.max_radius()).min(v.max_radius());
    if !hi.is_finite() {
        return Err(Error::Domain(
            "difference checks need a finite outer radius".into(),
        ));
    }
    let nodes = grid.sample(ann.r0, hi)?;
    ensure_positive_ordering(u, v, &nodes)?;
    derivative_ordering(u, v, &nodes, true)?;
    ensure_side(params, u, pot, &nodes, false, "u")?;
    ensure_side(params, v, pot, &nodes, true, "v")?;
    Ok(difference_nodes(params, u, v, pot, &nodes, false))
}

/// Largest rescaling `s` such that `s v <= u` and the derivative ordering
/// `s v' >= u'` (decreasing) or `s v' <= u'` (increasing) hold across the
/// nodes, shrunk by a one-percent safety margin.
pub fn admissible_scale(u: &dyn RadialFn, v: &dyn RadialFn, nodes: &[f64]) -> Result<f64> {
    let mut bound = f64::INFINITY;
    for &r in nodes {
        let (uv, vv) = (u.eval(r), v.eval(r));
        let (du, dv) = (u.deriv(r), v.deriv(r));
        if !(vv > 0.0) || dv == 0.0 {
            return Err(Error::Precondition(format!(
                "scaling needs v > 0 with nonvanishing v' (r = {r})"
            )));
        }
        // Both constraints divide through by v-quantities of fixed sign.
        bound = bound.min(uv / vv).min(du / dv);
    }
    if !(bound.is_finite() && bound > 0.0) {
        return Err(Error::Precondition(format!(
            "no positive admissible scale (bound = {bound})"
        )));
    }
    Ok(0.99 * bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::hardy_roots;
    use crate::family::RadialFamily;
    use proptest::prelude::*;

    #[test]
    fn gap_examples() {
        // ad = bc: equality.
        let q = Quadruple::new(1.0, 1.0, 1.0, 1.0, 3.0).unwrap();
        assert_eq!(convexity_gap(&q), 0.0);
        // Direct arithmetic: 4 + 1 - 9/2.
        let q = Quadruple::new(2.0, 1.0, 1.0, 1.0, 2.0).unwrap();
        assert!((convexity_gap(&q) - 0.5).abs() < 1e-15);
        // q = 1: both sides are a + b.
        for (a, b, c, d) in [(0.3, 7.0, 1.0, 2.5), (5.0, 0.0, 9.0, 0.1)] {
            let q = Quadruple::new(a, b, c, d, 1.0).unwrap();
            assert!(convexity_gap(&q).abs() <= 1e-12 * convexity_scale(&q));
        }
    }

    #[test]
    fn gap_zero_numerators() {
        let q = Quadruple::new(0.0, 0.0, 1.0, 2.0, 3.0).unwrap();
        assert_eq!(convexity_gap(&q), 0.0);
        assert_eq!(convexity_gap_scaled(&q), 0.0);
        // a = 0 alone: the inequality is strict unless ad = bc, i.e. b = 0.
        let q = Quadruple::new(0.0, 2.0, 1.0, 1.0, 2.0).unwrap();
        assert!(convexity_gap(&q) > 0.0);
    }

    #[test]
    fn gap_extreme_magnitudes_keep_sign() {
        // Bases far beyond 1e100: the value overflows but the sign and the
        // scaled gap stay well defined.
        let q = Quadruple::new(1e200, 3e150, 2e-180, 1.0, 6.0).unwrap();
        assert!(convexity_gap_scaled(&q) >= -1e-12);
        let q = Quadruple::new(1e200, 3e150, 2e-180, 1.0, 0.5).unwrap();
        assert!(convexity_gap_scaled(&q) <= 1e-12);
    }

    proptest! {
        #[test]
        fn signed_gap_contract(
            la in -60f64..60.0,
            lb in -60f64..60.0,
            lc in -60f64..60.0,
            ld in -60f64..60.0,
            q in 1f64..6.0,
            qs in 0.05f64..1.0,
        ) {
            let quad = Quadruple::new(la.exp2(), lb.exp2(), lc.exp2(), ld.exp2(), q).unwrap();
            let scale = convexity_scale(&quad);
            prop_assert!(convexity_gap(&quad) >= -1e-12 * scale);
            let quad = Quadruple::new(la.exp2(), lb.exp2(), lc.exp2(), ld.exp2(), qs).unwrap();
            let scale = convexity_scale(&quad);
            prop_assert!(convexity_gap(&quad) <= 1e-12 * scale);
        }

        #[test]
        fn equality_iff_proportional(
            la in -2f64..2.0,
            lb in -2f64..2.0,
            lc in -2f64..2.0,
            q in 1.5f64..6.0,
        ) {
            // Component magnitudes stay within a few binades: the strictness
            // lower bound degrades like 1/max(b, d) when one term dominates
            // the scale, and drops under 1e-6 beyond roughly 2^(+-7).
            let (a, b, c) = (la.exp2(), lb.exp2(), lc.exp2());
            let d = b * c / a; // ad = bc up to rounding
            let quad = Quadruple::new(a, b, c, d, q).unwrap();
            let scale = convexity_scale(&quad);
            prop_assert!(convexity_gap(&quad).abs() <= 1e-10 * scale);

            // Quantified strictness away from proportionality.
            let d_off = 2.0 * d;
            let quad = Quadruple::new(a, b, c, d_off, q).unwrap();
            let ad = a * d_off;
            let bc = b * c;
            prop_assert!((ad - bc).abs() >= 0.1 * (ad + bc));
            let scale = convexity_scale(&quad);
            prop_assert!(convexity_gap(&quad) > 1e-6 * scale);
        }
    }

    fn params(p: f64, n: u32) -> Params {
        Params::new(p, n).unwrap()
    }

    /// Catalog pair u = r^(root), v = s r^beta with beta strictly between
    /// the roots and s from the admissibility scan.
    fn catalog_pair(
        pr: &Params,
        lambda: f64,
        frac: f64,
        nodes: &[f64],
    ) -> (RadialFamily, RadialFamily, Potential) {
        let roots = hardy_roots(pr, lambda).unwrap();
        let sub_root = if pr.p < pr.n_f64() {
            roots.lower
        } else {
            roots.upper
        };
        let beta = roots.lower + frac * (roots.upper - roots.lower);
        let u = RadialFamily::power(sub_root);
        let v0 = RadialFamily::power(beta);
        let s = admissible_scale(&u, &v0, nodes).unwrap();
        (
            u,
            v0.with_amplitude(s),
            Potential::pure_hardy(lambda).unwrap(),
        )
    }

    #[test]
    fn superposition_catalog_decreasing() {
        let pr = params(3.0, 5);
        let lambda = 0.5 * pr.c_h();
        let ann = Annulus::new(2.0, 200.0).unwrap();
        let grid = GridSpec::new(128);
        let nodes = grid.sample(ann.r0, ann.r1).unwrap();
        let (u, v, pot) = catalog_pair(&pr, lambda, 0.5, &nodes);
        let rep = superposition_check(&pr, &u, &v, &pot, &ann, &grid).unwrap();
        assert!(rep.confirmed, "worst scaled {:e}", rep.worst_scaled);
        assert_eq!(rep.checked_nodes, 128);
    }

    #[test]
    fn superposition_catalog_increasing() {
        let pr = params(4.0, 3);
        let lambda = 0.4 * pr.c_h();
        let ann = Annulus::new(2.0, 200.0).unwrap();
        let grid = GridSpec::new(128);
        let nodes = grid.sample(ann.r0, ann.r1).unwrap();
        let (u, v, pot) = catalog_pair(&pr, lambda, 0.5, &nodes);
        let rep = superposition_check(&pr, &u, &v, &pot, &ann, &grid).unwrap();
        assert!(rep.confirmed, "worst scaled {:e}", rep.worst_scaled);
    }

    #[test]
    fn superposition_rejects_bad_ordering() {
        let pr = params(3.0, 5);
        let lambda = 0.5 * pr.c_h();
        let ann = Annulus::new(2.0, 200.0).unwrap();
        let grid = GridSpec::new(64);
        let nodes = grid.sample(ann.r0, ann.r1).unwrap();
        let (u, v, pot) = catalog_pair(&pr, lambda, 0.5, &nodes);
        // Blowing the subtrahend up breaks 0 < v <= u.
        let big_v = v.with_amplitude(v.c * 10.0);
        let err = superposition_check(&pr, &u, &big_v, &pot, &ann, &grid).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        // p < 2 is rejected outright.
        let pr15 = params(1.5, 3);
        let err = superposition_check(&pr15, &u, &v, &pot, &ann, &grid).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn supersolution_difference_low_p() {
        let pr = params(1.5, 3);
        let lambda = 0.5 * pr.c_h();
        let roots = hardy_roots(&pr, lambda).unwrap();
        let ann = Annulus::new(2.0, 50.0).unwrap();
        let grid = GridSpec::new(128);
        let nodes = grid.sample(ann.r0, ann.r1).unwrap();
        // u interior supersolution, v outer-exponent subsolution, rescaled.
        let a = 0.5 * (roots.lower + roots.upper);
        let b = 0.5 * roots.upper; // in (alpha_bar, 0): subsolution side
        let u = RadialFamily::power(a);
        let v0 = RadialFamily::power(b);
        let s = admissible_scale(&u, &v0, &nodes).unwrap();
        let v = v0.with_amplitude(s);
        let pot = Potential::pure_hardy(lambda).unwrap();
        let rep = supersolution_difference_check(&pr, &u, &v, &pot, &ann, &grid).unwrap();
        assert!(rep.confirmed, "worst scaled {:e}", rep.worst_scaled);
    }

    #[test]
    fn difference_of_proportional_solutions() {
        // u = 2v with v an exact solution: u - v = v, residual zero, and the
        // verdict is consistent for both check directions.
        let pr = params(2.0, 3);
        let lambda = 3.0 / 16.0;
        let v = RadialFamily::power(-0.75);
        let u = RadialFamily::power(-0.75).with_amplitude(2.0);
        let pot = Potential::pure_hardy(lambda).unwrap();
        let ann = Annulus::new(1.5, 500.0).unwrap();
        let grid = GridSpec::new(96);
        let rep = superposition_check(&pr, &u, &v, &pot, &ann, &grid).unwrap();
        assert!(rep.confirmed);
        let rep = supersolution_difference_check(&pr, &u, &v, &pot, &ann, &grid).unwrap();
        assert!(rep.confirmed);
        assert!(rep.worst_scaled <= RESIDUAL_DEAD_BAND);
    }

    #[test]
    fn p2_additivity_always_subsolution() {
        // At p = 2 any admissible pair passes: the operator is additive.
        let pr = params(2.0, 3);
        let lambda = 0.7 * pr.c_h();
        let ann = Annulus::new(2.0, 1000.0).unwrap();
        let grid = GridSpec::new(128);
        let nodes = grid.sample(ann.r0, ann.r1).unwrap();
        for frac in [0.25, 0.5, 0.75] {
            let (u, v, pot) = catalog_pair(&pr, lambda, frac, &nodes);
            let rep = superposition_check(&pr, &u, &v, &pot, &ann, &grid).unwrap();
            assert!(rep.confirmed);
        }
    }

    #[test]
    fn degenerate_gradient_branch_counted() {
        // u = v: the difference vanishes identically, u' - v' = 0
        // everywhere, and every node takes the reduced branch.
        let pr = params(3.0, 5);
        let pot = Potential::Zero;
        let base = RadialFamily::power(pr.harmonic_alpha());
        let ann = Annulus::new(2.0, 50.0).unwrap();
        let grid = GridSpec::new(64);
        let rep = superposition_check(&pr, &base, &base, &pot, &ann, &grid).unwrap();
        assert_eq!(rep.degenerate_nodes, 64);
        assert!(rep.confirmed);
    }
}
