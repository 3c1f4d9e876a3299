//! Two-point boundary value solver on finite annuli (shooting) and numeric
//! verification of the ordering principle `u <= v` for a subsolution below a
//! non-negative supersolution, together with the growth dichotomy of
//! quotients of increasing candidates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::{hardy_roots, improved_roots};
use crate::family::{classify, Annulus, Potential, RadialFamily, Verdict, RESIDUAL_DEAD_BAND};
use crate::grid::GridSpec;
use crate::ode::{integrate, IntegratorOptions, Termination, Trajectory};
use crate::params::Params;
use crate::radial::RadialFn;

/// Boundary data for a radial two-point problem on a finite annulus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BvpProblem {
    pub params: Params,
    pub potential: Potential,
    pub ann: Annulus,
    pub inner_value: f64,
    pub outer_value: f64,
}

impl BvpProblem {
    pub fn new(
        params: Params,
        potential: Potential,
        ann: Annulus,
        inner_value: f64,
        outer_value: f64,
    ) -> Result<Self> {
        if !ann.r1.is_finite() {
            return Err(Error::Domain("boundary value problems need a finite outer radius".into()));
        }
        if !(inner_value.is_finite() && inner_value > 0.0) {
            return Err(Error::Domain(format!(
                "inner boundary value must be > 0, got {inner_value}"
            )));
        }
        if !(outer_value.is_finite() && outer_value >= 0.0) {
            return Err(Error::Domain(format!(
                "outer boundary value must be >= 0, got {outer_value}"
            )));
        }
        if ann.r0 <= potential.min_radius() {
            return Err(Error::Domain(format!(
                "annulus starts at {} but the potential needs r > {}",
                ann.r0,
                potential.min_radius()
            )));
        }
        Ok(Self {
            params,
            potential,
            ann,
            inner_value,
            outer_value,
        })
    }
}

/// Outcome of one shot: where the trajectory ended up relative to the outer
/// target. Early deaths map to negative defects that grow with how far from
/// the outer sphere the trajectory died, which keeps the defect monotone in
/// the slope for bracketing purposes.
fn shoot_defect(prob: &BvpProblem, slope: f64, opts: &IntegratorOptions) -> (f64, Option<Trajectory>) {
    let undershoot = |r_death: f64| {
        -(1.0 + prob.outer_value.abs())
            * (1.0 + (prob.ann.r1 - r_death) / (prob.ann.r1 - prob.ann.r0))
    };
    match integrate(
        &prob.params,
        &prob.potential,
        prob.ann.r0,
        prob.inner_value,
        slope,
        prob.ann.r1,
        opts,
    ) {
        Ok(traj) => match traj.termination {
            Termination::ReachedRmax => (traj.last_value() - prob.outer_value, Some(traj)),
            // Died early: positivity loss undershoots; a flattened gradient
            // caps an increasing shot below any higher target.
            Termination::PositivityLost => (undershoot(traj.last_radius()), None),
            Termination::GradientVanished => (traj.last_value() - prob.outer_value, None),
        },
        Err(Error::DegenerateGradient { r, .. }) => (undershoot(r), None),
        Err(_) => (f64::NAN, None),
    }
}

/// Solves the two-point problem by shooting on the initial slope: a
/// geometric scan over 64 slope magnitudes brackets the outer defect, then
/// secant-safeguarded bisection drives it below `tol * (1 + |target|)`.
pub fn solve_bvp(prob: &BvpProblem, tol: f64) -> Result<Trajectory> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Domain(format!("tol must be positive, got {tol}")));
    }
    let params = &prob.params;
    let (a, b) = (prob.inner_value, prob.outer_value);

    if a == b {
        // Constant regime: only meaningful without a potential.
        if !matches!(prob.potential, Potential::Zero) {
            return Err(Error::Precondition(
                "equal boundary values need V = 0 (constant solution)".into(),
            ));
        }
        let flat = RadialFamily::power(0.0).with_amplitude(a);
        return Trajectory::from_radial(&flat, params, prob.ann.r0, prob.ann.r1, 128);
    }

    let opts = IntegratorOptions {
        rtol: (tol * 1e-2).clamp(1e-13, 1e-6),
        ..IntegratorOptions::default()
    };
    let direction = if b < a { -1.0 } else { 1.0 };
    let magnitude = |i: usize| {
        // 64 slopes spanning nine decades around |phi0| / r0.
        let lo = (a / prob.ann.r0) * 1e-6;
        let hi = (a / prob.ann.r0) * 1e3;
        lo * (hi / lo).powf(i as f64 / 63.0)
    };

    let mut prev: Option<(f64, f64)> = None;
    let mut bracket = None;
    for i in 0..64 {
        let s = direction * magnitude(i);
        let (defect, _) = shoot_defect(prob, s, &opts);
        if defect.is_nan() {
            continue;
        }
        if defect == 0.0 {
            bracket = Some((s, s));
            break;
        }
        if let Some((ps, pd)) = prev {
            if pd.signum() != defect.signum() {
                bracket = Some((ps, s));
                break;
            }
        }
        prev = Some((s, defect));
    }
    let (mut lo, mut hi) = bracket.ok_or_else(|| {
        Error::NoBracket(format!(
            "no slope in the scan range reaches the outer value {b} (direction {direction})"
        ))
    })?;

    // Secant-safeguarded bisection on the slope.
    let mut flo = shoot_defect(prob, lo, &opts).0;
    let target_band = tol * (1.0 + b.abs());
    for _ in 0..200 {
        if (hi - lo).abs() <= 1e-15 * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        let fhi = shoot_defect(prob, hi, &opts).0;
        let mut mid = if fhi != flo {
            lo - flo * (hi - lo) / (fhi - flo)
        } else {
            0.5 * (lo + hi)
        };
        let margin = 0.01 * (hi - lo).abs();
        if !((mid - lo).abs() > margin && (mid - hi).abs() > margin && (mid - lo) * (mid - hi) < 0.0)
        {
            mid = 0.5 * (lo + hi);
        }
        let (fmid, traj) = shoot_defect(prob, mid, &opts);
        if fmid.abs() <= target_band {
            if let Some(t) = traj {
                return Ok(t);
            }
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    // Final attempt at the best endpoint.
    let (defect, traj) = shoot_defect(prob, 0.5 * (lo + hi), &opts);
    match traj {
        Some(t) if defect.abs() <= target_band => Ok(t),
        _ => Err(Error::NoBracket(format!(
            "shooting stalled with outer defect {defect:e} above the band {target_band:e}"
        ))),
    }
}

/// Looks up a strict supersolution certificate for condition-star on the
/// annulus: a profile whose residual is strictly positive on the sampled
/// grid. Candidates come from the power and log-power catalog; each is
/// verified by classification before being returned.
pub fn star_certificate(
    params: &Params,
    pot: &Potential,
    ann: &Annulus,
    grid: &GridSpec,
) -> Option<RadialFamily> {
    let mut candidates: Vec<RadialFamily> = Vec::new();
    let gamma = params.critical_alpha();
    match pot {
        Potential::Zero => {
            if params.is_dimension_critical() {
                candidates.push(RadialFamily::log_power(0.0, 0.5, 0.0));
            } else {
                candidates.push(RadialFamily::power(0.5 * params.harmonic_alpha()));
            }
        }
        Potential::PureHardy { lambda } => {
            if let Ok(roots) = hardy_roots(params, *lambda) {
                if !roots.degenerate {
                    candidates.push(RadialFamily::power(0.5 * (roots.lower + roots.upper)));
                }
            }
            // Near-critical coupling: the log-corrected member.
            candidates.push(RadialFamily::log_power(gamma, 1.0 / params.p, 0.0));
            if params.is_dimension_critical() {
                candidates.push(RadialFamily::log_power(0.0, 0.5, 0.0));
            }
        }
        Potential::ImprovedHardy { epsilon } => {
            if let Ok(roots) = improved_roots(params, *epsilon) {
                if !roots.degenerate {
                    candidates.push(RadialFamily::log_power(
                        gamma,
                        0.5 * (roots.lower + roots.upper),
                        0.0,
                    ));
                }
                // Critical coupling: tilt by the iterated logarithm.
                candidates.push(RadialFamily::log_power(gamma, roots.lower, 1.0 / params.p));
            }
        }
        Potential::Tabulated { .. } => {
            // No structure to exploit; probe a few generic shapes.
            if params.is_dimension_critical() {
                candidates.push(RadialFamily::log_power(0.0, 0.5, 0.0));
            } else {
                candidates.push(RadialFamily::power(0.5 * params.harmonic_alpha()));
                candidates.push(RadialFamily::power(0.5 * gamma));
            }
        }
    }
    candidates.into_iter().find(|c| {
        ann.r0 > c.min_radius()
            && classify(params, c, pot, ann, grid).is_ok_and(|rep| {
                rep.verdict == Verdict::Supersolution
                    && rep.strict
                    && rep.rho0 <= ann.r0 * (1.0 + 1e-9)
            })
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    /// True when `u <= v` held at every node within the dead-band.
    pub holds: bool,
    pub checked_nodes: usize,
    /// Most negative value of `(v - u) / (u + v)` over the grid.
    pub worst_margin: f64,
    pub first_violation: Option<(f64, f64, f64)>,
    /// The strict supersolution certifying condition-star.
    pub certificate: RadialFamily,
}

/// Verifies `u <= v` across the annulus for a subsolution `u` below a
/// non-negative supersolution `v` that agree in order on both boundary
/// spheres, with condition-star certified by a strict supersolution from
/// the catalog (or supplied by the caller).
pub fn comparison_verify(
    params: &Params,
    pot: &Potential,
    ann: &Annulus,
    u: &dyn RadialFn,
    v: &dyn RadialFn,
    grid: &GridSpec,
    certificate: Option<RadialFamily>,
) -> Result<ComparisonReport> {
    let rep_u = classify(params, u, pot, ann, grid)?;
    if !(matches!(rep_u.verdict, Verdict::Subsolution | Verdict::Solution)
        && rep_u.rho0 <= ann.r0 * (1.0 + 1e-9))
    {
        return Err(Error::Precondition(format!(
            "u must be a subsolution on the whole annulus, got {:?}",
            rep_u.verdict
        )));
    }
    let rep_v = classify(params, v, pot, ann, grid)?;
    if !(matches!(rep_v.verdict, Verdict::Supersolution | Verdict::Solution)
        && rep_v.rho0 <= ann.r0 * (1.0 + 1e-9))
    {
        return Err(Error::Precondition(format!(
            "v must be a supersolution on the whole annulus, got {:?}",
            rep_v.verdict
        )));
    }
    let certificate = match certificate {
        Some(c) => {
            let rep = classify(params, &c, pot, ann, grid)?;
            if !(rep.verdict == Verdict::Supersolution && rep.strict) {
                return Err(Error::Precondition(
                    "supplied certificate is not a strict supersolution on the annulus".into(),
                ));
            }
            c
        }
        None => star_certificate(params, pot, ann, grid).ok_or_else(|| {
            Error::Precondition(
                "condition-star could not be certified: no strict supersolution found".into(),
            )
        })?,
    };

    let hi = ann.r1.min(u.max_radius()).min(v.max_radius());
    let nodes = grid.sample(ann.r0, hi)?;
    // Boundary ordering on the two spheres.
    for &r in [nodes[0], nodes[nodes.len() - 1]].iter() {
        let (uv, vv) = (u.eval(r), v.eval(r));
        if uv > vv + RESIDUAL_DEAD_BAND * (uv.abs() + vv.abs()) {
            return Err(Error::Precondition(format!(
                "boundary ordering u <= v fails at r = {r}: u = {uv}, v = {vv}"
            )));
        }
        if vv < 0.0 {
            return Err(Error::Precondition(format!("v negative at boundary r = {r}")));
        }
    }

    let mut worst = f64::MAX;
    let mut first_violation = None;
    for &r in &nodes {
        let (uv, vv) = (u.eval(r), v.eval(r));
        let margin = (vv - uv) / (uv.abs() + vv.abs() + 1e-300);
        if margin < worst {
            worst = margin;
        }
        if margin < -RESIDUAL_DEAD_BAND && first_violation.is_none() {
            first_violation = Some((r, uv, vv));
        }
    }
    Ok(ComparisonReport {
        holds: first_violation.is_none(),
        checked_nodes: nodes.len(),
        worst_margin: worst,
        first_violation,
        certificate,
    })
}

/// Which side of the growth dichotomy the sampled quotient follows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthDichotomyReport {
    /// Quotient non-increasing on the whole annulus.
    pub nonincreasing_throughout: bool,
    /// Quotient non-decreasing from `rho_star` on.
    pub eventually_nondecreasing: bool,
    pub rho_star: Option<f64>,
    /// Factor applied to `u` so the quotient starts at one.
    pub normalization: f64,
}

/// Classifies the quotient `u/v` of two increasing candidates, `u` a
/// subsolution normalized to match `v` at the inner sphere and `v` a strict
/// supersolution: either the quotient never increases, or it is
/// non-decreasing past some detected threshold radius (both for a constant
/// quotient).
pub fn growth_dichotomy_check(
    params: &Params,
    pot: &Potential,
    u: &dyn RadialFn,
    v: &dyn RadialFn,
    ann: &Annulus,
    grid: &GridSpec,
) -> Result<GrowthDichotomyReport> {
    params.require_p_at_least_two()?;
    let rep_u = classify(params, u, pot, ann, grid)?;
    if !matches!(rep_u.verdict, Verdict::Subsolution | Verdict::Solution) {
        return Err(Error::Precondition(format!(
            "u must be a subsolution, got {:?}",
            rep_u.verdict
        )));
    }
    let rep_v = classify(params, v, pot, ann, grid)?;
    if !(rep_v.verdict == Verdict::Supersolution && rep_v.strict
        || rep_v.verdict == Verdict::Solution)
    {
        return Err(Error::Precondition(format!(
            "v must be a strict supersolution, got {:?} (strict: {})",
            rep_v.verdict, rep_v.strict
        )));
    }
    let hi = ann.r1.min(u.max_radius()).min(v.max_radius());
    let nodes = grid.sample(ann.r0, hi)?;
    for &r in &nodes {
        if !(u.deriv(r) > 0.0 && v.deriv(r) > 0.0) {
            return Err(Error::Precondition(format!(
                "both candidates must be strictly increasing (r = {r})"
            )));
        }
    }
    let normalization = v.eval(nodes[0]) / u.eval(nodes[0]);
    let q: Vec<f64> = nodes
        .iter()
        .map(|&r| normalization * u.eval(r) / v.eval(r))
        .collect();

    let tol = 1e-12;
    let nonincreasing_throughout = q.windows(2).all(|w| w[1] <= w[0] * (1.0 + tol));
    // Longest non-decreasing suffix.
    let mut start = q.len() - 1;
    for i in (0..q.len() - 1).rev() {
        if q[i + 1] >= q[i] * (1.0 - tol) {
            start = i;
        } else {
            break;
        }
    }
    let eventually_nondecreasing = start + 2 <= q.len();
    let rho_star = eventually_nondecreasing.then(|| nodes[start]);
    Ok(GrowthDichotomyReport {
        nonincreasing_throughout,
        eventually_nondecreasing,
        rho_star,
        normalization,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: f64, n: u32) -> Params {
        Params::new(p, n).unwrap()
    }

    #[test]
    fn bvp_harmonic_interpolant() {
        // V = 0, p = 2, N = 3, boundary (1 at 1, 1/2 at 2): u = 1/r.
        let pr = params(2.0, 3);
        let prob = BvpProblem::new(
            pr,
            Potential::Zero,
            Annulus::new(1.0, 2.0).unwrap(),
            1.0,
            0.5,
        )
        .unwrap();
        let traj = solve_bvp(&prob, 1e-10).unwrap();
        for (r, v) in traj.nodes.iter().zip(traj.values.iter()) {
            let exact = 1.0 / r;
            assert!(
                (v - exact).abs() <= 1e-8 * exact,
                "r = {r}: {v} vs {exact}"
            );
        }
    }

    #[test]
    fn bvp_recovers_power_solution() {
        let pr = params(3.0, 5);
        let lambda = 0.5 * pr.c_h();
        let alpha = hardy_roots(&pr, lambda).unwrap().lower;
        let u = RadialFamily::power(alpha);
        let (r0, r1) = (1.0, 10.0);
        let prob = BvpProblem::new(
            pr,
            Potential::pure_hardy(lambda).unwrap(),
            Annulus::new(r0, r1).unwrap(),
            u.eval(r0),
            u.eval(r1),
        )
        .unwrap();
        let traj = solve_bvp(&prob, 1e-8).unwrap();
        for (r, v) in traj.nodes.iter().zip(traj.values.iter()) {
            let exact = u.eval(*r);
            assert!(
                (v - exact).abs() <= 1e-6 * exact,
                "r = {r}: {v} vs {exact}"
            );
        }
    }

    #[test]
    fn bvp_constant_and_gates() {
        let pr = params(3.0, 5);
        let prob = BvpProblem::new(
            pr,
            Potential::Zero,
            Annulus::new(1.0, 4.0).unwrap(),
            2.0,
            2.0,
        )
        .unwrap();
        let traj = solve_bvp(&prob, 1e-9).unwrap();
        assert!(traj.values.iter().all(|&v| v == 2.0));

        // Equal boundary values with a real potential have no monotone regime.
        let prob = BvpProblem::new(
            pr,
            Potential::pure_hardy(0.1).unwrap(),
            Annulus::new(1.0, 4.0).unwrap(),
            2.0,
            2.0,
        )
        .unwrap();
        assert!(matches!(solve_bvp(&prob, 1e-9), Err(Error::Precondition(_))));

        // Unreachable target: outer value far beyond the slope scan.
        let prob = BvpProblem::new(
            pr,
            Potential::Zero,
            Annulus::new(1.0, 2.0).unwrap(),
            1.0,
            1e7,
        )
        .unwrap();
        assert!(matches!(solve_bvp(&prob, 1e-9), Err(Error::NoBracket(_))));
    }

    #[test]
    fn shooting_defect_monotone_in_slope() {
        // Sampled check behind the bisection: the outer hit value moves
        // monotonically with the initial slope.
        let pr = params(3.0, 5);
        let lambda = 0.4 * pr.c_h();
        let prob = BvpProblem::new(
            pr,
            Potential::pure_hardy(lambda).unwrap(),
            Annulus::new(1.0, 8.0).unwrap(),
            1.0,
            0.3,
        )
        .unwrap();
        let opts = IntegratorOptions::with_tol(1e-10);
        let mut defects = Vec::new();
        for i in 0..32 {
            let s = -1e-3 * (1e3f64).powf(i as f64 / 31.0);
            defects.push(shoot_defect(&prob, s, &opts).0);
        }
        assert!(
            defects.windows(2).all(|w| w[1] <= w[0] + 1e-12),
            "defects not monotone: {defects:?}"
        );
    }

    #[test]
    fn comparison_scalar_ordering() {
        let pr = params(3.0, 5);
        let lambda = 0.5 * pr.c_h();
        let pot = Potential::pure_hardy(lambda).unwrap();
        let alpha = hardy_roots(&pr, lambda).unwrap().lower;
        let u = RadialFamily::power(alpha);
        let v = RadialFamily::power(alpha).with_amplitude(1.1);
        let ann = Annulus::new(2.0, 100.0).unwrap();
        let rep = comparison_verify(&pr, &pot, &ann, &u, &v, &GridSpec::new(128), None).unwrap();
        assert!(rep.holds);
        assert!(rep.worst_margin > 0.0);
    }

    #[test]
    fn comparison_power_pair_interior() {
        let pr = params(2.5, 4);
        let lambda = 0.6 * pr.c_h();
        let pot = Potential::pure_hardy(lambda).unwrap();
        let roots = hardy_roots(&pr, lambda).unwrap();
        let u = RadialFamily::power(roots.lower);
        let beta = 0.5 * (roots.lower + roots.upper);
        let ann = Annulus::new(2.0, 500.0).unwrap();
        // Scale v so ordering holds at both boundary spheres; the interior
        // follows from the monotone exponent gap.
        let v0 = RadialFamily::power(beta);
        let s = (u.eval(ann.r0) / v0.eval(ann.r0)).max(u.eval(ann.r1) / v0.eval(ann.r1)) * 1.02;
        let v = v0.with_amplitude(s);
        let rep = comparison_verify(&pr, &pot, &ann, &u, &v, &GridSpec::new(128), None).unwrap();
        assert!(rep.holds, "worst margin {:e}", rep.worst_margin);

        // Breaking the boundary ordering trips the gate.
        let v_low = v0.with_amplitude(s * 0.5);
        let err =
            comparison_verify(&pr, &pot, &ann, &u, &v_low, &GridSpec::new(128), None).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn star_certificates_cover_potentials() {
        let grid = GridSpec::new(128);
        // Zero potential, generic and dimension-critical.
        let pr = params(3.0, 5);
        let ann = Annulus::new(2.0, 1e4).unwrap();
        assert!(star_certificate(&pr, &Potential::Zero, &ann, &grid).is_some());
        let prn = params(3.0, 3);
        let ann_log = Annulus::new(3.0, 1e4).unwrap();
        assert!(star_certificate(&prn, &Potential::Zero, &ann_log, &grid).is_some());
        // Pure Hardy below and at the critical coupling.
        let pot = Potential::pure_hardy(0.5 * pr.c_h()).unwrap();
        assert!(star_certificate(&pr, &pot, &ann, &grid).is_some());
        let pot = Potential::pure_hardy(pr.c_h()).unwrap();
        let ann_far = Annulus::new(20.0, 1e5).unwrap();
        assert!(star_certificate(&pr, &pot, &ann_far, &grid).is_some());
        // Improved Hardy interior and critical.
        let pot = Potential::improved_hardy(0.5 * pr.c_star()).unwrap();
        assert!(star_certificate(&pr, &pot, &ann_far, &grid).is_some());
        // At the critical coupling the log-log tilted member only turns
        // supersolution past a few hundred; certify on a far annulus.
        let pot = Potential::improved_hardy(pr.c_star()).unwrap();
        let ann_vfar = Annulus::new(1e3, 1e6).unwrap();
        assert!(star_certificate(&pr, &pot, &ann_vfar, &grid).is_some());
    }

    #[test]
    fn growth_dichotomy_regimes() {
        // p > N: positive exponents, increasing candidates.
        let pr = params(4.0, 3);
        let lambda = 0.5 * pr.c_h();
        let pot = Potential::pure_hardy(lambda).unwrap();
        let roots = hardy_roots(&pr, lambda).unwrap();
        let beta = 0.5 * (roots.lower + roots.upper);
        let ann = Annulus::new(2.0, 1e4).unwrap();
        let grid = GridSpec::new(128);

        // u = r^(alpha_lambda) (solution, subsolution) against v = r^beta:
        // the normalized quotient r^(alpha - beta) decreases throughout.
        let u = RadialFamily::power(roots.lower);
        let v = RadialFamily::power(beta);
        let rep = growth_dichotomy_check(&pr, &pot, &u, &v, &ann, &grid).unwrap();
        assert!(rep.nonincreasing_throughout);
        assert!(!rep.eventually_nondecreasing || rep.rho_star.is_some());

        // u = r^(alpha_bar) grows past v: regime (ii) from the inner sphere.
        let u = RadialFamily::power(roots.upper);
        let rep = growth_dichotomy_check(&pr, &pot, &u, &v, &ann, &grid).unwrap();
        assert!(!rep.nonincreasing_throughout);
        assert!(rep.eventually_nondecreasing);
        assert_eq!(rep.rho_star, Some(ann.r0));

        // u = v on an exact solution is the boundary case: both flags set.
        let sol = RadialFamily::power(roots.upper);
        let rep = growth_dichotomy_check(&pr, &pot, &sol, &sol, &ann, &grid).unwrap();
        assert!(rep.nonincreasing_throughout && rep.eventually_nondecreasing);
    }

    #[test]
    fn growth_dichotomy_gates() {
        // Decreasing candidates (p < N) violate the increasing hypothesis.
        let pr = params(2.0, 3);
        let lambda = 0.1;
        let pot = Potential::pure_hardy(lambda).unwrap();
        let roots = hardy_roots(&pr, lambda).unwrap();
        let u = RadialFamily::power(roots.lower);
        let v = RadialFamily::power(0.5 * (roots.lower + roots.upper));
        let ann = Annulus::new(2.0, 100.0).unwrap();
        let err = growth_dichotomy_check(&pr, &pot, &u, &v, &ann, &GridSpec::new(64)).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }
}
