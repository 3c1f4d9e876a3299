//! Adaptive integration of radial trajectories in flux form, decay-rate
//! estimation, and the ratio diagnostics behind the two asymptotic
//! alternatives.
//!
//! The radial equation is integrated as the first-order system
//!
//! ```text
//! w  = r^(N-1) |phi'|^(p-2) phi',      w' = -r^(N-1) V phi^(p-1),
//! phi' = sign(w) (|w| / r^(N-1))^(1/(p-1)),
//! ```
//!
//! in the variable `t = log r`. The flux `w` removes the `|phi'|^(p-2)`
//! division from the right-hand side and makes the divergence-form balance
//! exact, while the log substitution keeps step quality uniform across
//! decades of `r`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::Potential;
use crate::grid::GridSpec;
use crate::params::Params;
use crate::radial::RadialFn;

/// Hard ceiling on state magnitudes before integration aborts.
const BLOWUP_LIMIT: f64 = 1e300;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorOptions {
    /// Relative tolerance of the embedded error estimate.
    pub rtol: f64,
    /// Absolute tolerance floor added to each component scale.
    pub atol: f64,
    /// Largest step in `t = log r`; also bounds interpolation error between
    /// stored nodes.
    pub max_step: f64,
    /// Forces a constant step in `t` and disables step rejection; used by
    /// convergence-order checks.
    pub fixed_step: Option<f64>,
    pub max_steps: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-9,
            atol: 0.0,
            max_step: 0.25,
            fixed_step: None,
            max_steps: 1_000_000,
        }
    }
}

impl IntegratorOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            rtol: tol,
            ..Self::default()
        }
    }
}

/// Why integration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    ReachedRmax,
    /// The profile hit zero; nodes stop at the last positive value.
    PositivityLost,
    /// `phi'` changed sign; only reported for `p <= 2` (an error otherwise).
    GradientVanished,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Monotonicity {
    Decreasing,
    Increasing,
    NonMonotone,
}

/// Flux-balance bookkeeping for one accepted step: the defect
/// `dw + integral(r^(N-1) V phi^(p-1) dr)` with the integral evaluated by
/// Gauss quadrature on the dense output, and the local error budget the
/// defect is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepBalance {
    pub r_from: f64,
    pub r_to: f64,
    pub defect: f64,
    pub budget: f64,
}

/// A numerically integrated radial profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
    pub derivs: Vec<f64>,
    pub flux: Vec<f64>,
    /// `d log phi / d log r` at each node.
    pub local_exponent: Vec<f64>,
    pub monotone: Monotonicity,
    pub termination: Termination,
    pub balances: Vec<StepBalance>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn first_radius(&self) -> f64 {
        self.nodes[0]
    }

    pub fn last_radius(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    pub fn last_value(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Worst ratio `|defect| / budget` over all accepted steps.
    pub fn worst_balance_ratio(&self) -> f64 {
        self.balances
            .iter()
            .map(|b| b.defect.abs() / b.budget)
            .fold(0.0, f64::max)
    }

    /// Samples a closed-form profile onto a geometric grid so the decay and
    /// ratio diagnostics can consume it through the trajectory interface.
    pub fn from_radial(
        f: &dyn RadialFn,
        params: &Params,
        lo: f64,
        hi: f64,
        n: usize,
    ) -> Result<Self> {
        if lo <= f.min_radius() {
            return Err(Error::Domain(format!(
                "sampling starts at {lo} but the profile needs r > {}",
                f.min_radius()
            )));
        }
        let nodes = crate::grid::geometric(lo, hi.min(f.max_radius()), n)?;
        let values: Vec<f64> = nodes.iter().map(|&r| f.eval(r)).collect();
        let derivs: Vec<f64> = nodes.iter().map(|&r| f.deriv(r)).collect();
        let nm1 = params.n_f64() - 1.0;
        let flux: Vec<f64> = nodes
            .iter()
            .zip(derivs.iter())
            .map(|(&r, &d)| r.powf(nm1) * crate::family::signed_pow(d, params.p - 1.0))
            .collect();
        let local_exponent: Vec<f64> = nodes
            .iter()
            .zip(values.iter().zip(derivs.iter()))
            .map(|(r, (v, d))| r * d / v)
            .collect();
        let monotone = if derivs.iter().all(|&d| d < 0.0) {
            Monotonicity::Decreasing
        } else if derivs.iter().all(|&d| d > 0.0) {
            Monotonicity::Increasing
        } else {
            Monotonicity::NonMonotone
        };
        Ok(Self {
            nodes,
            values,
            derivs,
            flux,
            local_exponent,
            monotone,
            termination: Termination::ReachedRmax,
            balances: Vec::new(),
        })
    }

    fn segment(&self, r: f64) -> usize {
        // Index i with nodes[i] <= r <= nodes[i+1].
        let n = self.nodes.len();
        let i = self.nodes.partition_point(|&x| x <= r);
        i.clamp(1, n - 1) - 1
    }

    fn hermite(&self, r: f64) -> (f64, f64, f64) {
        let i = self.segment(r);
        let (r0, r1) = (self.nodes[i], self.nodes[i + 1]);
        let h = r1 - r0;
        let s = (r - r0) / h;
        let (y0, y1, d0, d1) = (
            self.values[i],
            self.values[i + 1],
            self.derivs[i],
            self.derivs[i + 1],
        );
        let s2 = s * s;
        let s3 = s2 * s;
        let value = (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * h * d0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * h * d1;
        let deriv = (6.0 * s2 - 6.0 * s) * (y0 - y1) / h
            + (3.0 * s2 - 4.0 * s + 1.0) * d0
            + (3.0 * s2 - 2.0 * s) * d1;
        let second =
            ((12.0 * s - 6.0) * (y0 - y1) / h + (6.0 * s - 4.0) * d0 + (6.0 * s - 2.0) * d1) / h;
        (value, deriv, second)
    }
}

impl RadialFn for Trajectory {
    fn eval(&self, r: f64) -> f64 {
        self.hermite(r).0
    }

    fn deriv(&self, r: f64) -> f64 {
        self.hermite(r).1
    }

    fn second_deriv(&self, r: f64) -> f64 {
        self.hermite(r).2
    }

    fn min_radius(&self) -> f64 {
        self.nodes[0] * (1.0 - 1e-12)
    }

    fn max_radius(&self) -> f64 {
        self.last_radius()
    }
}

/// `phi'` recovered from the flux: `sign(w) (|w|/r^(N-1))^(1/(p-1))`.
fn gradient_from_flux(params: &Params, r: f64, w: f64) -> f64 {
    if w == 0.0 {
        return 0.0;
    }
    let nm1 = params.n_f64() - 1.0;
    let inv = 1.0 / (params.p - 1.0);
    let denom = r.powf(nm1);
    let ratio = w.abs() / denom;
    if ratio.is_finite() && ratio > 1e-280 && ratio < 1e280 {
        w.signum() * ratio.powf(inv)
    } else {
        // Log-space fallback for extreme dynamic ranges.
        w.signum() * ((w.abs().ln() - nm1 * r.ln()) * inv).exp()
    }
}

struct FluxSystem<'a> {
    params: &'a Params,
    pot: &'a Potential,
}

impl FluxSystem<'_> {
    /// Right-hand side in `t = log r`: `d phi/dt = r phi'`,
    /// `d w/dt = -r^N V phi^(p-1)`.
    fn rhs(&self, t: f64, y: [f64; 2]) -> [f64; 2] {
        let r = t.exp();
        let dphi = r * gradient_from_flux(self.params, r, y[1]);
        let v = self.pot.eval(self.params, r);
        let dw = if v == 0.0 {
            0.0
        } else {
            -r.powf(self.params.n_f64()) * v * y[0].max(0.0).powf(self.params.p - 1.0)
        };
        [dphi, dw]
    }
}

// Dormand-Prince 5(4) tableau; the last row holds the 5th-order weights.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const ERR: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
// Dense-output weights of the quartic continuous extension.
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

// 5-point Gauss-Legendre on [0, 1].
const GL_NODES: [f64; 5] = [
    0.046910077030668,
    0.230765344947158,
    0.5,
    0.769234655052841,
    0.953089922969332,
];
const GL_WEIGHTS: [f64; 5] = [
    0.118463442528095,
    0.239314335249683,
    0.284444444444444,
    0.239314335249683,
    0.118463442528095,
];

/// Dense output over one accepted step, evaluated at `theta in [0, 1]`.
struct DenseSegment {
    cont: [[f64; 2]; 5],
}

impl DenseSegment {
    fn build(y0: [f64; 2], y1: [f64; 2], h: f64, k: &[[f64; 2]; 7]) -> Self {
        let mut cont = [[0.0; 2]; 5];
        for i in 0..2 {
            let ydiff = y1[i] - y0[i];
            let bspl = h * k[0][i] - ydiff;
            cont[0][i] = y0[i];
            cont[1][i] = ydiff;
            cont[2][i] = bspl;
            cont[3][i] = ydiff - h * k[6][i] - bspl;
            cont[4][i] = h * (0..7).map(|j| D[j] * k[j][i]).sum::<f64>();
        }
        Self { cont }
    }

    fn eval(&self, theta: f64) -> [f64; 2] {
        let th1 = 1.0 - theta;
        let mut out = [0.0; 2];
        for i in 0..2 {
            let c = &self.cont;
            out[i] =
                c[0][i] + theta * (c[1][i] + th1 * (c[2][i] + theta * (c[3][i] + th1 * c[4][i])));
        }
        out
    }
}

/// Integrates the radial equation from `(r0, phi0, dphi0)` out to `r_max`.
///
/// Terminates early with a recorded status when the profile loses
/// positivity or the gradient changes sign (`p <= 2`); for `p > 2` a
/// vanishing gradient is an error, as is state blow-up or step underflow.
pub fn integrate(
    params: &Params,
    pot: &Potential,
    r0: f64,
    phi0: f64,
    dphi0: f64,
    r_max: f64,
    opts: &IntegratorOptions,
) -> Result<Trajectory> {
    if !(r0.is_finite() && r0 > 0.0 && r0 > pot.min_radius()) {
        return Err(Error::Domain(format!(
            "r0 = {r0} invalid for the potential (needs r > {})",
            pot.min_radius()
        )));
    }
    if !(r_max.is_finite() && r_max > r0) {
        return Err(Error::Domain(format!(
            "r_max = {r_max} must exceed r0 = {r0}"
        )));
    }
    if !(phi0.is_finite() && phi0 > 0.0) {
        return Err(Error::Domain(format!("phi0 = {phi0} must be positive")));
    }
    if params.p > 2.0 && dphi0 == 0.0 {
        return Err(Error::DegenerateGradient {
            r: r0,
            magnitude: 0.0,
        });
    }
    if !(opts.rtol > 0.0) && opts.fixed_step.is_none() {
        return Err(Error::Domain("rtol must be positive".into()));
    }

    let sys = FluxSystem { params, pot };
    let nm1 = params.n_f64() - 1.0;
    let w0 = r0.powf(nm1) * crate::family::signed_pow(dphi0, params.p - 1.0);
    let grad_sign = dphi0.signum();

    let t_end = r_max.ln();
    let mut t = r0.ln();
    let mut y = [phi0, w0];
    let mut k1 = sys.rhs(t, y);

    let mut nodes = vec![r0];
    let mut values = vec![phi0];
    let mut derivs = vec![dphi0];
    let mut flux = vec![w0];
    let mut balances: Vec<StepBalance> = Vec::new();
    let mut termination = Termination::ReachedRmax;

    let mut h = opts
        .fixed_step
        .unwrap_or(opts.max_step / 8.0)
        .min(t_end - t);
    let mut facold: f64 = 1e-4;
    let expo1 = 0.2 - 0.04 * 0.75;
    let mut k = [[0.0; 2]; 7];

    for step in 0.. {
        if step >= opts.max_steps {
            return Err(Error::ToleranceFailure { r: t.exp() });
        }
        if t >= t_end - 1e-14 * (1.0 + t_end.abs()) {
            break;
        }
        h = h.min(t_end - t);
        if h < 1e-14 * (1.0 + t.abs()) {
            return Err(Error::ToleranceFailure { r: t.exp() });
        }

        k[0] = k1;
        for s in 0..6 {
            let mut ys = y;
            for i in 0..2 {
                let acc: f64 = (0..=s).map(|j| A[s][j] * k[j][i]).sum();
                ys[i] += h * acc;
            }
            k[s + 1] = sys.rhs(t + C[s] * h, ys);
        }
        let mut y1 = y;
        for i in 0..2 {
            let acc: f64 = (0..6).map(|j| A[5][j] * k[j][i]).sum();
            y1[i] = y[i] + h * acc;
        }
        // FSAL stage at the step end.
        k[6] = sys.rhs(t + h, y1);

        let mut err: f64 = 0.0;
        for i in 0..2 {
            let e: f64 = (0..7).map(|j| ERR[j] * k[j][i]).sum::<f64>() * h;
            let sc = opts.atol + opts.rtol * y[i].abs().max(y1[i].abs()) + 1e-300;
            err += (e / sc) * (e / sc);
        }
        err = (err / 2.0).sqrt();

        let accept = opts.fixed_step.is_some() || err <= 1.0;
        if !accept {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            continue;
        }

        if !(y1[0].is_finite() && y1[1].is_finite())
            || y1[0].abs() >= BLOWUP_LIMIT
            || y1[1].abs() >= BLOWUP_LIMIT
        {
            return Err(Error::Blowup {
                r: (t + h).exp(),
                magnitude: y1[0].abs().max(y1[1].abs()),
            });
        }

        // Event checks on the accepted step.
        if y1[0] <= 0.0 {
            termination = Termination::PositivityLost;
            break;
        }
        if grad_sign != 0.0 && y1[1] != 0.0 && y1[1].signum() == -grad_sign {
            if params.p > 2.0 {
                return Err(Error::DegenerateGradient {
                    r: (t + h).exp(),
                    magnitude: 0.0,
                });
            }
            termination = Termination::GradientVanished;
            break;
        }

        // Flux balance across the step: dw plus the Gauss quadrature of
        // r^N V phi^(p-1) dt on the dense output.
        let mut integral = 0.0;
        if !matches!(pot, Potential::Zero) {
            let dense = DenseSegment::build(y, y1, h, &k);
            for (gn, gw) in GL_NODES.iter().zip(GL_WEIGHTS.iter()) {
                let yq = dense.eval(*gn);
                let rq = (t + gn * h).exp();
                integral += gw
                    * rq.powf(params.n_f64())
                    * pot.eval(params, rq)
                    * yq[0].max(0.0).powf(params.p - 1.0);
            }
            integral *= h;
        }
        let budget = opts.atol + opts.rtol * y[1].abs().max(y1[1].abs()) + 1e-300;
        balances.push(StepBalance {
            r_from: t.exp(),
            r_to: (t + h).exp(),
            defect: (y1[1] - y[1]) + integral,
            budget,
        });

        t += h;
        y = y1;
        k1 = k[6];

        let r = t.exp();
        nodes.push(r);
        values.push(y[0]);
        derivs.push(gradient_from_flux(params, r, y[1]));
        flux.push(y[1]);

        if opts.fixed_step.is_none() {
            let fac = (0.9 * err.powf(-expo1) * facold.powf(0.04)).clamp(0.2, 5.0);
            facold = err.max(1e-4);
            h = (h * fac).min(opts.max_step);
        }
    }

    if nodes.len() < 2 {
        return Err(Error::Precondition(format!(
            "integration stopped before the second node ({termination:?})"
        )));
    }

    let local_exponent: Vec<f64> = nodes
        .iter()
        .zip(values.iter().zip(derivs.iter()))
        .map(|(r, (v, d))| r * d / v)
        .collect();
    let monotone = if derivs.iter().all(|&d| d < 0.0) {
        Monotonicity::Decreasing
    } else if derivs.iter().all(|&d| d > 0.0) {
        Monotonicity::Increasing
    } else {
        Monotonicity::NonMonotone
    };

    Ok(Trajectory {
        nodes,
        values,
        derivs,
        flux,
        local_exponent,
        monotone,
        termination,
        balances,
    })
}

/// Least-squares slope of `log phi` against `log r` over the nodes inside
/// `[window.0, window.1]`; needs at least 16 of them.
pub fn decay_fit(traj: &Trajectory, window: (f64, f64)) -> Result<f64> {
    let pts: Vec<(f64, f64)> = traj
        .nodes
        .iter()
        .zip(traj.values.iter())
        .filter(|(&r, &v)| r >= window.0 && r <= window.1 && v > 0.0)
        .map(|(&r, &v)| (r.ln(), v.ln()))
        .collect();
    if pts.len() < 16 {
        return Err(Error::InsufficientWindow {
            got: pts.len(),
            need: 16,
        });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Ok(sxy / sxx)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RatioTrend {
    /// Ratio tends to zero and is non-increasing past a recorded radius.
    VanishingMonotone,
    /// Ratio tends to zero without a certified monotone tail.
    Vanishing,
    /// Ratio stays bounded away from zero (or grows) across the horizon.
    BoundedAway,
    /// No consistent trend; both alternatives stay unresolved.
    Oscillating,
}

/// Which asymptotic alternative the finite-horizon evidence supports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Alternative {
    /// The candidate is dominated by every positive supersolution.
    Domination,
    /// The ratio limsup stays positive: the candidate is not smaller.
    NonSmallness,
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioDiagnostic {
    pub ratios: Vec<(f64, f64)>,
    pub trend: RatioTrend,
    /// Maximum of the last quarter of samples, robust against pre-asymptotic
    /// transients.
    pub limsup_estimate: f64,
    /// First radius from which the ratio is non-increasing, when one exists.
    pub monotone_from: Option<f64>,
    pub supported: Alternative,
    /// Always true: the mathematical limsup at the outer boundary is not
    /// computable, only a finite-horizon estimate is reported.
    pub finite_horizon: bool,
    pub horizon: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlOptions {
    pub horizon: f64,
    pub nodes: usize,
    /// Log-log slopes within this band count as flat.
    pub slope_tol: f64,
    /// Tail quarters below this fraction of the peak count as vanished.
    pub vanish_ratio: f64,
}

impl Default for PlOptions {
    fn default() -> Self {
        Self {
            horizon: 1e8,
            nodes: 512,
            slope_tol: 1e-3,
            vanish_ratio: 1e-3,
        }
    }
}

/// Samples `u/w` on a geometric grid up to the horizon and classifies the
/// trend of the quotient.
pub fn pl_alternative(
    u: &dyn RadialFn,
    w: &dyn RadialFn,
    ann: &crate::family::Annulus,
    opts: &PlOptions,
) -> Result<RatioDiagnostic> {
    let lo = ann
        .r0
        .max(u.min_radius() * (1.0 + 1e-9))
        .max(w.min_radius() * (1.0 + 1e-9));
    let hi = ann
        .r1
        .min(opts.horizon)
        .min(u.max_radius())
        .min(w.max_radius());
    let nodes = GridSpec::new(opts.nodes.max(64)).sample(lo, hi)?;
    let mut ratios = Vec::with_capacity(nodes.len());
    for &r in &nodes {
        let (uv, wv) = (u.eval(r), w.eval(r));
        if !(uv > 0.0 && wv > 0.0) {
            return Err(Error::Precondition(format!(
                "ratio diagnostic needs positive profiles, got u = {uv}, w = {wv} at r = {r}"
            )));
        }
        ratios.push((r, uv / wv));
    }
    let n = ratios.len();
    let max_ratio = ratios.iter().map(|p| p.1).fold(f64::MIN, f64::max);
    let tail_start = 3 * n / 4;
    let limsup_estimate = ratios[tail_start..]
        .iter()
        .map(|p| p.1)
        .fold(f64::MIN, f64::max);

    // Longest non-increasing suffix (relative tolerance on ties).
    let mut mono_idx = n - 1;
    for i in (0..n - 1).rev() {
        if ratios[i].1 >= ratios[i + 1].1 * (1.0 - 1e-12) {
            mono_idx = i;
        } else {
            break;
        }
    }
    let monotone_from = (mono_idx + 1 < n).then(|| ratios[mono_idx].0);

    // Tail-half trend: log-log slope and direction changes.
    let half = n / 2;
    let tail = &ratios[half..];
    let m = tail.len() as f64;
    let mx = tail.iter().map(|p| p.0.ln()).sum::<f64>() / m;
    let my = tail.iter().map(|p| p.1.ln()).sum::<f64>() / m;
    let sxx: f64 = tail.iter().map(|p| (p.0.ln() - mx).powi(2)).sum();
    let sxy: f64 = tail.iter().map(|p| (p.0.ln() - mx) * (p.1.ln() - my)).sum();
    let slope = sxy / sxx;
    let mut direction_changes = 0usize;
    let mut last_dir = 0i8;
    for pair in tail.windows(2) {
        let d = pair[1].1 - pair[0].1;
        let dir = if d.abs() <= 1e-12 * pair[0].1.abs() {
            0
        } else if d > 0.0 {
            1
        } else {
            -1
        };
        if dir != 0 {
            if last_dir != 0 && dir != last_dir {
                direction_changes += 1;
            }
            last_dir = dir;
        }
    }
    let tail_min = tail.iter().map(|p| p.1).fold(f64::MAX, f64::min);
    let tail_max = tail.iter().map(|p| p.1).fold(f64::MIN, f64::max);

    let vanished = limsup_estimate <= opts.vanish_ratio * max_ratio;
    let trend =
        if direction_changes >= 3 && slope.abs() <= opts.slope_tol && tail_max > 2.0 * tail_min {
            RatioTrend::Oscillating
        } else if slope < -opts.slope_tol || vanished {
            // Monotone certification must cover the whole tail half.
            if monotone_from.is_some_and(|r1| r1 <= ratios[half].0) {
                RatioTrend::VanishingMonotone
            } else {
                RatioTrend::Vanishing
            }
        } else {
            RatioTrend::BoundedAway
        };
    let supported = match trend {
        RatioTrend::VanishingMonotone => Alternative::Domination,
        RatioTrend::BoundedAway => Alternative::NonSmallness,
        _ => Alternative::Unresolved,
    };
    Ok(RatioDiagnostic {
        ratios,
        trend,
        limsup_estimate,
        monotone_from,
        supported,
        finite_horizon: true,
        horizon: hi,
    })
}

/// A grid region where the quotient of a subsolution by a supersolution
/// looked like an interior local maximum and survived refinement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuotientMaxCandidate {
    pub r_lo: f64,
    pub r_peak: f64,
    pub r_hi: f64,
    /// Discrete second difference at the refined peak (negative at a max).
    pub second_difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotientScanReport {
    pub nodes_scanned: usize,
    pub candidates: Vec<QuotientMaxCandidate>,
    pub interior_max_found: bool,
}

/// Scans `u/v` for interior local maxima, which the quotient of a monotone
/// subsolution by a monotone supersolution (one of them strict) cannot have.
/// Candidate regions are refined 64-fold before being reported.
pub fn quotient_extrema_scan(
    params: &Params,
    u: &dyn RadialFn,
    v: &dyn RadialFn,
    pot: &Potential,
    ann: &crate::family::Annulus,
    grid: &GridSpec,
) -> Result<QuotientScanReport> {
    use crate::family::{classify, Verdict};

    let rep_u = classify(params, u, pot, ann, grid)?;
    if !(matches!(rep_u.verdict, Verdict::Subsolution | Verdict::Solution)
        && rep_u.rho0 <= ann.r0 * (1.0 + 1e-9))
    {
        return Err(Error::Precondition(format!(
            "u must be a subsolution on the whole annulus, got {:?} from rho0 = {}",
            rep_u.verdict, rep_u.rho0
        )));
    }
    let rep_v = classify(params, v, pot, ann, grid)?;
    if !(matches!(rep_v.verdict, Verdict::Supersolution | Verdict::Solution)
        && rep_v.rho0 <= ann.r0 * (1.0 + 1e-9))
    {
        return Err(Error::Precondition(format!(
            "v must be a supersolution on the whole annulus, got {:?} from rho0 = {}",
            rep_v.verdict, rep_v.rho0
        )));
    }
    let strict_u = rep_u.verdict == Verdict::Subsolution && rep_u.strict;
    let strict_v = rep_v.verdict == Verdict::Supersolution && rep_v.strict;
    if !(strict_u || strict_v) {
        return Err(Error::Precondition(
            "neither candidate is strict; the quotient maximum principle needs one".into(),
        ));
    }
    let nodes = grid.sample(ann.r0, ann.r1.min(u.max_radius()).min(v.max_radius()))?;
    for &r in &nodes {
        let (du, dv) = (u.deriv(r), v.deriv(r));
        if du == 0.0
            || dv == 0.0
            || du.signum() != u.deriv(nodes[0]).signum()
            || dv.signum() != v.deriv(nodes[0]).signum()
        {
            return Err(Error::Precondition(format!(
                "strict monotonicity fails at r = {r} (u' = {du}, v' = {dv})"
            )));
        }
    }

    let q: Vec<f64> = nodes.iter().map(|&r| u.eval(r) / v.eval(r)).collect();
    let tol = |a: f64, b: f64| 1e-13 * (a.abs() + b.abs());
    let mut candidates = Vec::new();
    for i in 1..q.len() - 1 {
        let rise = q[i] - q[i - 1];
        let fall = q[i + 1] - q[i];
        if rise > tol(q[i - 1], q[i]) && fall < -tol(q[i], q[i + 1]) {
            // Candidate region: refine before reporting.
            if let Some(c) = refine_max(u, v, nodes[i - 1], nodes[i + 1]) {
                candidates.push(c);
            }
        }
    }
    Ok(QuotientScanReport {
        nodes_scanned: nodes.len(),
        interior_max_found: !candidates.is_empty(),
        candidates,
    })
}

fn refine_max(
    u: &dyn RadialFn,
    v: &dyn RadialFn,
    lo: f64,
    hi: f64,
) -> Option<QuotientMaxCandidate> {
    let nodes = crate::grid::geometric(lo, hi, 64).ok()?;
    let q: Vec<f64> = nodes.iter().map(|&r| u.eval(r) / v.eval(r)).collect();
    let (mut best, mut best_idx) = (f64::MIN, 0);
    for (i, &val) in q.iter().enumerate() {
        if val > best {
            best = val;
            best_idx = i;
        }
    }
    if best_idx == 0 || best_idx == q.len() - 1 {
        return None; // peak migrated to the bracket edge: not interior
    }
    let margin = 1e-13 * best.abs();
    if q[best_idx] - q[0] <= margin || q[best_idx] - q[q.len() - 1] <= margin {
        return None;
    }
    let dd = q[best_idx + 1] - 2.0 * q[best_idx] + q[best_idx - 1];
    Some(QuotientMaxCandidate {
        r_lo: lo,
        r_peak: nodes[best_idx],
        r_hi: hi,
        second_difference: dd,
    })
}
