//! The explicit radial family `u(r) = c r^alpha (log r)^beta (log log r)^tau`,
//! Hardy-type potentials, and residual-sign classification on annuli.
//!
//! The residual of a profile `u` at radius `r` is
//!
//! ```text
//! res(r) = -|u'|^(p-2) L(u) - V u^(p-1),   L(u) = (p-1) u'' + (N-1)/r u',
//! ```
//!
//! negative where `u` behaves like a subsolution and positive where it
//! behaves like a supersolution. All sign decisions use the relative
//! dead-band [`RESIDUAL_DEAD_BAND`]: the residual is a difference of
//! same-order terms and absolute tolerances are meaningless across decades
//! of `r`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::params::Params;
use crate::radial::RadialFn;

/// Scaled residuals with `|res| <= band * scale` count as zero.
pub const RESIDUAL_DEAD_BAND: f64 = 1e-9;

/// Smallest gradient magnitude accepted by the nonlinear factor `|u'|^(p-2)`.
pub const GRADIENT_FLOOR: f64 = 1e-300;

/// `c r^alpha (log r)^beta (log log r)^tau` with amplitude `c > 0`.
///
/// Valid for `r > 1` when a logarithm carries a real exponent and `r > e`
/// when the iterated logarithm does; plain powers extend to all `r > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialFamily {
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub tau: f64,
}

impl RadialFamily {
    pub fn new(c: f64, alpha: f64, beta: f64, tau: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::Domain(format!("amplitude must be > 0, got {c}")));
        }
        if ![alpha, beta, tau].iter().all(|x| x.is_finite()) {
            return Err(Error::Domain("exponents must be finite".into()));
        }
        Ok(Self { c, alpha, beta, tau })
    }

    /// Pure power `r^alpha`.
    pub fn power(alpha: f64) -> Self {
        Self {
            c: 1.0,
            alpha,
            beta: 0.0,
            tau: 0.0,
        }
    }

    /// `r^alpha (log r)^beta (log log r)^tau` with unit amplitude.
    pub fn log_power(alpha: f64, beta: f64, tau: f64) -> Self {
        Self {
            c: 1.0,
            alpha,
            beta,
            tau,
        }
    }

    pub fn with_amplitude(self, c: f64) -> Self {
        Self { c, ..self }
    }

    /// Logarithmic derivative `d log u / d log r = alpha + beta/log r + ...`,
    /// the local decay exponent of the profile.
    pub fn log_slope(&self, r: f64) -> f64 {
        let mut h = self.alpha;
        if self.beta != 0.0 || self.tau != 0.0 {
            let l = r.ln();
            if self.beta != 0.0 {
                h += self.beta / l;
            }
            if self.tau != 0.0 {
                h += self.tau / (l * l.ln());
            }
        }
        h
    }

    /// `r d/dr` of [`Self::log_slope`]; enters the closed form of `u''`.
    fn log_slope_log_deriv(&self, r: f64) -> f64 {
        if self.beta == 0.0 && self.tau == 0.0 {
            return 0.0;
        }
        let l = r.ln();
        let mut out = 0.0;
        if self.beta != 0.0 {
            out -= self.beta / (l * l);
        }
        if self.tau != 0.0 {
            let l2 = l.ln();
            out -= self.tau * (l2 + 1.0) / (l * l * l2 * l2);
        }
        out
    }

}

impl RadialFn for RadialFamily {
    fn eval(&self, r: f64) -> f64 {
        let mut v = self.c * r.powf(self.alpha);
        if self.beta != 0.0 || self.tau != 0.0 {
            let l = r.ln();
            if self.beta != 0.0 {
                v *= l.powf(self.beta);
            }
            if self.tau != 0.0 {
                v *= l.ln().powf(self.tau);
            }
        }
        v
    }

    fn deriv(&self, r: f64) -> f64 {
        self.eval(r) * self.log_slope(r) / r
    }

    fn second_deriv(&self, r: f64) -> f64 {
        let h = self.log_slope(r);
        let rh = self.log_slope_log_deriv(r);
        self.eval(r) * (h * h - h + rh) / (r * r)
    }

    fn min_radius(&self) -> f64 {
        if self.tau != 0.0 {
            std::f64::consts::E
        } else if self.beta != 0.0 {
            1.0
        } else {
            0.0
        }
    }
}

/// Non-negative radial potential `V(r)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Potential {
    Zero,
    /// `lambda / r^p`.
    PureHardy { lambda: f64 },
    /// `C_H / r^p + epsilon / (r^p (log r)^(m_*))`, with `C_H`, `m_*` from
    /// the operator parameters.
    ImprovedHardy { epsilon: f64 },
    /// Piecewise-linear interpolation in `log r` of sampled values; constant
    /// beyond the first and last node.
    Tabulated { radii: Vec<f64>, values: Vec<f64> },
}

impl Potential {
    pub fn pure_hardy(lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::Domain(format!("lambda must be >= 0, got {lambda}")));
        }
        Ok(Self::PureHardy { lambda })
    }

    pub fn improved_hardy(epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon >= 0.0) {
            return Err(Error::Domain(format!(
                "epsilon must be >= 0, got {epsilon}"
            )));
        }
        Ok(Self::ImprovedHardy { epsilon })
    }

    pub fn tabulated(radii: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if radii.len() != values.len() || radii.len() < 2 {
            return Err(Error::Domain(
                "tabulated potential needs >= 2 matching nodes".into(),
            ));
        }
        if !radii.windows(2).all(|w| w[0] > 0.0 && w[0] < w[1]) {
            return Err(Error::Domain(
                "tabulated radii must be positive and strictly increasing".into(),
            ));
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::Domain("tabulated values must be >= 0".into()));
        }
        Ok(Self::Tabulated { radii, values })
    }

    /// Exclusive lower bound where the potential is defined.
    pub fn min_radius(&self) -> f64 {
        match self {
            Self::ImprovedHardy { .. } => 1.0,
            _ => 0.0,
        }
    }

    pub fn eval(&self, params: &Params, r: f64) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::PureHardy { lambda } => lambda / r.powf(params.p),
            Self::ImprovedHardy { epsilon } => {
                let rp = r.powf(params.p);
                let log_term = r.ln().powi(params.m_star() as i32);
                params.c_h() / rp + epsilon / (rp * log_term)
            }
            Self::Tabulated { radii, values } => {
                let lr = r.ln();
                if r <= radii[0] {
                    return values[0];
                }
                if r >= radii[radii.len() - 1] {
                    return values[values.len() - 1];
                }
                let i = radii.partition_point(|x| *x <= r) - 1;
                let (a, b) = (radii[i].ln(), radii[i + 1].ln());
                let t = (lr - a) / (b - a);
                values[i] * (1.0 - t) + values[i + 1] * t
            }
        }
    }
}

/// The radial annulus `{ r0 < |x| < r1 }`; `r1 = INFINITY` is the exterior
/// domain case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Annulus {
    pub r0: f64,
    pub r1: f64,
}

impl Annulus {
    pub fn new(r0: f64, r1: f64) -> Result<Self> {
        if !(r0.is_finite() && r0 > 0.0 && r1 > r0) {
            return Err(Error::Domain(format!(
                "annulus needs 0 < r0 < r1, got [{r0}, {r1}]"
            )));
        }
        Ok(Self { r0, r1 })
    }

    pub fn exterior(r0: f64) -> Result<Self> {
        Self::new(r0, f64::INFINITY)
    }
}

/// `sign(x) |x|^e`; the odd power map used for `|u|^(p-2) u` terms.
#[inline]
pub(crate) fn signed_pow(x: f64, e: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    x.signum() * x.abs().powf(e)
}

/// The linear radial operator `L(u) = (p-1) u'' + (N-1)/r u'`.
pub fn radial_l(params: &Params, u: &dyn RadialFn, r: f64) -> Result<f64> {
    if !(r.is_finite() && r > u.min_radius() && r <= u.max_radius()) {
        return Err(Error::Domain(format!(
            "r = {r} outside the profile domain ({}, {}]",
            u.min_radius(),
            u.max_radius()
        )));
    }
    Ok((params.p - 1.0) * u.second_deriv(r) + (params.n_f64() - 1.0) / r * u.deriv(r))
}

/// One evaluated residual node, with the positive scale used for dead-band
/// decisions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualSample {
    pub r: f64,
    pub u: f64,
    pub du: f64,
    pub residual: f64,
    pub scale: f64,
    pub scaled: f64,
}

/// `-|u'|^(p-2) L(u) - V u^(p-1)` together with its positive scale.
///
/// The scale sums the magnitudes of the diffusion terms before their signed
/// combination, `|u'|^(p-2) ((p-1)|u''| + (N-1)/r |u'|) + V |u|^(p-1)`, so
/// that exact members whose linear part cancels to roundoff still register
/// as zero residual rather than as sign noise.
pub fn residual_sample(
    params: &Params,
    u: &dyn RadialFn,
    pot: &Potential,
    r: f64,
) -> Result<ResidualSample> {
    if r <= pot.min_radius() {
        return Err(Error::Domain(format!(
            "r = {r} at or below the potential domain bound {}",
            pot.min_radius()
        )));
    }
    let value = u.eval(r);
    let du = u.deriv(r);
    let lu = radial_l(params, u, r)?;
    let grad_factor = if params.p == 2.0 {
        // |u'|^0 is taken as 1 even at u' = 0; the operator is linear here.
        1.0
    } else {
        if params.p < 2.0 && du.abs() < GRADIENT_FLOOR {
            // Negative exponent: the factor genuinely blows up.
            return Err(Error::DegenerateGradient {
                r,
                magnitude: du.abs(),
            });
        }
        du.abs().powf(params.p - 2.0)
    };
    let diffusion = grad_factor * lu;
    let reaction = pot.eval(params, r) * signed_pow(value, params.p - 1.0);
    let residual = -diffusion - reaction;
    let diffusion_magnitude = grad_factor
        * ((params.p - 1.0) * u.second_deriv(r).abs()
            + (params.n_f64() - 1.0) / r * du.abs());
    let scale = diffusion_magnitude + reaction.abs() + GRADIENT_FLOOR;
    Ok(ResidualSample {
        r,
        u: value,
        du,
        residual,
        scale,
        scaled: residual / scale,
    })
}

/// Convenience wrapper returning only the residual value.
pub fn residual(params: &Params, u: &dyn RadialFn, pot: &Potential, r: f64) -> Result<f64> {
    Ok(residual_sample(params, u, pot, r)?.residual)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Subsolution,
    Supersolution,
    Solution,
    /// The residual vanishes beyond `rho0` but took both signs before it.
    Neither,
    /// Both signs persist beyond every sampled candidate threshold.
    MixedSign,
}

impl Verdict {
    /// A solution satisfies both inequalities, so it confirms either
    /// one-sided expectation.
    pub fn satisfies(&self, expected: Verdict) -> bool {
        *self == expected || *self == Verdict::Solution
    }
}

/// Outcome of sampling the residual sign over an annulus grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub verdict: Verdict,
    /// First grid node from which the residual sign is uniform;
    /// `INFINITY` when no such suffix exists (`MixedSign`).
    pub rho0: f64,
    /// True when every suffix residual stays beyond the dead-band.
    pub strict: bool,
    pub evidence: Vec<ResidualSample>,
}

/// Samples the residual of `u` against `pot` on a geometric grid over the
/// annulus and reports the eventual sign.
///
/// The verdict describes the largest grid suffix with a uniform sign (within
/// the dead-band); `rho0` is the first node of that suffix, so a profile that
/// is, say, a supersolution only far out still classifies `Supersolution`
/// with a large `rho0`. A suffix shorter than a sixteenth of the grid is not
/// accepted as evidence of an eventual sign and reports `MixedSign` instead.
pub fn classify(
    params: &Params,
    u: &dyn RadialFn,
    pot: &Potential,
    ann: &Annulus,
    grid: &GridSpec,
) -> Result<ClassificationReport> {
    if grid.nodes < 64 {
        return Err(Error::Domain(format!(
            "classification grid needs >= 64 nodes, got {}",
            grid.nodes
        )));
    }
    if ann.r0 <= u.min_radius() {
        return Err(Error::Domain(format!(
            "annulus starts at {} but the profile needs r > {}",
            ann.r0,
            u.min_radius()
        )));
    }
    if !ann.r1.is_finite() {
        return Err(Error::Domain(
            "classification needs a finite outer radius; cap the annulus at a horizon".into(),
        ));
    }
    let hi = ann.r1.min(u.max_radius());
    let nodes = grid.sample(ann.r0, hi)?;
    let evidence: Vec<ResidualSample> = nodes
        .iter()
        .map(|&r| residual_sample(params, u, pot, r))
        .collect::<Result<_>>()?;
    Ok(classify_samples(evidence))
}

/// Sign-suffix analysis over precomputed residual samples.
pub fn classify_samples(evidence: Vec<ResidualSample>) -> ClassificationReport {
    let n = evidence.len();
    let sign = |s: &ResidualSample| -> i8 {
        if s.residual.abs() <= RESIDUAL_DEAD_BAND * s.scale {
            0
        } else if s.residual > 0.0 {
            1
        } else {
            -1
        }
    };
    let signs: Vec<i8> = evidence.iter().map(sign).collect();

    if signs.iter().all(|&s| s == 0) {
        return ClassificationReport {
            verdict: Verdict::Solution,
            rho0: first_r(&evidence, 0),
            strict: false,
            evidence,
        };
    }

    let min_suffix = (n / 16).max(2);

    // An exact-solution tail after behavior that stayed mixed right up to
    // it: neither a sub- nor a supersolution on the annulus, a solution past
    // rho0. Without the mixed prefix the tail merges into the signed suffix.
    let zeros_from = signs.len() - signs.iter().rev().take_while(|&&s| s == 0).count();
    if n - zeros_from >= min_suffix && zeros_from > 0 {
        let prefix = &signs[..zeros_from];
        let (pstart, _, _) = uniform_suffix(prefix);
        if pstart + 2 > prefix.len() && prefix.contains(&1) && prefix.contains(&-1) {
            return ClassificationReport {
                verdict: Verdict::Neither,
                rho0: first_r(&evidence, zeros_from),
                strict: false,
                evidence,
            };
        }
    }

    let (start, has_pos, _) = uniform_suffix(&signs);
    if start + min_suffix > n {
        // Conflicts persist too close to the final node for the suffix to
        // count as evidence.
        return ClassificationReport {
            verdict: Verdict::MixedSign,
            rho0: f64::INFINITY,
            strict: false,
            evidence,
        };
    }
    let strict = signs[start..].iter().all(|&s| s != 0);
    let verdict = if has_pos {
        Verdict::Supersolution
    } else {
        Verdict::Subsolution
    };
    ClassificationReport {
        verdict,
        rho0: first_r(&evidence, start),
        strict,
        evidence,
    }
}

/// Largest suffix without strictly opposite signs; dead-band zeros are
/// compatible with either side. Returns the start index and which strict
/// signs the suffix holds.
fn uniform_suffix(signs: &[i8]) -> (usize, bool, bool) {
    let mut start = signs.len().saturating_sub(1);
    let (mut has_pos, mut has_neg) = (false, false);
    for i in (0..signs.len()).rev() {
        let s = signs[i];
        if (s > 0 && has_neg) || (s < 0 && has_pos) {
            break;
        }
        has_pos |= s > 0;
        has_neg |= s < 0;
        start = i;
    }
    (start, has_pos, has_neg)
}

fn first_r(evidence: &[ResidualSample], idx: usize) -> f64 {
    evidence.get(idx).map_or(f64::INFINITY, |s| s.r)
}
