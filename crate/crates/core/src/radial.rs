//! Radial function abstraction shared by closed-form families and
//! numerically integrated trajectories.

/// A positive radial profile with two derivatives, viewed as a function of
/// the radius `r = |x|`.
pub trait RadialFn {
    fn eval(&self, r: f64) -> f64;
    fn deriv(&self, r: f64) -> f64;
    fn second_deriv(&self, r: f64) -> f64;

    /// Exclusive lower bound of the validity domain.
    fn min_radius(&self) -> f64 {
        0.0
    }

    /// Inclusive upper bound of the validity domain; `INFINITY` when the
    /// profile extends to arbitrarily large radii.
    fn max_radius(&self) -> f64 {
        f64::INFINITY
    }
}

/// `factor * inner`, used when a comparison pair needs one member rescaled.
pub struct Scaled<'a> {
    pub factor: f64,
    pub inner: &'a dyn RadialFn,
}

impl RadialFn for Scaled<'_> {
    fn eval(&self, r: f64) -> f64 {
        self.factor * self.inner.eval(r)
    }
    fn deriv(&self, r: f64) -> f64 {
        self.factor * self.inner.deriv(r)
    }
    fn second_deriv(&self, r: f64) -> f64 {
        self.factor * self.inner.second_deriv(r)
    }
    fn min_radius(&self) -> f64 {
        self.inner.min_radius()
    }
    fn max_radius(&self) -> f64 {
        self.inner.max_radius()
    }
}
