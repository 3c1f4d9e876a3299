//! Bracketed scalar root finding on monotone branches.

/// Solves `f(x) = 0` on `[lo, hi]` assuming `f(lo)` and `f(hi)` have opposite
/// signs (either may be zero). Secant steps are taken when they fall inside
/// the current bracket and shrink it; otherwise the step falls back to
/// bisection, so the bracket is preserved at every iteration.
///
/// Converges to the width limit `4 eps (1 + |x|)` or an exact zero of `f`.
pub fn bracketed_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> f64 {
    debug_assert!(lo <= hi);
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    debug_assert!(
        fa.signum() != fb.signum(),
        "root not bracketed: f({a}) = {fa}, f({b}) = {fb}"
    );

    for _ in 0..200 {
        let width = b - a;
        if width <= 4.0 * f64::EPSILON * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        // Secant candidate; reject it if it leaves the bracket interior.
        let mut x = if fb != fa {
            a - fa * (b - a) / (fb - fa)
        } else {
            f64::NAN
        };
        let margin = 0.01 * width;
        if !(x > a + margin && x < b - margin) {
            x = 0.5 * (a + b);
        }
        let fx = f(x);
        if fx == 0.0 {
            return x;
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
    }
    // Midpoint of the final bracket; pick the endpoint with smaller residual.
    if fa.abs() <= fb.abs() {
        a
    } else {
        b
    }
}
