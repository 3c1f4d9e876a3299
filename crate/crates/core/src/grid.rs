//! Geometric radius grids (uniform in log r).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sampling request for residual scans and ratio diagnostics.
///
/// Grids are geometric: uniform in `log r`, which matches families that are
/// polynomial in `(log r, log log r)` after the substitution `t = log r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Number of nodes; classification requires at least 64.
    pub nodes: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { nodes: 512 }
    }
}

impl GridSpec {
    pub fn new(nodes: usize) -> Self {
        Self { nodes }
    }

    /// Geometric grid on `[lo, hi]`, endpoints included.
    pub fn sample(&self, lo: f64, hi: f64) -> Result<Vec<f64>> {
        geometric(lo, hi, self.nodes)
    }
}

/// `n` geometrically spaced points spanning `[lo, hi]`.
pub fn geometric(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite()) || lo <= 0.0 || hi <= lo {
        return Err(Error::Domain(format!(
            "geometric grid needs 0 < lo < hi finite, got [{lo}, {hi}]"
        )));
    }
    if n < 2 {
        return Err(Error::Domain(format!("grid needs >= 2 nodes, got {n}")));
    }
    let (llo, lhi) = (lo.ln(), hi.ln());
    let step = (lhi - llo) / (n - 1) as f64;
    let mut out: Vec<f64> = (0..n).map(|i| (llo + step * i as f64).exp()).collect();
    // Pin the endpoints exactly; exp/ln round-trips drift in the last ulp.
    out[0] = lo;
    out[n - 1] = hi;
    Ok(out)
}
