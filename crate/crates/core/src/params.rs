//! Operator and dimension parameters shared by every module.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The pair `(p, N)` defining the p-Laplace operator in dimension `N`,
/// together with the derived constants used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    /// Exponent of the p-Laplacian, `p > 1`.
    pub p: f64,
    /// Space dimension, `N >= 2`.
    pub n: u32,
}

/// Critical constants of the Hardy and improved-Hardy potentials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardyConstants {
    /// Critical Hardy constant `C_H = |(p-N)/p|^p`; zero exactly when `p = N`.
    pub c_h: f64,
    /// Critical strength of the logarithmic correction term.
    pub c_star: f64,
    /// Exponent of the logarithm in the correction: 2 when `p != N`, `N` when `p = N`.
    pub m_star: u32,
}

impl Params {
    pub fn new(p: f64, n: u32) -> Result<Self> {
        if !p.is_finite() || p <= 1.0 {
            return Err(Error::Domain(format!("p must be finite and > 1, got {p}")));
        }
        if n < 2 {
            return Err(Error::Domain(format!("N must be >= 2, got {n}")));
        }
        Ok(Self { p, n })
    }

    /// Rejects `p < 2`; the superposition machinery needs `p >= 2`.
    pub fn require_p_at_least_two(&self) -> Result<()> {
        if self.p < 2.0 {
            return Err(Error::Precondition(format!(
                "operation requires p >= 2, got p = {}",
                self.p
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn n_f64(&self) -> f64 {
        f64::from(self.n)
    }

    /// True exactly when `p` equals the dimension: the branch with `C_H = 0`
    /// and `m_* = N`. Exact comparison on purpose; `p` near but not equal to
    /// `N` belongs to the generic branch.
    #[inline]
    pub fn is_dimension_critical(&self) -> bool {
        self.p == self.n_f64()
    }

    /// `(p - N) / p`, the argmax of `alpha -> lambda_alpha` and the power
    /// exponent of the borderline radial family.
    #[inline]
    pub fn critical_alpha(&self) -> f64 {
        (self.p - self.n_f64()) / self.p
    }

    /// `(p - N) / (p - 1)`, the non-trivial zero of `alpha -> lambda_alpha`.
    #[inline]
    pub fn harmonic_alpha(&self) -> f64 {
        (self.p - self.n_f64()) / (self.p - 1.0)
    }

    /// Critical Hardy constant `C_H = |(p-N)/p|^p`.
    pub fn c_h(&self) -> f64 {
        if self.is_dimension_critical() {
            0.0
        } else {
            self.critical_alpha().abs().powf(self.p)
        }
    }

    /// Critical strength of the improved-Hardy correction:
    /// `(p-1)/(2p) * |(p-N)/p|^(p-2)` for `p != N`, `((N-1)/N)^N` for `p = N`.
    pub fn c_star(&self) -> f64 {
        let n = self.n_f64();
        if self.is_dimension_critical() {
            ((n - 1.0) / n).powi(self.n as i32)
        } else {
            (self.p - 1.0) / (2.0 * self.p) * self.critical_alpha().abs().powf(self.p - 2.0)
        }
    }

    /// Logarithm exponent of the improved-Hardy correction term.
    #[inline]
    pub fn m_star(&self) -> u32 {
        if self.is_dimension_critical() {
            self.n
        } else {
            2
        }
    }

    pub fn hardy_constants(&self) -> HardyConstants {
        HardyConstants {
            c_h: self.c_h(),
            c_star: self.c_star(),
            m_star: self.m_star(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_inputs() {
        assert!(Params::new(1.0, 3).is_err());
        assert!(Params::new(f64::NAN, 3).is_err());
        assert!(Params::new(2.0, 1).is_err());
        assert!(Params::new(2.0, 2).is_ok());
    }

    #[test]
    fn c_h_closed_forms() {
        let p = Params::new(2.0, 3).unwrap();
        assert_eq!(p.c_h(), 0.25);
        let p = Params::new(3.0, 3).unwrap();
        assert_eq!(p.c_h(), 0.0);
        assert!(p.is_dimension_critical());
        // p = 4, N = 2: C_H = (1/2)^4
        let p = Params::new(4.0, 2).unwrap();
        assert!((p.c_h() - 0.0625).abs() < 1e-15);
    }

    #[test]
    fn c_star_branches() {
        // p != N: (p-1)/(2p) |(p-N)/p|^{p-2}
        let p = Params::new(2.0, 3).unwrap();
        assert_eq!(p.c_star(), 0.25);
        assert_eq!(p.m_star(), 2);
        // p = N = 3: (2/3)^3
        let p = Params::new(3.0, 3).unwrap();
        assert!((p.c_star() - 8.0 / 27.0).abs() < 1e-16);
        assert_eq!(p.m_star(), 3);
        // p = N = 2: (1/2)^2
        let p = Params::new(2.0, 2).unwrap();
        assert_eq!(p.c_star(), 0.25);
        assert_eq!(p.m_star(), 2);
    }
}
