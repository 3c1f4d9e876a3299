//! Classification sweep over the log/log-log family against the improved
//! Hardy potential, one representative per expected-sign cell.
//!
//! For each coupling strength `epsilon` the family
//! `u = r^((p-N)/p) (log r)^beta (log log r)^tau` partitions into subsolution
//! and supersolution ranges of `(beta, tau)` delimited by the roots
//! `beta_eps <= bar beta_eps`. The suite instantiates one interior
//! representative per cell (midpoints of open ranges, endpoint +- a tenth of
//! the range width for half-open ones), classifies it on `[r0, r_max]`, and
//! confirms the cell when the verdict matches with a detected sign threshold
//! `rho0 <` [`RHO0_CONFIRM_BOUND`].

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exponents::improved_roots;
use crate::family::{classify, Annulus, Potential, RadialFamily, Verdict};
use crate::grid::GridSpec;
use crate::params::Params;

/// A cell only counts as confirmed when the uniform-sign threshold sits
/// below this radius; it makes "sufficiently large r0" falsifiable.
pub const RHO0_CONFIRM_BOUND: f64 = 1e4;

/// Default inner radius of the classification annulus; comfortably above
/// `e`, where the log-log factor turns positive.
pub const DEFAULT_R0: f64 = 8.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Cell {
    pub label: String,
    pub beta: f64,
    pub tau: f64,
    /// Expected verdict; `None` marks an empirical-only probe with no
    /// stated expectation.
    pub expected: Option<Verdict>,
    /// A second reading of a cell that lists alternatives; reported with its
    /// own confirmation flag but not gating the row.
    pub supplementary: bool,
    pub verdict: Option<Verdict>,
    pub rho0: Option<f64>,
    pub strict: Option<bool>,
    /// `None` when the cell is empirical-only or its evaluation errored.
    pub confirmed: Option<bool>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Report {
    pub params: Params,
    pub epsilon: f64,
    pub beta_lower: f64,
    pub beta_upper: f64,
    pub row: String,
    pub r0: f64,
    pub r_max: f64,
    pub cells: Vec<Table1Cell>,
    pub all_confirmed: bool,
}

struct CellSpec {
    label: &'static str,
    beta: f64,
    tau: f64,
    expected: Option<Verdict>,
    supplementary: bool,
}

impl CellSpec {
    fn new(label: &'static str, beta: f64, tau: f64, expected: Option<Verdict>) -> Self {
        Self {
            label,
            beta,
            tau,
            expected,
            supplementary: false,
        }
    }

    fn supplementary(label: &'static str, beta: f64, tau: f64, expected: Option<Verdict>) -> Self {
        Self {
            label,
            beta,
            tau,
            expected,
            supplementary: true,
        }
    }
}

fn cell_specs(params: &Params, epsilon: f64, lo: f64, hi: f64) -> (String, Vec<CellSpec>) {
    use Verdict::{Subsolution as Sub, Supersolution as Super};
    let p = params.p;
    let spread = hi - lo;
    let mid = 0.5 * (lo + hi);

    if params.is_dimension_critical() {
        // Half-infinite beta ranges take a quarter of the reference width:
        // a tenth leaves the deciding term under the slowly decaying
        // log-corrections for the larger p.
        let delta = (0.25 * if spread > 1e-9 { spread } else { lo.max(0.5) })
            .max(0.5 / params.n_f64());
        let mut cells = vec![
            CellSpec::new("beta below beta_eps, tau = 0", lo - delta, 0.0, Some(Sub)),
            CellSpec::new(
                "beta in [beta_eps, beta_bar_eps], tau = 0",
                mid,
                0.0,
                Some(Super),
            ),
            CellSpec::new("beta above beta_bar_eps, tau = 0", hi + delta, 0.0, Some(Sub)),
        ];
        if spread <= 1e-9 {
            // Critical coupling: the log-log tilt keeps a supersolution.
            cells.push(CellSpec::new(
                "beta = beta_eps, tau > 0 (critical)",
                lo,
                0.5,
                Some(Super),
            ));
        }
        return ("p = N".into(), cells);
    }

    if epsilon == 0.0 {
        let delta = (0.25 * spread).max(0.5 / p);
        let cells = vec![
            CellSpec::new("beta <= 0, tau = 0", -delta, 0.0, Some(Sub)),
            CellSpec::new("beta in [0, 2/p), tau = 0", mid, 0.0, Some(Super)),
            CellSpec::new("beta > 2/p, tau = 0", hi + delta, 0.0, Some(Sub)),
            CellSpec::new("beta = 2/p, tau > 0", hi, 0.5, Some(Sub)),
        ];
        return ("p != N, eps = 0".into(), cells);
    }

    if spread > 1e-9 {
        let delta = (0.25 * spread).max(0.5 / p);
        let cells = vec![
            CellSpec::new("beta < beta_eps, tau = 0", lo - delta, 0.0, Some(Sub)),
            CellSpec::new("beta = beta_eps, tau < 0", lo, -0.5, Some(Sub)),
            CellSpec::new(
                "beta in (beta_eps, beta_bar_eps), tau = 0",
                mid,
                0.0,
                Some(Super),
            ),
            // The table lists this box as "beta = beta_eps, tau > 0 or
            // beta = beta_bar_eps, tau < 0"; the first alternative is the
            // representative, the second is probed below.
            CellSpec::new("beta = beta_eps, tau > 0", lo, 0.5, Some(Super)),
            CellSpec::supplementary(
                "beta = beta_bar_eps, tau < 0 (second reading of the edge box)",
                hi,
                -0.25,
                Some(Super),
            ),
            CellSpec::new("beta > beta_bar_eps, tau = 0", hi + delta, 0.0, Some(Sub)),
            CellSpec::new("beta = beta_bar_eps, tau > 0", hi, 0.5, Some(Sub)),
        ];
        return ("p != N, 0 < eps < C_*".into(), cells);
    }

    // Critical coupling, p != N: single pivot beta = 1/p. The coupling map
    // is flat at the pivot, so the residual margin is only quadratic in the
    // offset; a full 1/p on either side keeps the sign detectable, and the
    // tau probe sits at three times the 2/p threshold for the same reason.
    let delta = 1.0 / p;
    let cells = vec![
        CellSpec::new("beta < 1/p, tau = 0", lo - delta, 0.0, Some(Sub)),
        CellSpec::new("beta = 1/p, tau < 0", lo, -0.5, Some(Sub)),
        CellSpec::new("beta = 1/p, tau in (0, 2/p)", lo, 1.0 / p, Some(Super)),
        CellSpec::new("beta > 1/p, tau = 0", lo + delta, 0.0, Some(Sub)),
        CellSpec::new("beta = 1/p, tau > 2/p", lo, 6.0 / p, Some(Sub)),
        CellSpec::new("beta = 1/p, tau = 0 (no stated expectation)", lo, 0.0, None),
    ];
    ("p != N, eps = C_*".into(), cells)
}

/// Classifies every cell representative for one coupling strength.
pub fn table1_row(
    params: &Params,
    epsilon: f64,
    r0: f64,
    r_max: f64,
    grid: &GridSpec,
) -> Result<Table1Report> {
    let roots = improved_roots(params, epsilon)?;
    let (row, specs) = cell_specs(params, epsilon, roots.lower, roots.upper);
    let pot = Potential::improved_hardy(epsilon)?;
    let ann = Annulus::new(r0, r_max)?;
    let alpha = params.critical_alpha();

    let mut cells = Vec::with_capacity(specs.len());
    let mut all_confirmed = true;
    for spec in specs {
        let family = RadialFamily::log_power(alpha, spec.beta, spec.tau);
        let mut cell = Table1Cell {
            label: spec.label.to_string(),
            beta: spec.beta,
            tau: spec.tau,
            expected: spec.expected,
            supplementary: spec.supplementary,
            verdict: None,
            rho0: None,
            strict: None,
            confirmed: None,
            error: None,
        };
        // Per-cell failures are recorded, not propagated.
        match classify(params, &family, &pot, &ann, grid) {
            Ok(rep) => {
                cell.verdict = Some(rep.verdict);
                cell.rho0 = Some(rep.rho0);
                cell.strict = Some(rep.strict);
                if let Some(expected) = spec.expected {
                    let ok = rep.verdict.satisfies(expected) && rep.rho0 < RHO0_CONFIRM_BOUND;
                    cell.confirmed = Some(ok);
                    if !spec.supplementary {
                        all_confirmed &= ok;
                    }
                }
            }
            Err(e) => {
                cell.error = Some(e.to_string());
                if spec.expected.is_some() {
                    cell.confirmed = Some(false);
                    if !spec.supplementary {
                        all_confirmed = false;
                    }
                }
            }
        }
        cells.push(cell);
    }
    Ok(Table1Report {
        params: *params,
        epsilon,
        beta_lower: roots.lower,
        beta_upper: roots.upper,
        row,
        r0,
        r_max,
        cells,
        all_confirmed,
    })
}

/// Runs [`table1_row`] for each coupling in `epsilons` with default annulus
/// and grid choices.
pub fn table1_suite(params: &Params, epsilons: &[f64], r_max: f64) -> Result<Vec<Table1Report>> {
    epsilons
        .iter()
        .map(|&eps| table1_row(params, eps, DEFAULT_R0, r_max, &GridSpec::default()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_confirms_representative_rows() {
        // One generic row per regime; the acceptance suite covers the full
        // (p, N) x epsilon sweep.
        let pr = Params::new(3.0, 5).unwrap();
        let cs = pr.c_star();
        for eps in [0.0, 0.5 * cs, cs] {
            let report = table1_row(&pr, eps, DEFAULT_R0, 1e6, &GridSpec::default()).unwrap();
            for cell in &report.cells {
                if cell.expected.is_some() && !cell.supplementary {
                    assert_eq!(
                        cell.confirmed,
                        Some(true),
                        "eps={eps}: cell '{}' got {:?} (rho0 {:?})",
                        cell.label,
                        cell.verdict,
                        cell.rho0
                    );
                }
            }
            assert!(report.all_confirmed);
        }
    }

    #[test]
    fn dimension_critical_row() {
        let pr = Params::new(3.0, 3).unwrap();
        let cs = pr.c_star();
        for eps in [0.0, 0.5 * cs, cs] {
            let report = table1_row(&pr, eps, DEFAULT_R0, 1e6, &GridSpec::default()).unwrap();
            assert!(
                report.all_confirmed,
                "eps={eps}: {:#?}",
                report
                    .cells
                    .iter()
                    .map(|c| (c.label.clone(), c.verdict, c.rho0, c.confirmed))
                    .collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn empirical_probe_reported_without_expectation() {
        let pr = Params::new(2.0, 3).unwrap();
        let report =
            table1_row(&pr, pr.c_star(), DEFAULT_R0, 1e6, &GridSpec::default()).unwrap();
        let probe = report
            .cells
            .iter()
            .find(|c| c.expected.is_none())
            .expect("critical row carries the empirical probe");
        assert!(probe.verdict.is_some());
        assert_eq!(probe.confirmed, None);
    }
}
