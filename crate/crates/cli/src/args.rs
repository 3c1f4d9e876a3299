//! Command-line surface: subcommands, shared flags, and the small grammars
//! for potentials and radial family members.

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use plhardy::{Potential, RadialFamily};

#[derive(Debug, Parser)]
#[command(
    name = "plhardy",
    about = "Critical exponents, residual classification, superposition checks and \
             asymptotic diagnostics for radial p-Laplace equations with Hardy-type potentials",
    args_override_self = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Seed recorded in every report and used by randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Output format.
    #[arg(long = "out", global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<String>,

    /// Omit the timestamp so identical runs emit identical bytes.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Critical constants and exponent roots for the pair (p, N).
    Exponents(ExponentsArgs),
    /// Residual-sign classification of a family member on an annulus.
    Classify(ClassifyArgs),
    /// Classification sweep over the expected-sign table of the log/log-log
    /// family.
    Table1(Table1Args),
    /// Residual of a family member at one radius or on a grid.
    Residual(ResidualArgs),
    /// Randomized verification of the convexity-gap contracts.
    VerifyInequality(VerifyInequalityArgs),
    /// Difference-of-sub/supersolution residual check on a constructed or
    /// supplied pair.
    VerifySuperposition(VerifySuperpositionArgs),
    /// Adaptive integration of a radial trajectory in flux form.
    Integrate(IntegrateArgs),
    /// Ratio trend diagnostic for a pair of radial profiles.
    PlCheck(PlCheckArgs),
    /// Two-point boundary value problem on a finite annulus by shooting.
    SolveBvp(SolveBvpArgs),
    /// Pointwise ordering check of a subsolution below a supersolution.
    Compare(CompareArgs),
}

#[derive(Debug, clap::Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct ExponentsArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long = "N")]
    pub n: u32,
    /// Hardy coupling; emits the power-exponent root pair when given.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Logarithmic correction strength; emits the log-exponent root pair.
    #[arg(long)]
    pub epsilon: Option<f64>,
}

#[derive(Debug, clap::Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long = "N")]
    pub n: u32,
    /// Potential: zero | hardy:<lambda> | improved:<epsilon> | table:<csv>.
    #[arg(long)]
    pub potential: String,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub tau: f64,
    /// Amplitude of the family member.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long)]
    pub r0: f64,
    #[arg(long)]
    pub rmax: f64,
    #[arg(long, default_value_t = 512)]
    pub nodes: usize,
}

#[derive(Debug, clap::Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct Table1Args {
    #[arg(long)]
    pub p: f64,
    #[arg(long = "N")]
    pub n: u32,
    /// Comma-separated couplings: numbers or the keywords 0, mid, cstar.
    #[arg(long = "eps-list", default_value = "0,mid,cstar")]
    pub eps_list: String,
    #[arg(long, default_value_t = 1e6)]
    pub rmax: f64,
}

#[derive(Debug, clap::Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct ResidualArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long = "N")]
    pub n: u32,
    #[arg(long)]
    pub potential: String,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub tau: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Single evaluation radius; mutually exclusive with --r0/--rmax.
    #[arg(long, conflicts_with_all = ["r0", "rmax"])]
    pub r: Option<f64>,
    #[arg(long, requires = "rmax")]
    pub r0: Option<f64>,
    #[arg(long, requires = "r0")]
    pub rmax: Option<f64>,
    #[arg(long, default_value_t = 128)]
    pub nodes: usize,
}

#[derive(Debug, clap::Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct VerifyInequalityArgs {
    /// Convexity exponent; q >= 1 checks the upper bound, q <= 1 the lower.
    #[arg(long)]
    pub q: f64,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Magnitude span of the draws, in binades around one.
    #[arg(long, default_value_t = 60.0)]
    pub span: f64,
}

#[derive(Debug, clap::Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct VerifySuperpositionArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long = "N")]
    pub n: u32,
    #[arg(long)]
    pub potential: String,
    /// Explicit pair "u=<family>,v=<family>" with family =
    /// alpha[:beta[:tau[:amp]]]; omitted pairs are built from the potential's
    /// root catalog.
    #[arg(long = "pair-spec", allow_hyphen_values = true)]
    pub pair_spec: Option<String>,
    /// Interpolation fraction between the exponent roots for the built pair.
    #[arg(long, default_value_t = 0.5)]
    pub beta_frac: f64,
    #[arg(long, default_value_t = 2.0)]
    pub r0: f64,
    #[arg(long, default_value_t = 1e4)]
    pub rmax: f64,
    #[arg(long, default_value_t = 256)]
    pub nodes: usize,
    /// Randomized trials instead of a single constructed pair.
    #[arg(long)]
    pub trials: Option<usize>,
}

#[derive(Debug, clap::Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct IntegrateArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long = "N")]
    pub n: u32,
    #[arg(long)]
    pub potential: String,
    #[arg(long)]
    pub r0: f64,
    #[arg(long)]
    pub phi0: f64,
    #[arg(long)]
    pub dphi0: f64,
    #[arg(long)]
    pub rmax: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, clap::Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct PlCheckArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long = "N")]
    pub n: u32,
    /// Numerator profile, alpha[:beta[:tau[:amp]]].
    #[arg(long, allow_hyphen_values = true)]
    pub u: String,
    /// Denominator profile (a positive supersolution candidate).
    #[arg(long, allow_hyphen_values = true)]
    pub w: String,
    #[arg(long, default_value_t = 2.0)]
    pub r0: f64,
    /// Sampling horizon standing in for the outer boundary.
    #[arg(long, default_value_t = 1e8)]
    pub rmax: f64,
    #[arg(long, default_value_t = 512)]
    pub nodes: usize,
}

#[derive(Debug, clap::Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct SolveBvpArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long = "N")]
    pub n: u32,
    #[arg(long)]
    pub potential: String,
    #[arg(long)]
    pub r0: f64,
    #[arg(long = "R0")]
    pub r1: f64,
    #[arg(long)]
    pub inner: f64,
    #[arg(long)]
    pub outer: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, clap::Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct CompareArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long = "N")]
    pub n: u32,
    #[arg(long)]
    pub potential: String,
    /// Subsolution candidate, alpha[:beta[:tau[:amp]]].
    #[arg(long, allow_hyphen_values = true)]
    pub u: String,
    /// Supersolution candidate.
    #[arg(long, allow_hyphen_values = true)]
    pub v: String,
    #[arg(long)]
    pub r0: f64,
    #[arg(long = "R0")]
    pub r1: f64,
    #[arg(long, default_value_t = 256)]
    pub nodes: usize,
    /// Optional condition-star certificate, alpha[:beta[:tau[:amp]]];
    /// auto-detected from the catalog when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub certificate: Option<String>,
}

/// `zero`, `hardy:<lambda>`, `improved:<epsilon>`, or `table:<csv path>`
/// with two comma-separated columns r,V per line.
pub fn parse_potential(spec: &str) -> Result<Potential, String> {
    let spec = spec.trim();
    if spec.eq_ignore_ascii_case("zero") {
        return Ok(Potential::Zero);
    }
    if let Some(rest) = spec.strip_prefix("hardy:") {
        let lambda: f64 = rest.parse().map_err(|e| format!("bad lambda '{rest}': {e}"))?;
        return Potential::pure_hardy(lambda).map_err(|e| e.to_string());
    }
    if let Some(rest) = spec.strip_prefix("improved:") {
        let eps: f64 = rest.parse().map_err(|e| format!("bad epsilon '{rest}': {e}"))?;
        return Potential::improved_hardy(eps).map_err(|e| e.to_string());
    }
    if let Some(path) = spec.strip_prefix("table:") {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
        let mut radii = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (r, v) = line
                .split_once(',')
                .ok_or_else(|| format!("{path}:{}: expected 'r,V'", lineno + 1))?;
            radii.push(
                r.trim()
                    .parse::<f64>()
                    .map_err(|e| format!("{path}:{}: {e}", lineno + 1))?,
            );
            values.push(
                v.trim()
                    .parse::<f64>()
                    .map_err(|e| format!("{path}:{}: {e}", lineno + 1))?,
            );
        }
        return Potential::tabulated(radii, values).map_err(|e| e.to_string());
    }
    Err(format!(
        "unknown potential '{spec}' (expected zero | hardy:<l> | improved:<e> | table:<file>)"
    ))
}

/// `alpha[:beta[:tau[:amp]]]`, e.g. `-0.75` or `-0.5:0.25:0:1.3`.
pub fn parse_family(spec: &str) -> Result<RadialFamily, String> {
    let parts: Vec<&str> = spec.trim().split(':').collect();
    if parts.is_empty() || parts.len() > 4 {
        return Err(format!("bad family spec '{spec}'"));
    }
    let num = |i: usize, default: f64| -> Result<f64, String> {
        parts
            .get(i)
            .map_or(Ok(default), |s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| format!("bad family component '{s}': {e}"))
            })
    };
    let alpha = num(0, 0.0)?;
    let beta = num(1, 0.0)?;
    let tau = num(2, 0.0)?;
    let amp = num(3, 1.0)?;
    RadialFamily::new(amp, alpha, beta, tau).map_err(|e| e.to_string())
}

/// `u=<family>,v=<family>`.
pub fn parse_pair(spec: &str) -> Result<(RadialFamily, RadialFamily), String> {
    let mut u = None;
    let mut v = None;
    for part in spec.split(',') {
        let (key, val) = part
            .split_once('=')
            .ok_or_else(|| format!("bad pair component '{part}'"))?;
        match key.trim() {
            "u" => u = Some(parse_family(val)?),
            "v" => v = Some(parse_family(val)?),
            other => return Err(format!("unknown pair key '{other}'")),
        }
    }
    match (u, v) {
        (Some(u), Some(v)) => Ok((u, v)),
        _ => Err("pair spec needs both u= and v=".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn potential_grammar() {
        assert_eq!(parse_potential("zero").unwrap(), Potential::Zero);
        assert_eq!(
            parse_potential("hardy:0.25").unwrap(),
            Potential::PureHardy { lambda: 0.25 }
        );
        assert_eq!(
            parse_potential("improved:0.1").unwrap(),
            Potential::ImprovedHardy { epsilon: 0.1 }
        );
        assert!(parse_potential("hardy:-1").is_err());
        assert!(parse_potential("mystery:1").is_err());
    }

    #[test]
    fn family_grammar() {
        let f = parse_family("-0.75").unwrap();
        assert_eq!((f.alpha, f.beta, f.tau, f.c), (-0.75, 0.0, 0.0, 1.0));
        let f = parse_family("-0.5:0.25:-0.1:2.0").unwrap();
        assert_eq!((f.alpha, f.beta, f.tau, f.c), (-0.5, 0.25, -0.1, 2.0));
        assert!(parse_family("a:b").is_err());
        assert!(parse_family("1:2:3:4:5").is_err());
    }

    #[test]
    fn pair_grammar() {
        let (u, v) = parse_pair("u=-0.75,v=-0.5:0:0:0.8").unwrap();
        assert_eq!(u.alpha, -0.75);
        assert_eq!(v.c, 0.8);
        assert!(parse_pair("u=-0.75").is_err());
    }
}
