//! `plhardy`: exponent computation, residual classification and asymptotic
//! diagnostics for radial p-Laplace equations with Hardy-type potentials.
//!
//! Exit codes: 0 success/confirmed, 2 domain or precondition violations,
//! 3 inconclusive evidence, 64 usage errors.

mod args;
mod config;
mod report;

use clap::Parser;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use plhardy::*;

use args::{Cli, Command};
use report::{csv_block, to_config, Emitter};

const EXIT_OK: i32 = 0;
const EXIT_FAILURE: i32 = 1;
const EXIT_PRECONDITION: i32 = 2;
const EXIT_INCONCLUSIVE: i32 = 3;
const EXIT_USAGE: i32 = 64;

enum CliError {
    /// Violated mathematical domain or hypothesis: exit 2 with a payload.
    Core(Error),
    /// Malformed invocation: exit 64 with the contract on stderr.
    Usage(String),
    /// Output plumbing failed: exit 1.
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult = std::result::Result<i32, CliError>;

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let argv: Vec<String> = std::env::args().collect();
    let argv = match config::merge_into_argv(argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            EXIT_FAILURE
        }
        Err(CliError::Core(e)) => {
            let payload = json!({
                "schema_version": report::SCHEMA_VERSION,
                "status": "error",
                "error": { "kind": error_kind(&e), "message": e.to_string() },
            });
            println!("{}", serde_json::to_string_pretty(&payload).unwrap());
            EXIT_PRECONDITION
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::DegenerateDimension(_) => "degenerate_dimension",
        Error::DegenerateGradient { .. } => "degenerate_gradient",
        Error::Precondition(_) => "precondition",
        Error::NoBracket(_) => "no_bracket",
        Error::Blowup { .. } => "blowup",
        Error::ToleranceFailure { .. } => "tolerance_failure",
        Error::InsufficientWindow { .. } => "insufficient_window",
    }
}

fn emitter(cli: &Cli, command: &'static str) -> Emitter {
    Emitter {
        command,
        seed: cli.seed,
        format: cli.format,
        output: cli.output.clone(),
        no_timestamp: cli.no_timestamp,
    }
}

fn dispatch(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Exponents(a) => cmd_exponents(cli, a),
        Command::Classify(a) => cmd_classify(cli, a),
        Command::Table1(a) => cmd_table1(cli, a),
        Command::Residual(a) => cmd_residual(cli, a),
        Command::VerifyInequality(a) => cmd_verify_inequality(cli, a),
        Command::VerifySuperposition(a) => cmd_verify_superposition(cli, a),
        Command::Integrate(a) => cmd_integrate(cli, a),
        Command::PlCheck(a) => cmd_pl_check(cli, a),
        Command::SolveBvp(a) => cmd_solve_bvp(cli, a),
        Command::Compare(a) => cmd_compare(cli, a),
    }
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn cmd_exponents(cli: &Cli, a: &args::ExponentsArgs) -> CliResult {
    let pr = Params::new(a.p, a.n)?;
    let consts = pr.hardy_constants();
    let mut result = json!({
        "c_h": consts.c_h,
        "c_star": consts.c_star,
        "m_star": consts.m_star,
        "alpha_lower": Value::Null,
        "alpha_upper": Value::Null,
        "alpha_degenerate": Value::Null,
        "beta_lower": Value::Null,
        "beta_upper": Value::Null,
        "beta_degenerate": Value::Null,
        "residuals": {},
    });
    let mut text = format!(
        "p = {}, N = {}\nC_H = {}\nC_* = {} (m_* = {})\n",
        a.p, a.n, consts.c_h, consts.c_star, consts.m_star
    );
    if let Some(lambda) = a.lambda {
        let pair = hardy_roots(&pr, lambda)?;
        result["alpha_lower"] = json!(pair.lower);
        result["alpha_upper"] = json!(pair.upper);
        result["alpha_degenerate"] = json!(pair.degenerate);
        result["residuals"]["alpha_lower"] = json!(lambda_of_alpha(&pr, pair.lower) - lambda);
        result["residuals"]["alpha_upper"] = json!(lambda_of_alpha(&pr, pair.upper) - lambda);
        text.push_str(&format!(
            "alpha roots of lambda = {lambda}: [{}, {}]{}\n",
            pair.lower,
            pair.upper,
            if pair.degenerate { " (degenerate)" } else { "" }
        ));
    }
    if let Some(eps) = a.epsilon {
        let pair = improved_roots(&pr, eps)?;
        result["beta_lower"] = json!(pair.lower);
        result["beta_upper"] = json!(pair.upper);
        result["beta_degenerate"] = json!(pair.degenerate);
        result["residuals"]["beta_lower"] = json!(improved_coupling_of_beta(&pr, pair.lower) - eps);
        result["residuals"]["beta_upper"] = json!(improved_coupling_of_beta(&pr, pair.upper) - eps);
        text.push_str(&format!(
            "beta roots of epsilon = {eps}: [{}, {}]{}\n",
            pair.lower,
            pair.upper,
            if pair.degenerate { " (degenerate)" } else { "" }
        ));
    }
    emitter(cli, "exponents")
        .emit(to_config(a), "ok", result, text, None)
        .map_err(CliError::Io)?;
    Ok(EXIT_OK)
}

fn evidence_csv(evidence: &[ResidualSample]) -> String {
    csv_block(
        "r,u,u',residual,scaled_residual",
        evidence
            .iter()
            .map(|s| vec![s.r, s.u, s.du, s.residual, s.scaled]),
    )
}

fn cmd_classify(cli: &Cli, a: &args::ClassifyArgs) -> CliResult {
    let pr = Params::new(a.p, a.n)?;
    let pot = args::parse_potential(&a.potential).map_err(CliError::Usage)?;
    let family = RadialFamily::new(a.c, a.alpha, a.beta, a.tau)?;
    let ann = Annulus::new(a.r0, a.rmax)?;
    let rep = classify(&pr, &family, &pot, &ann, &GridSpec::new(a.nodes))?;
    let status = if rep.verdict == Verdict::MixedSign {
        "inconclusive"
    } else {
        "ok"
    };
    let result = json!({
        "verdict": rep.verdict,
        "rho0": finite_or_null(rep.rho0),
        "strict": rep.strict,
        "nodes": rep.evidence.len(),
        "evidence": rep.evidence,
    });
    let text = format!(
        "verdict: {:?}\nrho0: {}\nstrict: {}\nnodes: {}\n",
        rep.verdict,
        rep.rho0,
        rep.strict,
        rep.evidence.len()
    );
    let csv = evidence_csv(&rep.evidence);
    emitter(cli, "classify")
        .emit(to_config(a), status, result, text, Some(csv))
        .map_err(CliError::Io)?;
    Ok(if rep.verdict == Verdict::MixedSign {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    })
}

fn cmd_table1(cli: &Cli, a: &args::Table1Args) -> CliResult {
    let pr = Params::new(a.p, a.n)?;
    let cs = pr.c_star();
    let mut epsilons = Vec::new();
    for token in a.eps_list.split(',') {
        let token = token.trim();
        let eps = match token {
            "0" | "zero" => 0.0,
            "mid" => 0.5 * cs,
            "cstar" | "c*" => cs,
            other => other
                .parse::<f64>()
                .map_err(|e| CliError::Usage(format!("bad eps '{other}': {e}")))?,
        };
        epsilons.push(eps);
    }
    let reports = table1_suite(&pr, &epsilons, a.rmax)?;
    let all_confirmed = reports.iter().all(|r| r.all_confirmed);
    let mut text = String::new();
    for rep in &reports {
        text.push_str(&format!(
            "eps = {} ({}): {}\n",
            rep.epsilon,
            rep.row,
            if rep.all_confirmed { "confirmed" } else { "UNCONFIRMED" }
        ));
        for cell in &rep.cells {
            text.push_str(&format!(
                "  {:55} beta={:+.4} tau={:+.4} -> {:?} (rho0 {:?}){}\n",
                cell.label,
                cell.beta,
                cell.tau,
                cell.verdict,
                cell.rho0,
                match (cell.confirmed, cell.supplementary) {
                    (Some(true), _) => " ok",
                    (Some(false), true) => " beyond rho0 bound (supplementary, not gating)",
                    (Some(false), false) => " MISMATCH",
                    (None, _) => "",
                }
            ));
        }
    }
    let status = if all_confirmed { "ok" } else { "inconclusive" };
    emitter(cli, "table1")
        .emit(to_config(a), status, json!(reports), text, None)
        .map_err(CliError::Io)?;
    Ok(if all_confirmed { EXIT_OK } else { EXIT_INCONCLUSIVE })
}

fn cmd_residual(cli: &Cli, a: &args::ResidualArgs) -> CliResult {
    let pr = Params::new(a.p, a.n)?;
    let pot = args::parse_potential(&a.potential).map_err(CliError::Usage)?;
    let family = RadialFamily::new(a.c, a.alpha, a.beta, a.tau)?;
    let samples: Vec<ResidualSample> = match (a.r, a.r0, a.rmax) {
        (Some(r), None, None) => vec![residual_sample(&pr, &family, &pot, r)?],
        (None, Some(r0), Some(rmax)) => GridSpec::new(a.nodes)
            .sample(r0, rmax)?
            .into_iter()
            .map(|r| residual_sample(&pr, &family, &pot, r))
            .collect::<plhardy::Result<_>>()?,
        _ => {
            return Err(CliError::Usage(
                "provide either --r or both --r0 and --rmax".into(),
            ))
        }
    };
    let text = samples
        .iter()
        .map(|s| format!("r = {:<12.6} residual = {:+.6e} (scaled {:+.3e})", s.r, s.residual, s.scaled))
        .collect::<Vec<_>>()
        .join("\n");
    let csv = evidence_csv(&samples);
    emitter(cli, "residual")
        .emit(to_config(a), "ok", json!(samples), text, Some(csv))
        .map_err(CliError::Io)?;
    Ok(EXIT_OK)
}

fn cmd_verify_inequality(cli: &Cli, a: &args::VerifyInequalityArgs) -> CliResult {
    if !(a.q > 0.0) {
        return Err(CliError::Usage(format!("q must be positive, got {}", a.q)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut violations = 0usize;
    let mut worst: f64 = 0.0;
    let mut worst_case = None;
    for _ in 0..a.samples {
        let draw = |rng: &mut ChaCha8Rng| 2f64.powf(rng.gen_range(-a.span..a.span));
        let quad = Quadruple::new(
            draw(&mut rng),
            draw(&mut rng),
            draw(&mut rng),
            draw(&mut rng),
            a.q,
        )?;
        let gap = convexity_gap(&quad);
        let scale = convexity_scale(&quad);
        // Signed contract: gap >= 0 for q >= 1, <= 0 for q <= 1.
        let offending = if a.q >= 1.0 { -gap } else { gap };
        let scaled = offending / scale.max(1e-300);
        if scaled > worst {
            worst = scaled;
            worst_case = Some(quad);
        }
        if scaled > 1e-12 {
            violations += 1;
        }
    }
    let confirmed = violations == 0;
    let result = json!({
        "q": a.q,
        "samples": a.samples,
        "violations": violations,
        "worst_offending_scaled": worst,
        "worst_case": worst_case,
    });
    let text = format!(
        "q = {}: {} samples, {} violations, worst offending scaled gap {:e}\n",
        a.q, a.samples, violations, worst
    );
    let status = if confirmed { "ok" } else { "inconclusive" };
    emitter(cli, "verify-inequality")
        .emit(to_config(a), status, result, text, None)
        .map_err(CliError::Io)?;
    Ok(if confirmed { EXIT_OK } else { EXIT_INCONCLUSIVE })
}

/// Builds the canonical admissible pair from the pure-Hardy power catalog.
fn catalog_pair(
    pr: &Params,
    lambda: f64,
    frac: f64,
    amp: f64,
    nodes: &[f64],
) -> plhardy::Result<(RadialFamily, RadialFamily)> {
    let roots = hardy_roots(pr, lambda)?;
    let sub_root = if pr.p < pr.n_f64() {
        roots.lower
    } else {
        roots.upper
    };
    let beta = roots.lower + frac * (roots.upper - roots.lower);
    let u = RadialFamily::power(sub_root).with_amplitude(amp);
    let v0 = RadialFamily::power(beta);
    let s = admissible_scale(&u, &v0, nodes)?;
    Ok((u, v0.with_amplitude(s)))
}

fn cmd_verify_superposition(cli: &Cli, a: &args::VerifySuperpositionArgs) -> CliResult {
    let pr = Params::new(a.p, a.n)?;
    let pot = args::parse_potential(&a.potential).map_err(CliError::Usage)?;
    let ann = Annulus::new(a.r0, a.rmax)?;
    let grid = GridSpec::new(a.nodes);
    let low_p = pr.p < 2.0;
    let check = |u: &RadialFamily, v: &RadialFamily| -> plhardy::Result<DifferenceReport> {
        if low_p {
            supersolution_difference_check(&pr, u, v, &pot, &ann, &grid)
        } else {
            superposition_check(&pr, u, v, &pot, &ann, &grid)
        }
    };

    if let Some(trials) = a.trials {
        let lambda_cap = match &pot {
            Potential::PureHardy { .. } => pr.c_h(),
            _ => {
                return Err(CliError::Usage(
                    "randomized trials need a pure Hardy potential".into(),
                ))
            }
        };
        let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
        let nodes = grid.sample(ann.r0, ann.r1).map_err(CliError::Core)?;
        let mut failures = 0usize;
        let mut worst: f64 = 0.0;
        for _ in 0..trials {
            let lambda = rng.gen_range(0.05..0.95) * lambda_cap;
            let frac = rng.gen_range(0.1..0.9);
            let amp = rng.gen_range(0.5..2.0);
            let (u, v) = catalog_pair(&pr, lambda, frac, amp, &nodes)?;
            let pot = Potential::pure_hardy(lambda)?;
            let rep = if low_p {
                supersolution_difference_check(&pr, &u, &v, &pot, &ann, &grid)?
            } else {
                superposition_check(&pr, &u, &v, &pot, &ann, &grid)?
            };
            worst = worst.max(rep.worst_scaled);
            if !rep.confirmed {
                failures += 1;
            }
        }
        let confirmed = failures == 0;
        let result = json!({
            "mode": if low_p { "difference-supersolution" } else { "difference-subsolution" },
            "trials": trials,
            "failures": failures,
            "worst_scaled": worst,
        });
        let text = format!(
            "{trials} randomized pairs, {failures} failures, worst scaled residual {worst:e}\n"
        );
        let status = if confirmed { "ok" } else { "inconclusive" };
        emitter(cli, "verify-superposition")
            .emit(to_config(a), status, result, text, None)
            .map_err(CliError::Io)?;
        return Ok(if confirmed { EXIT_OK } else { EXIT_INCONCLUSIVE });
    }

    let (u, v) = match &a.pair_spec {
        Some(spec) => args::parse_pair(spec).map_err(CliError::Usage)?,
        None => {
            let Potential::PureHardy { lambda } = pot else {
                return Err(CliError::Usage(
                    "without --pair-spec the pair is built from a pure Hardy potential".into(),
                ));
            };
            let nodes = grid.sample(ann.r0, ann.r1).map_err(CliError::Core)?;
            catalog_pair(&pr, lambda, a.beta_frac, 1.0, &nodes)?
        }
    };
    let rep = check(&u, &v)?;
    let result = json!({
        "mode": if low_p { "difference-supersolution" } else { "difference-subsolution" },
        "u": u,
        "v": v,
        "confirmed": rep.confirmed,
        "checked_nodes": rep.checked_nodes,
        "degenerate_nodes": rep.degenerate_nodes,
        "worst_scaled": rep.worst_scaled,
        "first_violation": rep.first_violation,
    });
    let text = format!(
        "u = {u:?}\nv = {v:?}\nconfirmed: {} (worst scaled residual {:e}, {} degenerate nodes)\n",
        rep.confirmed, rep.worst_scaled, rep.degenerate_nodes
    );
    let status = if rep.confirmed { "ok" } else { "inconclusive" };
    emitter(cli, "verify-superposition")
        .emit(to_config(a), status, result, text, None)
        .map_err(CliError::Io)?;
    Ok(if rep.confirmed { EXIT_OK } else { EXIT_INCONCLUSIVE })
}

fn trajectory_csv(traj: &Trajectory) -> String {
    csv_block(
        "r,phi,dphi,flux,local_exponent",
        (0..traj.len()).map(|i| {
            vec![
                traj.nodes[i],
                traj.values[i],
                traj.derivs[i],
                traj.flux[i],
                traj.local_exponent[i],
            ]
        }),
    )
}

fn trajectory_result(traj: &Trajectory) -> Value {
    json!({
        "termination": traj.termination,
        "monotone": traj.monotone,
        "nodes": traj.len(),
        "first_radius": traj.first_radius(),
        "last_radius": traj.last_radius(),
        "last_value": traj.last_value(),
        "worst_flux_balance_ratio": traj.worst_balance_ratio(),
        "samples": (0..traj.len()).map(|i| json!({
            "r": traj.nodes[i],
            "phi": traj.values[i],
            "dphi": traj.derivs[i],
            "flux": traj.flux[i],
            "local_exponent": traj.local_exponent[i],
        })).collect::<Vec<_>>(),
    })
}

fn cmd_integrate(cli: &Cli, a: &args::IntegrateArgs) -> CliResult {
    let pr = Params::new(a.p, a.n)?;
    let pot = args::parse_potential(&a.potential).map_err(CliError::Usage)?;
    let opts = IntegratorOptions::with_tol(a.tol);
    let traj = integrate(&pr, &pot, a.r0, a.phi0, a.dphi0, a.rmax, &opts)?;
    let text = format!(
        "{} nodes from r = {} to {}; termination {:?}; monotone {:?}\n",
        traj.len(),
        traj.first_radius(),
        traj.last_radius(),
        traj.termination,
        traj.monotone,
    );
    let csv = trajectory_csv(&traj);
    emitter(cli, "integrate")
        .emit(to_config(a), "ok", trajectory_result(&traj), text, Some(csv))
        .map_err(CliError::Io)?;
    Ok(EXIT_OK)
}

fn cmd_pl_check(cli: &Cli, a: &args::PlCheckArgs) -> CliResult {
    Params::new(a.p, a.n)?;
    let u = args::parse_family(&a.u).map_err(CliError::Usage)?;
    let w = args::parse_family(&a.w).map_err(CliError::Usage)?;
    let ann = Annulus::new(a.r0, f64::INFINITY)?;
    let opts = PlOptions {
        horizon: a.rmax,
        nodes: a.nodes,
        ..PlOptions::default()
    };
    let diag = pl_alternative(&u, &w, &ann, &opts)?;
    let conclusive = diag.supported != Alternative::Unresolved;
    let result = json!({
        "trend": diag.trend,
        "supported_alternative": diag.supported,
        "limsup_estimate": diag.limsup_estimate,
        "monotone_from": diag.monotone_from,
        "finite_horizon": diag.finite_horizon,
        "horizon": diag.horizon,
        "ratios": diag.ratios,
    });
    let text = format!(
        "trend: {:?}\nsupported alternative: {:?}\nlimsup estimate: {:e} (finite horizon {})\n",
        diag.trend, diag.supported, diag.limsup_estimate, diag.horizon
    );
    let status = if conclusive { "ok" } else { "inconclusive" };
    emitter(cli, "pl-check")
        .emit(to_config(a), status, result, text, None)
        .map_err(CliError::Io)?;
    Ok(if conclusive { EXIT_OK } else { EXIT_INCONCLUSIVE })
}

fn cmd_solve_bvp(cli: &Cli, a: &args::SolveBvpArgs) -> CliResult {
    let pr = Params::new(a.p, a.n)?;
    let pot = args::parse_potential(&a.potential).map_err(CliError::Usage)?;
    let prob = BvpProblem::new(pr, pot, Annulus::new(a.r0, a.r1)?, a.inner, a.outer)?;
    let traj = solve_bvp(&prob, a.tol)?;
    let defect = traj.last_value() - a.outer;
    let mut result = trajectory_result(&traj);
    result["outer_defect"] = json!(defect);
    let text = format!(
        "{} nodes; outer value {} vs target {} (defect {:e})\n",
        traj.len(),
        traj.last_value(),
        a.outer,
        defect
    );
    let csv = trajectory_csv(&traj);
    emitter(cli, "solve-bvp")
        .emit(to_config(a), "ok", result, text, Some(csv))
        .map_err(CliError::Io)?;
    Ok(EXIT_OK)
}

fn cmd_compare(cli: &Cli, a: &args::CompareArgs) -> CliResult {
    let pr = Params::new(a.p, a.n)?;
    let pot = args::parse_potential(&a.potential).map_err(CliError::Usage)?;
    let u = args::parse_family(&a.u).map_err(CliError::Usage)?;
    let v = args::parse_family(&a.v).map_err(CliError::Usage)?;
    let certificate = a
        .certificate
        .as_deref()
        .map(args::parse_family)
        .transpose()
        .map_err(CliError::Usage)?;
    let ann = Annulus::new(a.r0, a.r1)?;
    let rep = comparison_verify(&pr, &pot, &ann, &u, &v, &GridSpec::new(a.nodes), certificate)?;
    let result = json!({
        "holds": rep.holds,
        "checked_nodes": rep.checked_nodes,
        "worst_margin": rep.worst_margin,
        "first_violation": rep.first_violation,
        "certificate": rep.certificate,
    });
    let text = format!(
        "u <= v holds: {} (worst margin {:e}; certificate {:?})\n",
        rep.holds, rep.worst_margin, rep.certificate
    );
    let status = if rep.holds { "ok" } else { "inconclusive" };
    emitter(cli, "compare")
        .emit(to_config(a), status, result, text, None)
        .map_err(CliError::Io)?;
    Ok(if rep.holds { EXIT_OK } else { EXIT_INCONCLUSIVE })
}
