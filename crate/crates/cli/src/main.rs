//! Command-line front end: solve, verify, classify, and kernel-dump
//! workflows over the `ibvp` library.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 hypothesis failure,
//! 3 no positive solution found, 4 invariant violation in `verify`.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use ibvp::expr::parse;
use ibvp::greens::norm_bound_check;
use ibvp::kernel::{cone_constants, green_eval, verify_kernel_bounds};
use ibvp::nonlinear::{find_positive_solution, ProblemSpec, SolveConfig};
use ibvp::quadrature::QuadratureRule;
use ibvp::{check_hypotheses, classify_growth, Error, ExprAst};

const EXIT_USAGE: u8 = 1;
const EXIT_HYPOTHESIS: u8 = 2;
const EXIT_NOT_FOUND: u8 = 3;
const EXIT_VIOLATION: u8 = 4;

#[derive(Parser)]
#[command(
    name = "ibvp",
    version,
    about = "Positive solutions of u''' + f(u) = 0 with u(0) = u'(0) = 0 and u(1) = \u{222b} g(s) u(s) ds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find a positive solution and write the grid plus a JSON report
    Solve(SolveArgs),
    /// Run the kernel-bound and norm-bound invariant suites
    Verify(VerifyArgs),
    /// Estimate f(u)/u at 0 and infinity and print the growth report
    Classify(ClassifyArgs),
    /// Dump the Green's function on a uniform grid as CSV
    Greens(GreensArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Nonlinearity f as an expression in u, e.g. "u^2 * exp(u)"
    #[arg(long)]
    f: String,
    /// Boundary weight g as an expression in t, e.g. "t^4"
    #[arg(long)]
    g: String,
    /// Cone window parameter in (0, 1/2)
    #[arg(long, default_value_t = 0.25)]
    theta: f64,
    /// Grid size (odd)
    #[arg(long, default_value_t = 513)]
    grid: usize,
    /// Update tolerance
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Gauss-Legendre panels per kernel integral
    #[arg(long, default_value_t = 64)]
    panels: usize,
    /// Solution CSV path
    #[arg(long, default_value = "solution.csv")]
    out: PathBuf,
    /// JSON report path
    #[arg(long, default_value = "report.json")]
    report: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Samples per axis for the kernel-bound scan
    #[arg(long, default_value_t = 1001)]
    samples: usize,
    /// Cone window parameter in (0, 1/2)
    #[arg(long, default_value_t = 0.25)]
    theta: f64,
    /// Boundary weight g for the norm-bound checks
    #[arg(long, default_value = "t^4")]
    g: String,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Nonlinearity f as an expression in u
    #[arg(long)]
    f: String,
    /// Optional boundary weight g; when given, hypotheses (H1)-(H2) are checked too
    #[arg(long)]
    g: Option<String>,
    /// Cone window parameter used for the hypothesis check
    #[arg(long, default_value_t = 0.25)]
    theta: f64,
}

#[derive(Args)]
struct GreensArgs {
    /// Grid points per axis
    #[arg(long, default_value_t = 11)]
    dump: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help and --version are successful exits, not usage errors
            let code = if err.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Classify(args) => cmd_classify(&args),
        Command::Greens(args) => cmd_greens(&args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse(_) | Error::BadConfig(_) | Error::ThetaRange { .. } => EXIT_USAGE,
        Error::NegativeWeight { .. } | Error::MuOutOfRange { .. } => EXIT_HYPOTHESIS,
        _ => EXIT_NOT_FOUND,
    }
}

fn parse_expr(source: &str, variable: &str, flag: &str) -> Result<ExprAst, Error> {
    parse(source, variable).map_err(|err| {
        eprintln!("error in --{flag} expression {source:?}: {err}");
        Error::Parse(err)
    })
}

#[derive(Serialize)]
struct SolveOutput<'a> {
    config: &'a SolveConfig,
    theta: f64,
    f: String,
    g: String,
    hypotheses: ibvp::HypothesisReport,
    growth: ibvp::GrowthReport,
    result: ibvp::SolveReport,
}

fn cmd_solve(args: &SolveArgs) -> Result<u8, Error> {
    let f = parse_expr(&args.f, "u", "f")?;
    let g = parse_expr(&args.g, "t", "g")?;
    let problem = ProblemSpec::new(f, g, args.theta)?;
    let cfg = SolveConfig {
        n: args.grid,
        tol: args.tol,
        panels: args.panels,
        ..SolveConfig::default()
    };
    cfg.validate()?;
    let rule = cfg.rule()?;

    let hypotheses = check_hypotheses(&problem.f, &problem.g, problem.theta, &rule)?;
    if !hypotheses.all_passed() {
        eprintln!(
            "hypothesis check failed: H1 {} (witness {:?}), H2 {} (mu = {})",
            if hypotheses.h1_passed { "pass" } else { "FAIL" },
            hypotheses.h1_witness,
            if hypotheses.h2_passed { "pass" } else { "FAIL" },
            hypotheses.mu
        );
        return Ok(EXIT_HYPOTHESIS);
    }
    let growth = classify_growth(&problem.f)?;

    let report = match find_positive_solution(&problem, &cfg) {
        Ok(report) => report,
        Err(Error::NoPositiveSolution { attempts }) => {
            eprintln!("no positive solution found; sweep attempts:");
            for a in &attempts {
                eprintln!(
                    "  c = {:>6}, {:<18}: {}",
                    a.amplitude, a.method, a.outcome
                );
            }
            return Ok(EXIT_NOT_FOUND);
        }
        Err(err) => return Err(err),
    };

    let mut csv = String::from("t,u\n");
    for i in 0..report.solution.n() {
        csv.push_str(&format!(
            "{:.16e},{:.16e}\n",
            report.solution.node(i),
            report.solution.value(i)
        ));
    }
    fs::write(&args.out, csv).map_err(|e| Error::BadConfig(format!("writing {:?}: {e}", args.out)))?;

    let output = SolveOutput {
        config: &cfg,
        theta: problem.theta,
        f: args.f.clone(),
        g: args.g.clone(),
        hypotheses,
        growth,
        result: report,
    };
    let json = serde_json::to_string_pretty(&output)
        .map_err(|e| Error::BadConfig(format!("serializing report: {e}")))?;
    fs::write(&args.report, json)
        .map_err(|e| Error::BadConfig(format!("writing {:?}: {e}", args.report)))?;
    println!(
        "solution written to {} (norm {:.6e}, {} iterations, report {})",
        args.out.display(),
        output.result.norm,
        output.result.iterations,
        args.report.display()
    );
    Ok(0)
}

#[derive(Serialize)]
struct VerifyOutput {
    samples: usize,
    theta: f64,
    g: String,
    kernel_bounds: ibvp::KernelBoundReport,
    cone_constants: ibvp::ConeConstants,
    norm_bounds: Vec<(String, ibvp::NormBoundReport)>,
    ok: bool,
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8, Error> {
    let g = parse_expr(&args.g, "t", "g")?;
    let rule = QuadratureRule::gauss_legendre(64)?;
    let kernel_bounds = verify_kernel_bounds(args.samples, args.theta)?;
    let constants = cone_constants(&g, args.theta, &rule)?;
    let mut norm_bounds = Vec::new();
    let mut norms_ok = true;
    for h_source in ["6", "1 + s^2", "s * (1 - s)", "exp(s)"] {
        let h = parse(h_source, "s").map_err(Error::Parse)?;
        let report = norm_bound_check(&h, &g, args.theta, 513, &rule)?;
        norms_ok &= report.ok();
        norm_bounds.push((h_source.to_string(), report));
    }
    let ok = kernel_bounds.ok() && norms_ok && constants.h2_satisfied;
    let output = VerifyOutput {
        samples: args.samples,
        theta: args.theta,
        g: args.g.clone(),
        kernel_bounds,
        cone_constants: constants,
        norm_bounds,
        ok,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&output)
            .map_err(|e| Error::BadConfig(format!("serializing report: {e}")))?
    );
    Ok(if ok { 0 } else { EXIT_VIOLATION })
}

#[derive(Serialize)]
struct ClassifyOutput {
    f: String,
    growth: ibvp::GrowthReport,
    hypotheses: Option<ibvp::HypothesisReport>,
}

fn cmd_classify(args: &ClassifyArgs) -> Result<u8, Error> {
    let f = parse_expr(&args.f, "u", "f")?;
    let growth = classify_growth(&f)?;
    let hypotheses = match &args.g {
        Some(g_source) => {
            let g = parse_expr(g_source, "t", "g")?;
            let rule = QuadratureRule::gauss_legendre(64)?;
            Some(check_hypotheses(&f, &g, args.theta, &rule)?)
        }
        None => None,
    };
    let output = ClassifyOutput {
        f: args.f.clone(),
        growth,
        hypotheses,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&output)
            .map_err(|e| Error::BadConfig(format!("serializing report: {e}")))?
    );
    Ok(0)
}

fn cmd_greens(args: &GreensArgs) -> Result<u8, Error> {
    let n = args.dump;
    if n < 2 {
        return Err(Error::BadConfig(format!(
            "--dump needs at least 2 points per axis, got {n}"
        )));
    }
    let coord = |i: usize| i as f64 / (n - 1) as f64;
    // header row: s values, first column: t values
    let mut out = String::from("t\\s");
    for j in 0..n {
        out.push_str(&format!(",{:.16e}", coord(j)));
    }
    out.push('\n');
    for i in 0..n {
        out.push_str(&format!("{:.16e}", coord(i)));
        for j in 0..n {
            out.push_str(&format!(",{:.16e}", green_eval(coord(i), coord(j))));
        }
        out.push('\n');
    }
    print!("{out}");
    Ok(0)
}
