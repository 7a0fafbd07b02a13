//! End-to-end acceptance suite. Each test prints a single PASS/FAIL line
//! (visible with `--nocapture`) before asserting, so a failing run still
//! reports every measured quantity.
//!
//! Run with:
//!
//! ```text
//! cargo test --test acceptance -- --nocapture
//! ```

use std::time::Instant;

use ibvp::expr::parse;
use ibvp::greens::{apply_operator, cone_slack, HSource};
use ibvp::kernel::{cone_constants, verify_kernel_bounds};
use ibvp::nonlinear::{
    find_positive_solution, newton_collocation, picard_solve, ProblemSpec, SolveConfig,
};
use ibvp::quadrature::QuadratureRule;
use ibvp::{classify_growth, solve_linear, GridFunction, GrowthVerdict};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rule() -> QuadratureRule {
    QuadratureRule::gauss_legendre(64).unwrap()
}

fn superlinear_problem() -> ProblemSpec {
    ProblemSpec::new(
        parse("u^2 * exp(u)", "u").unwrap(),
        parse("t^4", "t").unwrap(),
        0.25,
    )
    .unwrap()
}

fn sublinear_problem() -> ProblemSpec {
    ProblemSpec::new(
        parse("sqrt(u) + ln(1 + u)", "u").unwrap(),
        parse("t^6", "t").unwrap(),
        0.25,
    )
    .unwrap()
}

fn status(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

#[test]
fn criterion_1_constants_reproduction() {
    let start = Instant::now();
    let r = rule();
    let quartic = cone_constants(&parse("t^4", "t").unwrap(), 0.25, &r).unwrap();
    let sextic = cone_constants(&parse("t^6", "t").unwrap(), 0.25, &r).unwrap();
    let err4 = (quartic.mu - 1.0 / 7.0).abs();
    let err6 = (sextic.mu - 1.0 / 9.0).abs();
    let elapsed = start.elapsed();
    let ok = err4 <= 1e-12 && err6 <= 1e-12 && elapsed.as_secs_f64() < 0.1;
    println!(
        "criterion 1 (constants reproduction): {} — |mu4 - 1/7| = {err4:.2e}, \
         |mu6 - 1/9| = {err6:.2e}, {:.3}s",
        status(ok),
        elapsed.as_secs_f64()
    );
    assert!(ok);
}

#[test]
fn criterion_2_kernel_bound_suite() {
    let start = Instant::now();
    let report = verify_kernel_bounds(1001, 0.25).unwrap();
    let elapsed = start.elapsed();
    let ok = report.ok() && elapsed.as_secs_f64() < 5.0;
    println!(
        "criterion 2 (kernel bound suite): {} — {} violations over 1001^2 samples, \
         worst slacks {:.2e}/{:.2e}/{:.2e}, {:.3}s",
        status(ok),
        report.violations,
        report.worst_lower_slack,
        report.worst_upper_slack,
        report.worst_window_slack,
        elapsed.as_secs_f64()
    );
    assert!(ok);
}

#[test]
fn criterion_3_linear_solver_exactness_and_linearity() {
    let r = rule();
    let g = parse("t^4", "t").unwrap();
    let h = parse("6", "s").unwrap();
    let u = solve_linear(HSource::Expr(&h), &g, 513, &r).unwrap();
    let mut sup_err = 0.0_f64;
    for i in 0..513 {
        let t = u.node(i);
        sup_err = sup_err.max((u.value(i) - (49.0 / 48.0 * t * t - t * t * t)).abs());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 257;
    let mut worst_linearity = 0.0_f64;
    for _ in 0..50 {
        let (a0, a1, a2): (f64, f64, f64) = (
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        );
        let (b0, b1, b3): (f64, f64, f64) = (
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        );
        let (c1, c2): (f64, f64) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let h1 = GridFunction::from_fn(n, |s| a0 + a1 * s + a2 * s * s).unwrap();
        let h2 = GridFunction::from_fn(n, |s| b0 + b1 * s + b3 * s * s * s).unwrap();
        let hc = GridFunction::from_fn(n, |s| {
            c1 * (a0 + a1 * s + a2 * s * s) + c2 * (b0 + b1 * s + b3 * s * s * s)
        })
        .unwrap();
        let u1 = solve_linear(HSource::Grid(&h1), &g, n, &r).unwrap();
        let u2 = solve_linear(HSource::Grid(&h2), &g, n, &r).unwrap();
        let uc = solve_linear(HSource::Grid(&hc), &g, n, &r).unwrap();
        for i in 0..n {
            worst_linearity = worst_linearity
                .max((uc.value(i) - c1 * u1.value(i) - c2 * u2.value(i)).abs());
        }
    }
    let ok = sup_err <= 1e-8 && worst_linearity <= 1e-11;
    println!(
        "criterion 3 (linear solver exactness): {} — closed-form sup error {sup_err:.2e}, \
         worst linearity defect {worst_linearity:.2e} over 50 pairs",
        status(ok)
    );
    assert!(ok);
}

#[test]
fn criterion_4_cone_mapping() {
    let r = rule();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let problems = [superlinear_problem(), sublinear_problem()];
    let mut failures = 0usize;
    let mut worst_slack = f64::INFINITY;
    for problem in &problems {
        let constants = cone_constants(&problem.g, problem.theta, &r).unwrap();
        for _ in 0..100 {
            let (q0, q1, q2): (f64, f64, f64) = (
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let floor: f64 = rng.gen_range(0.0..0.5);
            let u = GridFunction::from_fn(129, |t| {
                let q = q0 + q1 * t + q2 * t * t;
                floor + q * q
            })
            .unwrap();
            let au = apply_operator(&u, &problem.f, &problem.g, &r).unwrap();
            let slack = cone_slack(&au, &constants);
            worst_slack = worst_slack.min(slack);
            if slack < -1e-10 {
                failures += 1;
            }
        }
    }
    let ok = failures == 0;
    println!(
        "criterion 4 (cone mapping): {} — {failures} failures over 200 random inputs, \
         worst cone slack {worst_slack:.2e}",
        status(ok)
    );
    assert!(ok);
}

#[test]
fn criterion_5_end_to_end_sublinear() {
    let start = Instant::now();
    let problem = sublinear_problem();
    let cfg = SolveConfig::default();
    let found = find_positive_solution(&problem, &cfg).unwrap();

    // cross-check against the other solver from the same seed
    let u0 = GridFunction::from_fn(cfg.n, |t| 0.1 * t * t * (1.0 - t)).unwrap();
    let other = match found.method {
        ibvp::Method::Picard => newton_collocation(&problem, &cfg, &u0).unwrap(),
        ibvp::Method::NewtonCollocation => picard_solve(&problem, &cfg, &u0).unwrap(),
    };
    let mut agreement = 0.0_f64;
    for i in 0..cfg.n {
        agreement = agreement.max((found.solution.value(i) - other.solution.value(i)).abs());
    }
    let elapsed = start.elapsed();

    let norm_ok = found.norm >= 1e-2;
    let residual_ok = found.ode_residual <= 1e-3;
    let boundary_ok =
        found.u0_residual <= 1e-8 && found.du0_residual <= 1e-8 && found.bc_residual <= 1e-8;
    let agree_ok = agreement <= 1e-6;
    let time_ok = elapsed.as_secs_f64() < 30.0;
    let ok = norm_ok && residual_ok && boundary_ok && agree_ok && time_ok;
    println!(
        "criterion 5 (end-to-end sublinear): {} — norm {:.6e} (>= 1e-2: {}), \
         ODE residual {:.2e}, boundary residuals {:.1e}/{:.1e}/{:.1e}, \
         solver agreement {:.2e}, {:.1}s",
        status(ok),
        found.norm,
        status(norm_ok),
        found.ode_residual,
        found.u0_residual,
        found.du0_residual,
        found.bc_residual,
        agreement,
        elapsed.as_secs_f64()
    );
    assert!(
        ok,
        "norm_ok={norm_ok} residual_ok={residual_ok} boundary_ok={boundary_ok} \
         agree_ok={agree_ok} time_ok={time_ok}"
    );
}

#[test]
fn criterion_6_end_to_end_superlinear() {
    let start = Instant::now();
    let problem = superlinear_problem();
    let cfg = SolveConfig::default();
    let found = find_positive_solution(&problem, &cfg).unwrap();

    // validate on the doubled grid, seeded by interpolating the coarse fit
    let fine_cfg = SolveConfig {
        n: 1025,
        ..SolveConfig::default()
    };
    let seed = GridFunction::from_fn(1025, |t| found.solution.eval_cubic(t)).unwrap();
    let fine = newton_collocation(&problem, &fine_cfg, &seed).unwrap();
    let mut agreement = 0.0_f64;
    for i in 0..cfg.n {
        agreement = agreement.max((found.solution.value(i) - fine.solution.value(2 * i)).abs());
    }
    let elapsed = start.elapsed();

    let nontrivial_ok = !found.trivial && found.norm > cfg.p_min;
    let residual_ok = found.ode_residual <= 1e-3;
    let agree_ok = agreement <= 5e-5;
    let time_ok = elapsed.as_secs_f64() < 60.0;
    let ok = nontrivial_ok && residual_ok && agree_ok && time_ok;
    println!(
        "criterion 6 (end-to-end superlinear): {} — norm {:.6e} (nontrivial: {}), \
         ODE residual {:.2e}, 513/1025 agreement {:.2e} (<= 5e-5: {}), {:.1}s",
        status(ok),
        found.norm,
        status(nontrivial_ok),
        found.ode_residual,
        agreement,
        status(agree_ok),
        elapsed.as_secs_f64()
    );
    assert!(
        ok,
        "nontrivial_ok={nontrivial_ok} residual_ok={residual_ok} agree_ok={agree_ok} \
         time_ok={time_ok}"
    );
}

#[test]
fn criterion_7_classification() {
    let sup = classify_growth(&superlinear_problem().f).unwrap();
    let sub = classify_growth(&sublinear_problem().f).unwrap();
    let lin = classify_growth(&parse("u", "u").unwrap()).unwrap();
    let ok = sup.verdict == GrowthVerdict::Superlinear
        && sub.verdict == GrowthVerdict::Sublinear
        && lin.verdict == GrowthVerdict::Indeterminate;
    println!(
        "criterion 7 (classification): {} — u^2*exp(u) => {:?}, sqrt(u)+ln(1+u) => {:?}, \
         u => {:?}",
        status(ok),
        sup.verdict,
        sub.verdict,
        lin.verdict
    );
    assert!(ok);
}

#[test]
fn criterion_8_convergence_order() {
    let problem = ProblemSpec::new(
        parse("6", "u").unwrap(),
        parse("t^4", "t").unwrap(),
        0.25,
    )
    .unwrap();
    let error_at = |n: usize| -> f64 {
        let cfg = SolveConfig {
            n,
            ..SolveConfig::default()
        };
        let u0 = GridFunction::constant(n, 0.0).unwrap();
        let report = newton_collocation(&problem, &cfg, &u0).unwrap();
        let mut err = 0.0_f64;
        for i in 0..n {
            let t = report.solution.node(i);
            err = err.max((report.solution.value(i) - (49.0 / 48.0 * t * t - t * t * t)).abs());
        }
        err
    };
    let errors = [error_at(65), error_at(129), error_at(257)];
    let r1 = errors[0] / errors[1];
    let r2 = errors[1] / errors[2];
    let ok = (2.5..=6.0).contains(&r1) && (2.5..=6.0).contains(&r2);
    println!(
        "criterion 8 (convergence order): {} — errors {:.3e}/{:.3e}/{:.3e}, \
         refinement ratios {r1:.2}, {r2:.2}",
        status(ok),
        errors[0],
        errors[1],
        errors[2]
    );
    assert!(ok);
}
