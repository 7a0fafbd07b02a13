//! Cross-validation of the two solvers against closed forms and each
//! other, plus the grid-refinement order of the collocation stencils.

use ibvp::expr::parse;
use ibvp::nonlinear::{newton_collocation, picard_solve, ProblemSpec, SolveConfig};
use ibvp::GridFunction;

fn cfg(n: usize) -> SolveConfig {
    SolveConfig {
        n,
        panels: 64,
        ..SolveConfig::default()
    }
}

fn collocation_error_against_cubic(n: usize) -> f64 {
    // u''' + 6 = 0 with g = t^4 has the closed form (49/48) t^2 - t^3
    let spec = ProblemSpec::new(
        parse("6", "u").unwrap(),
        parse("t^4", "t").unwrap(),
        0.25,
    )
    .unwrap();
    let u0 = GridFunction::constant(n, 0.0).unwrap();
    let report = newton_collocation(&spec, &cfg(n), &u0).unwrap();
    let mut err = 0.0_f64;
    for i in 0..n {
        let t = report.solution.node(i);
        err = err.max((report.solution.value(i) - (49.0 / 48.0 * t * t - t * t * t)).abs());
    }
    err
}

#[test]
fn collocation_converges_at_second_order() {
    let e1 = collocation_error_against_cubic(65);
    let e2 = collocation_error_against_cubic(129);
    let e3 = collocation_error_against_cubic(257);
    let r1 = e1 / e2;
    let r2 = e2 / e3;
    assert!(
        (2.5..=6.0).contains(&r1) && (2.5..=6.0).contains(&r2),
        "refinement ratios {r1:.2}, {r2:.2} (errors {e1:.3e}, {e2:.3e}, {e3:.3e})"
    );
}

#[test]
fn picard_matches_the_green_function_closed_form() {
    // f = 6 is constant, so the operator is a constant map and Picard
    // lands on the linear solve
    let spec = ProblemSpec::new(
        parse("6", "u").unwrap(),
        parse("t^4", "t").unwrap(),
        0.25,
    )
    .unwrap();
    let u0 = GridFunction::constant(257, 0.0).unwrap();
    let report = picard_solve(&spec, &cfg(257), &u0).unwrap();
    let mut err = 0.0_f64;
    for i in 0..257 {
        let t = report.solution.node(i);
        err = err.max((report.solution.value(i) - (49.0 / 48.0 * t * t - t * t * t)).abs());
    }
    assert!(err < 1e-9, "sup error {err:.3e}");
}

#[test]
fn solvers_agree_on_a_generic_nonlinearity() {
    let spec = ProblemSpec::new(
        parse("1 / (1 + u^2)", "u").unwrap(),
        parse("t^4", "t").unwrap(),
        0.25,
    )
    .unwrap();
    let u0 = GridFunction::from_fn(257, |t| 0.05 * t * t * (1.0 - t)).unwrap();
    let picard = picard_solve(&spec, &cfg(257), &u0).unwrap();
    let newton = newton_collocation(&spec, &cfg(257), &u0).unwrap();
    let mut diff = 0.0_f64;
    for i in 0..257 {
        diff = diff.max((picard.solution.value(i) - newton.solution.value(i)).abs());
    }
    assert!(diff < 5e-6, "sup difference {diff:.3e}");
    assert!(picard.ode_residual < 1e-4);
    assert!(newton.ode_residual < 1e-4);
}

#[test]
fn newton_refinement_is_consistent() {
    // the discrete solutions at successive grids must approach each other
    let spec = ProblemSpec::new(
        parse("sqrt(u) + ln(1 + u)", "u").unwrap(),
        parse("t^6", "t").unwrap(),
        0.25,
    )
    .unwrap();
    let coarse = {
        let u0 = GridFunction::from_fn(129, |t| 0.1 * t * t * (1.0 - t)).unwrap();
        newton_collocation(&spec, &cfg(129), &u0).unwrap()
    };
    let fine = {
        let u0 = GridFunction::from_fn(257, |t| 0.1 * t * t * (1.0 - t)).unwrap();
        newton_collocation(&spec, &cfg(257), &u0).unwrap()
    };
    let mut diff = 0.0_f64;
    for i in 0..129 {
        diff = diff.max((coarse.solution.value(i) - fine.solution.value(2 * i)).abs());
    }
    assert!(diff < 1e-5, "inter-grid difference {diff:.3e}");
    assert!(!coarse.trivial && !fine.trivial);
}
