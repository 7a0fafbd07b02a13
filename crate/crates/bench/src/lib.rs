//! Shared fixtures for the kernel benchmarks.

use ibvp::expr::parse;
use ibvp::quadrature::QuadratureRule;
use ibvp::{ExprAst, GridFunction};

pub fn quartic_weight() -> ExprAst {
    parse("t^4", "t").unwrap()
}

pub fn sublinear_f() -> ExprAst {
    parse("sqrt(u) + ln(1 + u)", "u").unwrap()
}

pub fn default_rule() -> QuadratureRule {
    QuadratureRule::gauss_legendre(64).unwrap()
}

/// A smooth positive grid function shaped like the solver seeds.
pub fn bump(n: usize) -> GridFunction {
    GridFunction::from_fn(n, |t| 0.5 * t * t * (1.0 - t)).unwrap()
}
