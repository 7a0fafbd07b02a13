//! The linear solution representation through the Green's function and the
//! nonlinear integral operator built on top of it.

use serde::Serialize;

use crate::error::Error;
use crate::expr::ExprAst;
use crate::grid::GridFunction;
use crate::kernel::{check_theta, cone_constants, green_eval, ConeConstants};
use crate::quadrature::QuadratureRule;

/// Negative values of u above this tolerance are clamped to zero before f
/// is applied; anything below it is a hard error.
pub const NEGATIVITY_TOLERANCE: f64 = -1e-12;

/// Right-hand side for the linear solve: either a parsed expression or a
/// grid function interpolated with piecewise cubics.
#[derive(Debug, Clone, Copy)]
pub enum HSource<'a> {
    Expr(&'a ExprAst),
    Grid(&'a GridFunction),
}

impl HSource<'_> {
    fn at(&self, s: f64) -> Result<f64, Error> {
        match self {
            HSource::Expr(e) => Ok(e.eval(s)?),
            HSource::Grid(u) => Ok(u.eval_cubic(s)),
        }
    }
}

// Integral of G(t, .) h over [0, 1], split at the kernel's diagonal kink so
// each half is smooth and the composite Gauss rule keeps full order.
fn kernel_profile(
    t: f64,
    h: &impl Fn(f64) -> Result<f64, Error>,
    rule: &QuadratureRule,
) -> Result<f64, Error> {
    let left = rule.try_integrate(0.0, t, |s| Ok(green_eval(t, s) * h(s)?))?;
    let right = rule.try_integrate(t, 1.0, |s| Ok(green_eval(t, s) * h(s)?))?;
    Ok(left + right)
}

/// Unique solution of u''' + h = 0, u(0) = u'(0) = 0, u(1) = ∫ g u,
/// evaluated on an n-node uniform grid:
///
/// ```text
/// u(t) = ∫ G(t,s) h(s) ds + t^2/(1-mu) ∫ g(τ) [∫ G(τ,s) h(s) ds] dτ
/// ```
///
/// The inner profile is evaluated once per outer quadrature node. Requires
/// mu < 1.
pub fn solve_linear(
    h: HSource,
    g: &ExprAst,
    n: usize,
    rule: &QuadratureRule,
) -> Result<GridFunction, Error> {
    let h_at = |s: f64| h.at(s);
    let mu = rule.try_integrate(0.0, 1.0, |t| Ok(t * t * g.eval(t)?))?;
    if mu >= 1.0 {
        return Err(Error::MuOutOfRange { mu });
    }
    let correction = rule.try_integrate(0.0, 1.0, |tau| {
        Ok(g.eval(tau)? * kernel_profile(tau, &h_at, rule)?)
    })? / (1.0 - mu);
    let step = 1.0 / (n as f64 - 1.0);
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        let t = (i as f64 * step).min(1.0);
        values.push(kernel_profile(t, &h_at, rule)? + t * t * correction);
    }
    GridFunction::new(values)
}

/// The fixed-point operator: Au = solve_linear(f ∘ u). Grid values of u may
/// dip to -1e-12 from roundoff and are clamped; interpolated values are
/// floored at zero so (H1) nonlinearities stay in their domain.
pub fn apply_operator(
    u: &GridFunction,
    f: &ExprAst,
    g: &ExprAst,
    rule: &QuadratureRule,
) -> Result<GridFunction, Error> {
    for (i, &v) in u.values().iter().enumerate() {
        if v < NEGATIVITY_TOLERANCE {
            return Err(Error::NegativeSolution {
                t: u.node(i),
                value: v,
            });
        }
    }
    let h = |s: f64| -> Result<f64, Error> { Ok(f.eval(u.eval_cubic(s).max(0.0))?) };
    let mu = rule.try_integrate(0.0, 1.0, |t| Ok(t * t * g.eval(t)?))?;
    if mu >= 1.0 {
        return Err(Error::MuOutOfRange { mu });
    }
    let correction =
        rule.try_integrate(0.0, 1.0, |tau| Ok(g.eval(tau)? * kernel_profile(tau, &h, rule)?))?
            / (1.0 - mu);
    let n = u.n();
    let step = u.step();
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        let t = (i as f64 * step).min(1.0);
        values.push(kernel_profile(t, &h, rule)? + t * t * correction);
    }
    GridFunction::new(values)
}

/// Cone-membership slack: `min u on [theta, 1-theta] - gamma * ||u||`.
/// Nonnegative slack certifies membership in the cone on the grid.
pub fn cone_slack(u: &GridFunction, constants: &ConeConstants) -> f64 {
    let theta = constants.theta;
    u.min_on(theta, 1.0 - theta) - constants.gamma * u.sup_norm()
}

/// Slack tolerance for the norm-bound report.
pub const NORM_BOUND_TOLERANCE: f64 = 1e-10;

/// Two-sided norm bounds on the linear solution for nonnegative data h:
/// the sup norm against `(1-mu+alpha)/(1-mu) ∫ s(1-s)^2 h` and the window
/// minimum against `(theta^2/2) (1-mu+beta)/(1-mu) ∫ s(1-s)^2 h`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NormBoundReport {
    pub norm: f64,
    pub window_min: f64,
    pub upper_bound: f64,
    pub lower_bound: f64,
    /// `upper_bound - norm`; must be >= -1e-10.
    pub upper_slack: f64,
    /// `window_min - lower_bound`; must be >= -1e-10.
    pub lower_slack: f64,
    pub tolerance: f64,
}

impl NormBoundReport {
    pub fn ok(&self) -> bool {
        self.upper_slack >= -NORM_BOUND_TOLERANCE && self.lower_slack >= -NORM_BOUND_TOLERANCE
    }
}

pub fn norm_bound_check(
    h: &ExprAst,
    g: &ExprAst,
    theta: f64,
    n: usize,
    rule: &QuadratureRule,
) -> Result<NormBoundReport, Error> {
    check_theta(theta)?;
    let constants = cone_constants(g, theta, rule)?;
    let mu = constants.mu;
    if mu >= 1.0 {
        return Err(Error::MuOutOfRange { mu });
    }
    let u = solve_linear(HSource::Expr(h), g, n, rule)?;
    let envelope_moment =
        rule.try_integrate(0.0, 1.0, |s| Ok(s * (1.0 - s) * (1.0 - s) * h.eval(s)?))?;
    let upper_bound = (1.0 - mu + constants.alpha) / (1.0 - mu) * envelope_moment;
    let lower_bound =
        0.5 * theta * theta * (1.0 - mu + constants.beta) / (1.0 - mu) * envelope_moment;
    let norm = u.sup_norm();
    let window_min = u.min_on(theta, 1.0 - theta);
    Ok(NormBoundReport {
        norm,
        window_min,
        upper_bound,
        lower_bound,
        upper_slack: upper_bound - norm,
        lower_slack: window_min - lower_bound,
        tolerance: NORM_BOUND_TOLERANCE,
    })
}
