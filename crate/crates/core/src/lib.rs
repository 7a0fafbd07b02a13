//! Positive solutions of the third-order integral boundary value problem
//!
//! ```text
//! u'''(t) + f(u(t)) = 0,   t in (0, 1),
//! u(0) = u'(0) = 0,        u(1) = ∫₀¹ g(s) u(s) ds,
//! ```
//!
//! via the explicit Green's function of the linear problem and a
//! fixed-point operator on a positivity cone. The crate provides:
//!
//! - the kernel `G(t, s)`, its pointwise bounds, and the cone constants
//!   derived from the boundary weight `g` ([`kernel`]),
//! - the linear solve and the nonlinear fixed-point operator ([`greens`]),
//! - a damped Picard solver and an independent Newton collocation solver
//!   with an amplitude sweep ([`nonlinear`]),
//! - asymptotic growth classification of `f` at 0 and infinity
//!   ([`classify`]),
//! - a small expression language for `f(u)` and `g(t)` ([`expr`]).

pub mod classify;
pub mod error;
pub mod expr;
pub mod greens;
pub mod grid;
pub mod kernel;
pub mod nonlinear;
pub mod quadrature;

pub use classify::{
    check_hypotheses, classify_growth, classify_growth_with, GrowthReport, GrowthVerdict,
    HypothesisReport, LimitEstimate,
};
pub use error::{AttemptOutcome, Error};
pub use expr::{parse, ExprAst};
pub use greens::{
    apply_operator, cone_slack, norm_bound_check, solve_linear, HSource, NormBoundReport,
};
pub use grid::GridFunction;
pub use kernel::{
    cone_constants, green_eval, rho, verify_kernel_bounds, ConeConstants, KernelBoundReport,
};
pub use nonlinear::{
    find_positive_solution, newton_collocation, picard_solve, Method, ProblemSpec, SolveConfig,
    SolveReport,
};
pub use quadrature::{integrate_grid, QuadratureRule, Scheme};
