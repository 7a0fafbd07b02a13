//! The Green's function of the linear problem, its weight function, and
//! the cone constants derived from the boundary weight g.

use serde::Serialize;

use crate::error::Error;
use crate::expr::ExprAst;
use crate::quadrature::QuadratureRule;

/// Slack below which a sampled kernel inequality counts as violated.
pub const BOUND_TOLERANCE: f64 = 1e-14;

/// Green's function G(t, s) of u''' + h = 0 with u(0) = u'(0) = 0 and the
/// integral condition folded out:
///
/// ```text
/// G(t,s) = (1/2) s (1-t) (2t - ts - s)   for s <= t,
///          (1/2) (1-s)^2 t^2             for t <= s.
/// ```
///
/// The branches agree on the diagonal; at t = s the `t <= s` branch is
/// taken so evaluation is deterministic. Panics when an argument leaves
/// [0, 1].
pub fn green_eval(t: f64, s: f64) -> f64 {
    assert!(
        (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&s),
        "green_eval: arguments ({t}, {s}) outside [0,1]^2"
    );
    if t <= s {
        0.5 * (1.0 - s) * (1.0 - s) * t * t
    } else {
        0.5 * s * (1.0 - t) * (2.0 * t - t * s - s)
    }
}

/// Lower-bound weight rho(t) = (1/2) min{t^2, t(1-t)}.
pub fn rho(t: f64) -> f64 {
    assert!((0.0..=1.0).contains(&t), "rho: argument {t} outside [0,1]");
    0.5 * if t <= 0.5 { t * t } else { t * (1.0 - t) }
}

/// Constants derived from the boundary weight g and window parameter theta:
/// mu and alpha are the second moment and mass of g, beta its windowed mass
/// scaled by theta^2, and gamma the cone ratio
/// `(theta^2 / 2) (1 - mu + beta) / (1 - mu + alpha)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConeConstants {
    pub theta: f64,
    pub mu: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Whether 0 < mu < 1 holds. A violation is reported here rather than
    /// as an error so that mu = 0 paths (e.g. g = 0 linear tests) stay
    /// usable.
    pub h2_satisfied: bool,
}

/// Validate theta in the open interval (0, 1/2).
pub fn check_theta(theta: f64) -> Result<(), Error> {
    if !(theta > 0.0 && theta < 0.5) {
        return Err(Error::ThetaRange { theta });
    }
    Ok(())
}

/// Compute the cone constants for a boundary weight `g` (an expression in
/// t). Fails hard if g is negative anywhere sampled; an (H2) violation of
/// the mu range is only flagged.
pub fn cone_constants(
    g: &ExprAst,
    theta: f64,
    rule: &QuadratureRule,
) -> Result<ConeConstants, Error> {
    check_theta(theta)?;
    let g_at = |t: f64| -> Result<f64, Error> {
        let v = g.eval(t)?;
        if v < 0.0 {
            return Err(Error::NegativeWeight { t, value: v });
        }
        Ok(v)
    };
    let mu = rule.try_integrate(0.0, 1.0, |t| Ok(t * t * g_at(t)?))?;
    let alpha = rule.try_integrate(0.0, 1.0, g_at)?;
    let beta = theta * theta * rule.try_integrate(theta, 1.0 - theta, g_at)?;
    let gamma = 0.5 * theta * theta * (1.0 - mu + beta) / (1.0 - mu + alpha);
    Ok(ConeConstants {
        theta,
        mu,
        alpha,
        beta,
        gamma,
        h2_satisfied: mu > 0.0 && mu < 1.0,
    })
}

/// Result of sampling the kernel bounds on a uniform grid of [0,1]^2.
///
/// `worst_lower_slack` / `worst_upper_slack` track the two-sided envelope
/// `rho(t) s(1-s)^2 <= G(t,s) <= s(1-s)^2`; `worst_window_slack` tracks the
/// window bound `(theta^2/2) s(1-s)^2 <= G(t,s)` for t in [theta, 1-theta].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct KernelBoundReport {
    pub samples: usize,
    pub theta: f64,
    pub tolerance: f64,
    pub worst_lower_slack: f64,
    pub worst_upper_slack: f64,
    pub worst_window_slack: f64,
    pub violations: usize,
}

impl KernelBoundReport {
    pub fn ok(&self) -> bool {
        self.violations == 0
    }
}

/// Check the kernel envelope inequalities on a `samples x samples` uniform
/// grid of [0,1]^2 (endpoints included).
pub fn verify_kernel_bounds(samples: usize, theta: f64) -> Result<KernelBoundReport, Error> {
    if samples < 4 {
        return Err(Error::SamplesTooSmall { samples });
    }
    check_theta(theta)?;
    let step = 1.0 / (samples as f64 - 1.0);
    let window_floor = 0.5 * theta * theta;
    let mut worst_lower = f64::INFINITY;
    let mut worst_upper = f64::INFINITY;
    let mut worst_window = f64::INFINITY;
    let mut violations = 0usize;
    for i in 0..samples {
        let t = (i as f64 * step).min(1.0);
        let rho_t = rho(t);
        let in_window = t >= theta - 1e-15 && t <= 1.0 - theta + 1e-15;
        for j in 0..samples {
            let s = (j as f64 * step).min(1.0);
            let envelope = s * (1.0 - s) * (1.0 - s);
            let g = green_eval(t, s);
            let lower = g - rho_t * envelope;
            let upper = envelope - g;
            worst_lower = worst_lower.min(lower);
            worst_upper = worst_upper.min(upper);
            if lower < -BOUND_TOLERANCE || upper < -BOUND_TOLERANCE || g < 0.0 {
                violations += 1;
            }
            if in_window {
                let slack = g - window_floor * envelope;
                worst_window = worst_window.min(slack);
                if slack < -BOUND_TOLERANCE {
                    violations += 1;
                }
            }
        }
    }
    Ok(KernelBoundReport {
        samples,
        theta,
        tolerance: BOUND_TOLERANCE,
        worst_lower_slack: worst_lower,
        worst_upper_slack: worst_upper,
        worst_window_slack: worst_window,
        violations,
    })
}
