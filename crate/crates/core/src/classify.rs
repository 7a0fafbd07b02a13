//! Growth classification of the nonlinearity from the ratio f(u)/u at both
//! ends of the positive axis, plus the two hypothesis checks.

use serde::Serialize;

use crate::error::Error;
use crate::expr::ExprAst;
use crate::kernel::{check_theta, cone_constants};
use crate::quadrature::QuadratureRule;

/// Ratio below which a decreasing ladder tail counts as limit 0, and the
/// reciprocal threshold for limit infinity.
const ZERO_THRESHOLD: f64 = 1e-6;
const INF_THRESHOLD: f64 = 1e6;
/// A monotone tail whose consecutive ratios stay below this factor decays
/// geometrically in the ladder and therefore converges to 0 (symmetrically,
/// above 1/DECAY_FACTOR it diverges). Point samples cannot prove a limit;
/// this covers the standard power/exponential/logarithmic envelopes.
const DECAY_FACTOR: f64 = 0.9;

const DEFAULT_ZERO_RUNGS: u32 = 12; // u = 10^-1 .. 10^-12
const DEFAULT_INF_RUNGS: u32 = 8; // u = 10^0 .. 10^8

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum LimitEstimate {
    Zero,
    Infinite,
    Finite(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthVerdict {
    Superlinear,
    Sublinear,
    Indeterminate,
}

/// Classification report: limit estimates, the verdict they imply, and the
/// sampled ratio tables behind them.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthReport {
    pub f0: LimitEstimate,
    pub f_inf: LimitEstimate,
    pub verdict: GrowthVerdict,
    /// (u, f(u)/u) pairs on the descending ladder toward 0+.
    pub zero_samples: Vec<[f64; 2]>,
    /// (u, f(u)/u) pairs on the ascending ladder toward infinity.
    pub inf_samples: Vec<[f64; 2]>,
}

fn decide(samples: &[[f64; 2]]) -> LimitEstimate {
    // non-finite f(u)/u means f overflowed: evidence for an infinite limit
    if samples.iter().any(|p| !p[1].is_finite()) {
        return LimitEstimate::Infinite;
    }
    let ratios: Vec<f64> = samples.iter().map(|p| p[1]).collect();
    let tail = &ratios[ratios.len().saturating_sub(4)..];
    let last = *tail.last().expect("ladder is non-empty");
    let decreasing = tail.windows(2).all(|w| w[1] < w[0]);
    let increasing = tail.windows(2).all(|w| w[1] > w[0]);
    let geometric_decay = tail
        .windows(2)
        .all(|w| w[0] > 0.0 && w[1] <= DECAY_FACTOR * w[0]);
    let geometric_growth = tail
        .windows(2)
        .all(|w| w[0] > 0.0 && w[1] >= w[0] / DECAY_FACTOR);
    if decreasing && (last < ZERO_THRESHOLD || geometric_decay) {
        LimitEstimate::Zero
    } else if increasing && (last >= INF_THRESHOLD || geometric_growth) {
        LimitEstimate::Infinite
    } else {
        LimitEstimate::Finite(last)
    }
}

/// Estimate f0 and f_inf on geometric ladders and classify the growth
/// regime. `zero_rungs` extends the descending ladder to u = 10^-k,
/// `inf_rungs` the ascending one to u = 10^k; the ascending ladder stops
/// early once f overflows (overflow counts as evidence for f_inf = ∞).
pub fn classify_growth_with(
    f: &ExprAst,
    zero_rungs: u32,
    inf_rungs: u32,
) -> Result<GrowthReport, Error> {
    let mut zero_samples = Vec::new();
    for k in 1..=zero_rungs {
        let u = 10.0_f64.powi(-(k as i32));
        let fu = f.eval(u)?;
        zero_samples.push([u, fu / u]);
    }
    let mut inf_samples = Vec::new();
    for k in 0..=inf_rungs {
        let u = 10.0_f64.powi(k as i32);
        let fu = f.eval(u)?;
        let ratio = fu / u;
        inf_samples.push([u, ratio]);
        if !ratio.is_finite() {
            break;
        }
    }
    let f0 = decide(&zero_samples);
    let f_inf = decide(&inf_samples);
    let verdict = match (f0, f_inf) {
        (LimitEstimate::Zero, LimitEstimate::Infinite) => GrowthVerdict::Superlinear,
        (LimitEstimate::Infinite, LimitEstimate::Zero) => GrowthVerdict::Sublinear,
        _ => GrowthVerdict::Indeterminate,
    };
    Ok(GrowthReport {
        f0,
        f_inf,
        verdict,
        zero_samples,
        inf_samples,
    })
}

pub fn classify_growth(f: &ExprAst) -> Result<GrowthReport, Error> {
    classify_growth_with(f, DEFAULT_ZERO_RUNGS, DEFAULT_INF_RUNGS)
}

/// Hypothesis check results. The continuity/nonnegativity of f can only be
/// sampled, never proven, hence the fixed note.
#[derive(Debug, Clone, Serialize)]
pub struct HypothesisReport {
    pub h1_passed: bool,
    pub h1_witness: Option<[f64; 2]>,
    pub h1_note: &'static str,
    pub h2_passed: bool,
    pub mu: f64,
}

impl HypothesisReport {
    pub fn all_passed(&self) -> bool {
        self.h1_passed && self.h2_passed
    }
}

/// Sample f for nonnegativity on [0, 100] and check 0 < mu < 1.
pub fn check_hypotheses(
    f: &ExprAst,
    g: &ExprAst,
    theta: f64,
    rule: &QuadratureRule,
) -> Result<HypothesisReport, Error> {
    check_theta(theta)?;
    const SAMPLES: usize = 10_000;
    let mut h1_passed = true;
    let mut h1_witness = None;
    for k in 0..SAMPLES {
        let u = 100.0 * k as f64 / (SAMPLES as f64 - 1.0);
        match f.eval(u) {
            Ok(v) if v >= 0.0 => {}
            Ok(v) => {
                h1_passed = false;
                h1_witness = Some([u, v]);
                break;
            }
            Err(_) => {
                h1_passed = false;
                h1_witness = Some([u, f64::NAN]);
                break;
            }
        }
    }
    let constants = cone_constants(g, theta, rule)?;
    Ok(HypothesisReport {
        h1_passed,
        h1_witness,
        h1_note: "sampled, not proven",
        h2_passed: constants.h2_satisfied,
        mu: constants.mu,
    })
}
