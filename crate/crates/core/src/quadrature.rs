//! Composite quadrature over [0, 1] and sub-intervals.
//!
//! Two schemes: composite 5-node Gauss–Legendre (default, degree of
//! exactness 9 per panel) for integrals of smooth integrands, and composite
//! Simpson for data already sampled on the uniform grid. Panel sums are
//! accumulated in ascending panel order for bit-reproducibility.

use serde::Serialize;

use crate::error::Error;
use crate::grid::GridFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    GaussLegendre5,
    Simpson,
}

/// A composite rule: reference nodes/weights on [0, 1], replicated over
/// `panels` equal panels of the integration interval.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    scheme: Scheme,
    panels: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// Composite 5-node Gauss–Legendre rule.
    pub fn gauss_legendre(panels: usize) -> Result<Self, Error> {
        if panels == 0 {
            return Err(Error::PanelCount);
        }
        // nodes/weights on [-1, 1]
        let a = (5.0 - 2.0 * (10.0f64 / 7.0).sqrt()).sqrt() / 3.0;
        let b = (5.0 + 2.0 * (10.0f64 / 7.0).sqrt()).sqrt() / 3.0;
        let wa = (322.0 + 13.0 * 70.0f64.sqrt()) / 900.0;
        let wb = (322.0 - 13.0 * 70.0f64.sqrt()) / 900.0;
        let ref_nodes = [-b, -a, 0.0, a, b];
        let ref_weights = [wb, wa, 128.0 / 225.0, wa, wb];
        Ok(QuadratureRule {
            scheme: Scheme::GaussLegendre5,
            panels,
            nodes: ref_nodes.iter().map(|x| 0.5 * (x + 1.0)).collect(),
            weights: ref_weights.iter().map(|w| 0.5 * w).collect(),
        })
    }

    /// Composite Simpson rule (3 nodes per panel, endpoints included).
    pub fn simpson(panels: usize) -> Result<Self, Error> {
        if panels == 0 {
            return Err(Error::PanelCount);
        }
        Ok(QuadratureRule {
            scheme: Scheme::Simpson,
            panels,
            nodes: vec![0.0, 0.5, 1.0],
            weights: vec![1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0],
        })
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    /// Reference nodes on [0, 1].
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Reference weights; they sum to 1 (the reference panel width).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integrate a fallible integrand over [a, b]. Integrand failures are
    /// wrapped with the quadrature node where they occurred.
    pub fn try_integrate(
        &self,
        a: f64,
        b: f64,
        f: impl Fn(f64) -> Result<f64, Error>,
    ) -> Result<f64, Error> {
        if !(a.is_finite() && b.is_finite()) || a > b {
            return Err(Error::BadInterval { a, b });
        }
        if a == b {
            return Ok(0.0);
        }
        let width = (b - a) / self.panels as f64;
        let mut total = 0.0;
        for p in 0..self.panels {
            let left = a + p as f64 * width;
            let mut panel = 0.0;
            for (&node, &weight) in self.nodes.iter().zip(&self.weights) {
                let x = left + node * width;
                let v = f(x).map_err(|e| e.at_node(x))?;
                panel += weight * v;
            }
            total += panel * width;
        }
        Ok(total)
    }

    /// Integrate an infallible integrand over [a, b].
    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        self.try_integrate(a, b, |x| Ok(f(x)))
            .expect("infallible integrand")
    }
}

/// Composite-Simpson integral of grid samples over `[a, b]` within [0, 1].
///
/// Interval endpoints that are not grid nodes are linearly interpolated
/// onto the grid; whole-node spans use Simpson (plus a 3/8 panel when the
/// node count is even).
pub fn integrate_grid(u: &GridFunction, a: f64, b: f64) -> Result<f64, Error> {
    if !(a.is_finite() && b.is_finite()) || a > b || a < -1e-12 || b > 1.0 + 1e-12 {
        return Err(Error::BadInterval { a, b });
    }
    let a = a.clamp(0.0, 1.0);
    let b = b.clamp(0.0, 1.0);
    let n = u.n();
    let h = u.step();
    // positions in units of the grid spacing, snapped onto nearby nodes
    let snap = |p: f64| {
        let r = p.round();
        if (p - r).abs() < 1e-9 {
            r
        } else {
            p
        }
    };
    let pa = snap(a * (n as f64 - 1.0));
    let pb = snap(b * (n as f64 - 1.0));
    let i0 = pa.ceil() as usize;
    let i1 = pb.floor() as usize;
    if i1 < i0 || (i1 == i0 && pa > i0 as f64) {
        // both endpoints inside one cell
        return Ok((b - a) * 0.5 * (u.eval_linear(a) + u.eval_linear(b)));
    }
    let mut total = 0.0;
    if pa < i0 as f64 {
        let ta = i0 as f64 * h;
        total += (ta - a) * 0.5 * (u.eval_linear(a) + u.value(i0));
    }
    if pb > i1 as f64 {
        let tb = i1 as f64 * h;
        total += (b - tb) * 0.5 * (u.value(i1) + u.eval_linear(b));
    }
    total += simpson_span(u, i0, i1);
    Ok(total)
}

// Simpson over the node span [i0, i1]; falls back to a 3/8 tail (or a
// single trapezoid for a one-panel span) when the panel count is odd.
fn simpson_span(u: &GridFunction, i0: usize, i1: usize) -> f64 {
    let h = u.step();
    let m = i1 - i0;
    if m == 0 {
        return 0.0;
    }
    if m == 1 {
        return h * 0.5 * (u.value(i0) + u.value(i1));
    }
    let (simpson_end, tail38) = if m.is_multiple_of(2) { (i1, false) } else { (i1 - 3, true) };
    let mut total = 0.0;
    let mut i = i0;
    while i + 2 <= simpson_end {
        total += h / 3.0 * (u.value(i) + 4.0 * u.value(i + 1) + u.value(i + 2));
        i += 2;
    }
    if tail38 {
        let j = simpson_end;
        total += 3.0 * h / 8.0
            * (u.value(j) + 3.0 * u.value(j + 1) + 3.0 * u.value(j + 2) + u.value(j + 3));
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn weights_sum_to_panel_width() {
        for rule in [
            QuadratureRule::gauss_legendre(1).unwrap(),
            QuadratureRule::simpson(1).unwrap(),
        ] {
            assert!(rule.weights().iter().all(|&w| w > 0.0));
            let sum: f64 = rule.weights().iter().sum();
            assert!((sum - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn constant_integral_is_interval_length() {
        let rule = QuadratureRule::gauss_legendre(64).unwrap();
        assert!((rule.integrate(0.2, 0.9, |_| 1.0) - 0.7).abs() < 1e-14);
        let rule = QuadratureRule::simpson(64).unwrap();
        assert!((rule.integrate(0.0, 1.0, |_| 1.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn weight_moment_integrals() {
        let rule = QuadratureRule::gauss_legendre(64).unwrap();
        let g4 = parse("t^6", "t").unwrap();
        let v = rule
            .try_integrate(0.0, 1.0, |t| Ok(g4.eval(t)?))
            .unwrap();
        assert!((v - 1.0 / 7.0).abs() < 1e-15);
        let g6 = parse("s^8", "s").unwrap();
        let v = rule
            .try_integrate(0.0, 1.0, |s| Ok(g6.eval(s)?))
            .unwrap();
        assert!((v - 1.0 / 9.0).abs() < 1e-15);
        assert_eq!(rule.integrate(0.0, 1.0, |_| 0.0), 0.0);
    }

    #[test]
    fn gauss_degree_of_exactness() {
        // 5-node Gauss-Legendre is exact through degree 9 per panel
        let rule = QuadratureRule::gauss_legendre(3).unwrap();
        for deg in 0..=9 {
            let exact = 1.0 / (deg as f64 + 1.0);
            let v = rule.integrate(0.0, 1.0, |t| t.powi(deg));
            assert!((v - exact).abs() < 1e-13, "degree {deg}: {v} vs {exact}");
        }
    }

    #[test]
    fn refinement_reduces_error() {
        let exact = 1.0 / 7.0;
        let coarse = QuadratureRule::simpson(4)
            .unwrap()
            .integrate(0.0, 1.0, |t| t.powi(6));
        let fine = QuadratureRule::simpson(8)
            .unwrap()
            .integrate(0.0, 1.0, |t| t.powi(6));
        assert!((fine - exact).abs() < (coarse - exact).abs());
    }

    #[test]
    fn integrand_error_carries_node_location() {
        let rule = QuadratureRule::gauss_legendre(2).unwrap();
        let expr = parse("ln(t-2)", "t").unwrap();
        let err = rule
            .try_integrate(0.0, 1.0, |t| Ok(expr.eval(t)?))
            .unwrap_err();
        match err {
            Error::Integrand { at, .. } => assert!((0.0..=1.0).contains(&at)),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn grid_integrals() {
        let one = GridFunction::constant(101, 1.0).unwrap();
        assert!((integrate_grid(&one, 0.0, 1.0).unwrap() - 1.0).abs() < 1e-14);

        let lin = GridFunction::from_fn(101, |t| t).unwrap();
        assert!((integrate_grid(&lin, 0.0, 1.0).unwrap() - 0.5).abs() < 1e-12);

        let sq = GridFunction::from_fn(101, |t| t * t).unwrap();
        let v = integrate_grid(&sq, 0.25, 0.75).unwrap();
        assert!((v - 13.0 / 96.0).abs() < 1e-10, "got {v}");
    }

    #[test]
    fn grid_integral_with_off_node_endpoints() {
        // endpoints interpolated linearly onto the grid
        let lin = GridFunction::from_fn(101, |t| 2.0 * t + 1.0).unwrap();
        let v = integrate_grid(&lin, 0.103, 0.897).unwrap();
        let exact = (0.897f64.powi(2) + 0.897) - (0.103f64.powi(2) + 0.103);
        assert!((v - exact).abs() < 1e-12, "got {v} vs {exact}");
    }

    #[test]
    fn bad_intervals_are_rejected() {
        let u = GridFunction::constant(5, 1.0).unwrap();
        assert!(integrate_grid(&u, 0.5, 0.4).is_err());
        assert!(integrate_grid(&u, -0.1, 0.5).is_err());
        let rule = QuadratureRule::gauss_legendre(4).unwrap();
        assert!(rule.try_integrate(1.0, 0.0, |_| Ok(0.0)).is_err());
    }
}
