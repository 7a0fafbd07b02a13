//! Functions sampled on a uniform grid over [0, 1].

use serde::Serialize;

use crate::error::Error;
use crate::expr::ExprAst;

/// Values of a function on the uniform grid `t_i = i / (n - 1)`.
///
/// The node count is odd and at least 3 so that composite Simpson applies
/// to the whole grid, and all values are finite. The sup norm of the grid
/// function is the discrete counterpart of `sup |u(t)|` on [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridFunction {
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(values: Vec<f64>) -> Result<Self, Error> {
        let n = values.len();
        if n < 3 {
            return Err(Error::GridTooSmall { n, min: 3 });
        }
        if n.is_multiple_of(2) {
            return Err(Error::GridEven { n });
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::GridNonFinite { index, value });
        }
        Ok(GridFunction { values })
    }

    pub fn constant(n: usize, c: f64) -> Result<Self, Error> {
        Self::new(vec![c; n])
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self, Error> {
        let step = 1.0 / (n as f64 - 1.0);
        Self::new((0..n).map(|i| f(i as f64 * step)).collect())
    }

    /// Sample a parsed expression at the grid nodes.
    pub fn from_expr(n: usize, expr: &ExprAst) -> Result<Self, Error> {
        let step = 1.0 / (n as f64 - 1.0);
        let values: Result<Vec<f64>, _> = (0..n).map(|i| expr.eval(i as f64 * step)).collect();
        Self::new(values?)
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn step(&self) -> f64 {
        1.0 / (self.n() as f64 - 1.0)
    }

    pub fn node(&self, i: usize) -> f64 {
        i as f64 * self.step()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    /// Discrete sup norm, `max_i |u(t_i)|`.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, &v| m.min(v))
    }

    /// Minimum over the nodes with `t_i` in `[a, b]` (inclusive, with a
    /// small tolerance so interval endpoints that coincide with nodes are
    /// kept).
    pub fn min_on(&self, a: f64, b: f64) -> f64 {
        let mut m = f64::INFINITY;
        for (i, &v) in self.values.iter().enumerate() {
            let t = self.node(i);
            if t >= a - 1e-12 && t <= b + 1e-12 {
                m = m.min(v);
            }
        }
        m
    }

    /// Linear interpolation at `x` in [0, 1].
    pub fn eval_linear(&self, x: f64) -> f64 {
        let n = self.n();
        let p = (x.clamp(0.0, 1.0)) * (n as f64 - 1.0);
        let i = (p.floor() as usize).min(n - 2);
        let w = p - i as f64;
        self.values[i] * (1.0 - w) + self.values[i + 1] * w
    }

    /// Piecewise-cubic Lagrange interpolation at `x` in [0, 1], using the
    /// four grid nodes nearest to `x`. Fourth-order accurate for smooth
    /// data, which matches the Simpson order used elsewhere.
    pub fn eval_cubic(&self, x: f64) -> f64 {
        let n = self.n();
        let p = (x.clamp(0.0, 1.0)) * (n as f64 - 1.0);
        let cell = (p.floor() as usize).min(n - 2);
        // stencil start: the cell centred in a 4-node window, clamped at
        // the boundaries
        let start = cell.saturating_sub(1).min(n - 4);
        let s = p - start as f64; // local coordinate in node spacing units
        let mut acc = 0.0;
        for j in 0..4 {
            let mut basis = 1.0;
            for k in 0..4 {
                if k != j {
                    basis *= (s - k as f64) / (j as f64 - k as f64);
                }
            }
            acc += basis * self.values[start + j];
        }
        acc
    }
}
