//! Piecewise-linear tables with flat extension beyond the end nodes.

use crate::error::{Error, Result};

/// A sampled function `y(x)` interpolated linearly between nodes and held
/// constant outside `[x_first, x_last]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// cumulative integral from `xs[0]` to each node
    cumulative: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidParameter(format!(
                "table has {} abscissae but {} values",
                xs.len(),
                ys.len()
            )));
        }
        if xs.is_empty() {
            return Err(Error::InvalidParameter("table is empty".into()));
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "table contains non-finite entries".into(),
            ));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "table abscissae must be strictly increasing".into(),
            ));
        }
        let mut cumulative = Vec::with_capacity(xs.len());
        cumulative.push(0.0);
        for k in 1..xs.len() {
            let seg = 0.5 * (ys[k] + ys[k - 1]) * (xs[k] - xs[k - 1]);
            cumulative.push(cumulative[k - 1] + seg);
        }
        Ok(Self { xs, ys, cumulative })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let k = self.segment(x);
        let t = (x - self.xs[k]) / (self.xs[k + 1] - self.xs[k]);
        self.ys[k] + t * (self.ys[k + 1] - self.ys[k])
    }

    /// Exact integral of the interpolant (with flat extension) from `xs[0]` to `x`.
    fn antiderivative(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0] * (x - self.xs[0]);
        }
        if x >= self.xs[n - 1] {
            return self.cumulative[n - 1] + self.ys[n - 1] * (x - self.xs[n - 1]);
        }
        let k = self.segment(x);
        let y = self.eval(x);
        self.cumulative[k] + 0.5 * (self.ys[k] + y) * (x - self.xs[k])
    }

    /// Exact integral of the interpolant over `[a, b]`.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        self.antiderivative(b) - self.antiderivative(a)
    }

    pub fn min_value(&self) -> f64 {
        self.ys.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs(&self) -> f64 {
        self.ys.iter().fold(0.0, |m, y| m.max(y.abs()))
    }

    // index k with xs[k] <= x < xs[k+1]; caller guarantees x is interior
    fn segment(&self, x: f64) -> usize {
        match self.xs.binary_search_by(|p| p.partial_cmp(&x).unwrap()) {
            Ok(k) => k.min(self.xs.len() - 2),
            Err(k) => k - 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_and_clamps() {
        let t = PiecewiseLinear::new(vec![0.2, 0.4, 0.8], vec![1.0, 3.0, 2.0]).unwrap();
        assert_eq!(t.eval(0.0), 1.0);
        assert!((t.eval(0.3) - 2.0).abs() < 1e-15);
        assert_eq!(t.eval(0.4), 3.0);
        assert!((t.eval(0.6) - 2.5).abs() < 1e-15);
        assert_eq!(t.eval(5.0), 2.0);
    }

    #[test]
    fn integral_matches_trapezoid_pieces() {
        let t = PiecewiseLinear::new(vec![0.2, 0.4, 0.8], vec![1.0, 3.0, 2.0]).unwrap();
        // flat 1 on [0,0.2], trapezoids, flat 2 on [0.8,1]
        let expected = 0.2 * 1.0 + 0.2 * 2.0 + 0.4 * 2.5 + 0.2 * 2.0;
        assert!((t.integral(0.0, 1.0) - expected).abs() < 1e-14);
        assert!((t.integral(0.3, 0.3)).abs() < 1e-15);
        // partial segment: integral over [0.2,0.3] of 1 + 10(x-0.2)
        assert!((t.integral(0.2, 0.3) - 0.15).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(PiecewiseLinear::new(vec![], vec![]).is_err());
        assert!(PiecewiseLinear::new(vec![0.0, 0.0], vec![1.0, 2.0]).is_err());
        assert!(PiecewiseLinear::new(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(PiecewiseLinear::new(vec![0.0, f64::NAN], vec![1.0, 2.0]).is_err());
    }
}
