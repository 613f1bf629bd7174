//! Natural cubic spline through tabulated samples.

use crate::error::{domain, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    knots: Vec<f64>,
    values: Vec<f64>,
    /// Second derivatives at the knots (zero at both ends).
    curvature: Vec<f64>,
}

impl CubicSpline {
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let n = knots.len();
        if n < 3 || values.len() != n {
            return Err(domain("a spline needs at least three (t, value) samples"));
        }
        if knots.iter().chain(values.iter()).any(|v| !v.is_finite()) {
            return Err(domain("spline samples must be finite"));
        }
        if knots.windows(2).any(|w| w[1] <= w[0]) {
            return Err(domain("spline knots must be strictly increasing"));
        }

        // Thomas algorithm on the interior second derivatives.
        let m = n - 2;
        let mut diag = vec![0.0; m];
        let mut upper = vec![0.0; m];
        let mut rhs = vec![0.0; m];
        for i in 0..m {
            let h0 = knots[i + 1] - knots[i];
            let h1 = knots[i + 2] - knots[i + 1];
            diag[i] = 2.0 * (h0 + h1);
            upper[i] = h1;
            rhs[i] = 6.0 * ((values[i + 2] - values[i + 1]) / h1 - (values[i + 1] - values[i]) / h0);
        }
        for i in 1..m {
            let lower = knots[i + 1] - knots[i];
            let w = lower / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        let mut curvature = vec![0.0; n];
        for i in (0..m).rev() {
            let next = if i + 1 < m { curvature[i + 2] } else { 0.0 };
            curvature[i + 1] = (rhs[i] - upper[i] * next) / diag[i];
        }
        Ok(Self { knots, values, curvature })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    fn interval(&self, t: f64) -> usize {
        let last = self.knots.len() - 2;
        match self.knots.binary_search_by(|k| k.total_cmp(&t)) {
            Ok(i) => i.min(last),
            Err(i) => i.saturating_sub(1).min(last),
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        let i = self.interval(t);
        let (x0, x1) = (self.knots[i], self.knots[i + 1]);
        let h = x1 - x0;
        let a = (x1 - t) / h;
        let b = (t - x0) / h;
        a * self.values[i]
            + b * self.values[i + 1]
            + ((a * a * a - a) * self.curvature[i] + (b * b * b - b) * self.curvature[i + 1]) * h * h / 6.0
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let i = self.interval(t);
        let (x0, x1) = (self.knots[i], self.knots[i + 1]);
        let h = x1 - x0;
        let a = (x1 - t) / h;
        let b = (t - x0) / h;
        (self.values[i + 1] - self.values[i]) / h
            - (3.0 * a * a - 1.0) / 6.0 * h * self.curvature[i]
            + (3.0 * b * b - 1.0) / 6.0 * h * self.curvature[i + 1]
    }
}
