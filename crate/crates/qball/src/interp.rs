//! Cubic-spline interpolation on a strictly increasing grid (not-a-knot end
//! conditions), with first-derivative evaluation. Backs off-grid lookups of
//! sampled profiles during shooting integration and Picard iteration.

use crate::error::{QballError, Result};

#[derive(Debug, Clone)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    /// second derivatives at the nodes
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n < 4 || y.len() != n {
            return Err(QballError::Domain(format!(
                "spline needs >= 4 matched nodes, got {} / {}",
                n,
                y.len()
            )));
        }
        if x.windows(2).any(|w| w[1] <= w[0]) {
            return Err(QballError::Domain("spline grid must be strictly increasing".into()));
        }

        // Tridiagonal system for the interior second derivatives m_1..m_{n-2};
        // not-a-knot folds m_0 and m_{n-1} into the first and last rows:
        //   m_0     = (1 + h0/h1)·m_1 − (h0/h1)·m_2
        //   m_{n-1} = (1 + hL/hK)·m_{n-2} − (hL/hK)·m_{n-3}
        // with h0, h1 the first two intervals and hL, hK the last two.
        let k = n - 2; // unknowns m_1..m_{n-2}
        let mut sub = vec![0.0; k];
        let mut diag = vec![0.0; k];
        let mut sup = vec![0.0; k];
        let mut rhs = vec![0.0; k];
        for (j, i) in (1..n - 1).enumerate() {
            let h0 = x[i] - x[i - 1];
            let h1 = x[i + 1] - x[i];
            sub[j] = h0;
            diag[j] = 2.0 * (h0 + h1);
            sup[j] = h1;
            rhs[j] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
        }
        let h0 = x[1] - x[0];
        let h1 = x[2] - x[1];
        let r0 = h0 / h1;
        diag[0] += h0 * (1.0 + r0);
        sup[0] -= h0 * r0;
        sub[0] = 0.0;
        let hl = x[n - 1] - x[n - 2];
        let hk = x[n - 2] - x[n - 3];
        let rl = hl / hk;
        diag[k - 1] += hl * (1.0 + rl);
        sub[k - 1] -= hl * rl;
        sup[k - 1] = 0.0;

        // Thomas algorithm on the reduced system
        let mut c = vec![0.0; k];
        let mut d = vec![0.0; k];
        if diag[0] == 0.0 {
            return Err(QballError::Numerical("singular spline system".into()));
        }
        c[0] = sup[0] / diag[0];
        d[0] = rhs[0] / diag[0];
        for i in 1..k {
            let denom = diag[i] - sub[i] * c[i - 1];
            if denom == 0.0 {
                return Err(QballError::Numerical("singular spline system".into()));
            }
            c[i] = if i < k - 1 { sup[i] / denom } else { 0.0 };
            d[i] = (rhs[i] - sub[i] * d[i - 1]) / denom;
        }
        let mut m = vec![0.0; n];
        m[k] = d[k - 1];
        for i in (1..k).rev() {
            m[i] = d[i - 1] - c[i - 1] * m[i + 1];
        }
        m[0] = (1.0 + r0) * m[1] - r0 * m[2];
        m[n - 1] = (1.0 + rl) * m[n - 2] - rl * m[n - 3];
        Ok(Self { x, y, m })
    }

    fn cell(&self, t: f64) -> usize {
        match self.x.binary_search_by(|v| v.total_cmp(&t)) {
            Ok(i) => i.min(self.x.len() - 2),
            Err(0) => 0,
            Err(i) if i >= self.x.len() => self.x.len() - 2,
            Err(i) => i - 1,
        }
    }

    /// Spline value at `t` (cubic extrapolation outside the grid).
    pub fn eval(&self, t: f64) -> f64 {
        let i = self.cell(t);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }

    /// Spline first derivative at `t`.
    pub fn deriv(&self, t: f64) -> f64 {
        let i = self.cell(t);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        (self.y[i + 1] - self.y[i]) / h
            + ((3.0 * b * b - 1.0) * self.m[i + 1] - (3.0 * a * a - 1.0) * self.m[i]) * h / 6.0
    }

    pub fn grid(&self) -> &[f64] {
        &self.x
    }
}
