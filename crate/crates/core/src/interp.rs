//! Shape-preserving cubic Hermite interpolation of sampled data.
//!
//! Node slopes come from five-point Lagrange differentiation (fourth order on
//! smooth data) and are then limited Hyman-style on monotone stretches, so
//! the interpolant never overshoots where the data is monotone.

use crate::error::{GeomError, Result};

#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    slope: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n != y.len() {
            return Err(GeomError::Internal(
                "abscissa/ordinate length mismatch".into(),
            ));
        }
        if n < 4 {
            return Err(GeomError::TooFewRows(n));
        }
        if let Some(i) = (1..n).find(|&i| x[i] <= x[i - 1]) {
            return Err(GeomError::NonMonotone { row: i });
        }
        let secant: Vec<f64> = (0..n - 1)
            .map(|i| (y[i + 1] - y[i]) / (x[i + 1] - x[i]))
            .collect();
        let mut slope: Vec<f64> = (0..n).map(|i| lagrange_slope(&x, &y, i)).collect();
        limit_slopes(&secant, &mut slope);
        Ok(MonotoneCubic { x, y, slope })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    pub fn knots(&self) -> &[f64] {
        &self.x
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    fn locate(&self, t: f64) -> usize {
        let n = self.x.len();
        match self
            .x
            .binary_search_by(|v| v.partial_cmp(&t).unwrap_or(std::cmp::Ordering::Less))
        {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        }
    }

    /// Value, first and second derivative at `t` (clamped to the data range).
    pub fn eval3(&self, t: f64) -> (f64, f64, f64) {
        let (lo, hi) = self.domain();
        let t = t.clamp(lo, hi);
        let i = self.locate(t);
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let (m0, m1) = (self.slope[i] * h, self.slope[i + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        let v = h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1;
        let d00 = 6.0 * s2 - 6.0 * s;
        let d10 = 3.0 * s2 - 4.0 * s + 1.0;
        let d01 = -d00;
        let d11 = 3.0 * s2 - 2.0 * s;
        let dv = (d00 * y0 + d10 * m0 + d01 * y1 + d11 * m1) / h;
        let e00 = 12.0 * s - 6.0;
        let e10 = 6.0 * s - 4.0;
        let e01 = -e00;
        let e11 = 6.0 * s - 2.0;
        let ddv = (e00 * y0 + e10 * m0 + e01 * y1 + e11 * m1) / (h * h);
        (v, dv, ddv)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval3(t).0
    }
}

/// Derivative at node `i` of the Lagrange polynomial through the (up to)
/// five nearest nodes.
fn lagrange_slope(x: &[f64], y: &[f64], i: usize) -> f64 {
    let n = x.len();
    let width = 5.min(n);
    let start = i.saturating_sub(width / 2).min(n - width);
    let idx: Vec<usize> = (start..start + width).collect();
    let xi = x[i];
    let mut d = 0.0;
    for &j in &idx {
        // l_j'(x_i)
        let lj = if j == i {
            idx.iter()
                .filter(|&&m| m != i)
                .map(|&m| 1.0 / (xi - x[m]))
                .sum::<f64>()
        } else {
            let mut num = 1.0;
            let mut den = x[j] - x[i];
            for &m in &idx {
                if m != j && m != i {
                    num *= xi - x[m];
                    den *= x[j] - x[m];
                }
            }
            num / den
        };
        d += y[j] * lj;
    }
    d
}

fn limit_slopes(secant: &[f64], slope: &mut [f64]) {
    let n = slope.len();
    for i in 0..n {
        let left = if i > 0 { Some(secant[i - 1]) } else { None };
        let right = if i + 1 < n { Some(secant[i]) } else { None };
        if left == Some(0.0) || right == Some(0.0) {
            // flat neighbouring interval
            slope[i] = 0.0;
            continue;
        }
        let (bound, sign) = match (left, right) {
            (Some(l), Some(r)) if l * r > 0.0 => (3.0 * l.abs().min(r.abs()), l.signum()),
            (Some(l), None) => (3.0 * l.abs(), l.signum()),
            (None, Some(r)) => (3.0 * r.abs(), r.signum()),
            // local extremum of the data: keep the high-order slope
            _ => continue,
        };
        let s = slope[i] * sign;
        slope[i] = sign * s.clamp(0.0, bound);
    }
}
