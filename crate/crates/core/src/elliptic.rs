//! Incomplete elliptic integrals via Carlson's symmetric forms.
//!
//! ```text
//! F(φ, κ) = ∫₀^φ dθ / sqrt(1 − κ² sin²θ)
//! E(φ, κ) = ∫₀^φ sqrt(1 − κ² sin²θ) dθ
//! ```
//!
//! `κ` is the modulus (not the parameter m = κ²).

use std::f64::consts::FRAC_PI_2;

use crate::error::{GeomError, Result};

const REL_TOL: f64 = 1e-16;

/// Carlson's R_F(x, y, z); at most one argument may be zero.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> Result<f64> {
    if x < 0.0 || y < 0.0 || z < 0.0 || [x + y, x + z, y + z].contains(&0.0) {
        return Err(GeomError::Domain(format!("R_F({x}, {y}, {z}) undefined")));
    }
    let (mut x, mut y, mut z) = (x, y, z);
    let a0 = (x + y + z) / 3.0;
    let q =
        (3.0 * REL_TOL).powf(-1.0 / 6.0) * (a0 - x).abs().max((a0 - y).abs()).max((a0 - z).abs());
    let mut a = a0;
    let mut pow4 = 1.0;
    let (x0, y0) = (x, y);
    while pow4 * q >= a.abs() {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sx * sz + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        a = 0.25 * (a + lambda);
        pow4 *= 0.25;
    }
    let xx = (a0 - x0) * pow4 / a;
    let yy = (a0 - y0) * pow4 / a;
    let zz = -xx - yy;
    let e2 = xx * yy - zz * zz;
    let e3 = xx * yy * zz;
    Ok((1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / a.sqrt())
}

/// Carlson's R_D(x, y, z); `z > 0`, at most one of `x`, `y` zero.
pub fn carlson_rd(x: f64, y: f64, z: f64) -> Result<f64> {
    if x < 0.0 || y < 0.0 || z <= 0.0 || x + y == 0.0 {
        return Err(GeomError::Domain(format!("R_D({x}, {y}, {z}) undefined")));
    }
    let (mut x, mut y, mut z) = (x, y, z);
    let a0 = (x + y + 3.0 * z) / 5.0;
    let q =
        (0.25 * REL_TOL).powf(-1.0 / 6.0) * (a0 - x).abs().max((a0 - y).abs()).max((a0 - z).abs());
    let mut a = a0;
    let mut pow4 = 1.0;
    let mut sum = 0.0;
    let (x0, y0) = (x, y);
    while pow4 * q >= a.abs() {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sx * sz + sy * sz;
        sum += pow4 / (sz * (z + lambda));
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        a = 0.25 * (a + lambda);
        pow4 *= 0.25;
    }
    let xx = (a0 - x0) * pow4 / a;
    let yy = (a0 - y0) * pow4 / a;
    let zz = -(xx + yy) / 3.0;
    let xy = xx * yy;
    let z2 = zz * zz;
    let e2 = xy - 6.0 * z2;
    let e3 = (3.0 * xy - 8.0 * z2) * zz;
    let e4 = 3.0 * (xy - z2) * z2;
    let e5 = xy * z2 * zz;
    let series = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0
        - 3.0 * e4 / 22.0
        - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0;
    Ok(pow4 * series / (a * a.sqrt()) + 3.0 * sum)
}

fn check_args(phi: f64, kappa: f64) -> Result<f64> {
    if !(0.0..=FRAC_PI_2 + 4.0 * f64::EPSILON).contains(&phi) {
        return Err(GeomError::Domain(format!("phi = {phi} outside [0, pi/2]")));
    }
    if !(0.0..1.0).contains(&kappa) {
        return Err(GeomError::Domain(format!("modulus {kappa} outside [0, 1)")));
    }
    Ok(phi.min(FRAC_PI_2))
}

/// Incomplete elliptic integral of the first kind, `0 ≤ φ ≤ π/2`, `0 ≤ κ < 1`.
pub fn incomplete_elliptic_f(phi: f64, kappa: f64) -> Result<f64> {
    let phi = check_args(phi, kappa)?;
    if kappa == 0.0 || phi == 0.0 {
        return Ok(phi);
    }
    let (s, c) = phi.sin_cos();
    Ok(s * carlson_rf(c * c, 1.0 - kappa * kappa * s * s, 1.0)?)
}

/// Incomplete elliptic integral of the second kind, `0 ≤ φ ≤ π/2`, `0 ≤ κ < 1`.
pub fn incomplete_elliptic_e(phi: f64, kappa: f64) -> Result<f64> {
    let phi = check_args(phi, kappa)?;
    if kappa == 0.0 || phi == 0.0 {
        return Ok(phi);
    }
    let (s, c) = phi.sin_cos();
    let (x, y) = (c * c, 1.0 - kappa * kappa * s * s);
    let k2 = kappa * kappa;
    Ok(s * carlson_rf(x, y, 1.0)? - k2 * s * s * s * carlson_rd(x, y, 1.0)? / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;

    // independent oracle: the defining integrals by adaptive quadrature
    fn f_oracle(phi: f64, kappa: f64) -> f64 {
        integrate(
            |t| 1.0 / (1.0 - kappa * kappa * t.sin().powi(2)).sqrt(),
            0.0,
            phi,
            1e-14,
        )
        .unwrap()
    }

    fn e_oracle(phi: f64, kappa: f64) -> f64 {
        integrate(
            |t| (1.0 - kappa * kappa * t.sin().powi(2)).sqrt(),
            0.0,
            phi,
            1e-14,
        )
        .unwrap()
    }

    #[test]
    fn zero_modulus_is_identity() {
        for phi in [0.0, 0.3, 1.0, FRAC_PI_2] {
            assert_eq!(incomplete_elliptic_f(phi, 0.0).unwrap(), phi);
            assert_eq!(incomplete_elliptic_e(phi, 0.0).unwrap(), phi);
        }
    }

    #[test]
    fn complete_values_at_half() {
        // frozen from the quadrature oracle
        let f = incomplete_elliptic_f(FRAC_PI_2, 0.5).unwrap();
        let e = incomplete_elliptic_e(FRAC_PI_2, 0.5).unwrap();
        assert!((f - 1.685_750_354_812_596).abs() < 1e-13, "{f}");
        assert!((e - 1.467_462_209_339_427).abs() < 1e-13, "{e}");
        assert!((f - f_oracle(FRAC_PI_2, 0.5)).abs() < 1e-13);
        assert!((e - e_oracle(FRAC_PI_2, 0.5)).abs() < 1e-13);
    }

    #[test]
    fn grid_against_quadrature() {
        for i in 0..=10 {
            let phi = FRAC_PI_2 * i as f64 / 10.0;
            for kappa in [0.1, 0.3, 0.6, 0.9, 0.99] {
                let f = incomplete_elliptic_f(phi, kappa).unwrap();
                let e = incomplete_elliptic_e(phi, kappa).unwrap();
                let (fo, eo) = (f_oracle(phi, kappa), e_oracle(phi, kappa));
                assert!((f - fo).abs() <= 1e-12 * fo.max(1.0), "F({phi},{kappa})");
                assert!((e - eo).abs() <= 1e-12 * eo.max(1.0), "E({phi},{kappa})");
            }
        }
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(incomplete_elliptic_f(2.0, 0.5).is_err());
        assert!(incomplete_elliptic_e(0.5, 1.0).is_err());
        assert!(incomplete_elliptic_e(0.5, -0.1).is_err());
    }

    #[test]
    fn rf_rd_known_values() {
        // R_F(1,2,0) and R_D(0,2,1), Carlson (1995) test values
        assert!((carlson_rf(1.0, 2.0, 0.0).unwrap() - 1.311_028_777_146_059_9).abs() < 1e-14);
        assert!((carlson_rd(0.0, 2.0, 1.0).unwrap() - 1.797_210_352_103_388_8).abs() < 1e-14);
    }
}
