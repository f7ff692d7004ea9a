//! Rotational ellipsoids and their one-parameter geodesic deformation.
//!
//! The ellipse meridian is `r = k sin φ`, `z = 1 − cos φ` (polar semi-axis 1,
//! equatorial semi-axis `k`). The deformation acts on a meridian by
//!
//! ```text
//! r̄ = r / sqrt(1 + a r²),   z̄' = sqrt(z'² + (r'² + z'²) a r²) / (1 + a r²)^{3/2}
//! ```
//!
//! in any parameter, which is the arc-length form rewritten for a general
//! parameter. Rescaling by `sqrt(1 + a k²)` gives hatted coordinates whose
//! maximal radius is again `k`. In those coordinates the deformed meridian
//! satisfies
//!
//! ```text
//! dẑ/dr̂ = r̂ / (k sqrt(k² − r̂²)) · sqrt((1 + a k² (k² − r̂²)) / (1 + a (k² − r̂²)))
//! ```
//!
//! which integrates in closed form through incomplete elliptic integrals of
//! modulus `sqrt(1 − k²)` when `k < 1`.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use crate::elliptic::{incomplete_elliptic_e, incomplete_elliptic_f};
use crate::error::{GeomError, Result};
use crate::profile::{
    EquidistantMetric, Interval, LocalJet, Meridian, MetricJet, ProfileKind, RevolutionProfile,
};
use crate::quadrature;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EllipsoidParams {
    pub k: f64,
}

impl EllipsoidParams {
    pub fn new(k: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(GeomError::InvalidParameter("k must be positive".into()));
        }
        Ok(EllipsoidParams { k })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeformationParams {
    pub a: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeridianPoint {
    pub r_hat: f64,
    pub z_hat: f64,
}

/// Ellipse meridian in the angular parameter `φ ∈ [0, π]`.
pub fn ellipsoid_profile(k: f64) -> Result<RevolutionProfile> {
    let EllipsoidParams { k } = EllipsoidParams::new(k)?;
    RevolutionProfile::closed_form(
        Interval { lo: 0.0, hi: PI },
        move |phi: f64| {
            let (s, c) = phi.sin_cos();
            [k * s, k * c, -k * s]
        },
        |phi: f64| {
            let (s, c) = phi.sin_cos();
            [1.0 - c, s, c]
        },
    )
}

const DEFORM_SAMPLES: usize = 513;
const Z_NODES: usize = 129;
const Z_TOL: f64 = 1e-13;

struct Deformed {
    base: Arc<dyn Meridian>,
    a: f64,
    nodes: Vec<f64>,
    cum: Vec<f64>,
}

fn deformed_dz(base: &dyn Meridian, a: f64, w: f64) -> f64 {
    let j = base.local(w);
    let d = 1.0 + a * j.r * j.r;
    let n = j.dz * j.dz + j.speed_sq() * a * j.r * j.r;
    n.max(0.0).sqrt() / (d * d.sqrt())
}

impl Meridian for Deformed {
    fn local(&self, w: f64) -> LocalJet {
        let j = self.base.local(w);
        let a = self.a;
        let d = 1.0 + a * j.r * j.r;
        let d32 = d * d.sqrt();
        let d52 = d32 * d;
        let dd = 2.0 * a * j.r * j.dr;
        let speed_sq = j.speed_sq();
        let dspeed_sq = 2.0 * (j.dr * j.ddr + j.dz * j.ddz);
        let n = j.dz * j.dz + speed_sq * a * j.r * j.r;
        let dn = 2.0 * j.dz * j.ddz + dspeed_sq * a * j.r * j.r + 2.0 * speed_sq * a * j.r * j.dr;
        let sqrt_n = n.max(0.0).sqrt();
        let ddz = if sqrt_n > 0.0 {
            dn / (2.0 * sqrt_n) / d32 - 1.5 * sqrt_n * dd / d52
        } else {
            // only reached exactly at a pole
            0.0
        };
        LocalJet {
            r: j.r / d.sqrt(),
            dr: j.dr / d32,
            ddr: j.ddr / d32 - 3.0 * a * j.r * j.dr * j.dr / d52,
            dz: sqrt_n / d32,
            ddz,
        }
    }

    fn z(&self, w: f64) -> f64 {
        let i = match self.nodes.binary_search_by(|v| v.partial_cmp(&w).unwrap()) {
            Ok(i) => return self.cum[i],
            Err(0) => 0,
            Err(i) => (i - 1).min(self.nodes.len() - 2),
        };
        let base = self.base.clone();
        let a = self.a;
        let piece =
            quadrature::integrate(move |t| deformed_dz(&*base, a, t), self.nodes[i], w, Z_TOL)
                .unwrap_or(f64::NAN);
        self.cum[i] + piece
    }
}

/// Applies the deformation with parameter `d.a` to a profile whose `z` is
/// nondecreasing. `z̄` starts at 0 at the left end of the domain.
pub fn deform_profile(p: &RevolutionProfile, d: DeformationParams) -> Result<RevolutionProfile> {
    let a = d.a;
    if !a.is_finite() {
        return Err(GeomError::InvalidParameter("a must be finite".into()));
    }
    let dom = p.domain();
    for w in dom.linspace(DEFORM_SAMPLES) {
        let j = p.local(w);
        let den = 1.0 + a * j.r * j.r;
        if !(den > 0.0) {
            return Err(GeomError::Domain(format!(
                "1 + a r^2 = {den} is not positive at w = {w}"
            )));
        }
        if j.dz < -1e-12 * j.speed_sq().sqrt() {
            return Err(GeomError::Domain(format!(
                "deformation requires nondecreasing z, but z' = {} at w = {w}",
                j.dz
            )));
        }
        let radicand = j.dz * j.dz + j.speed_sq() * a * j.r * j.r;
        if radicand < -1e-14 * j.speed_sq() {
            return Err(GeomError::Domain(format!(
                "negative radicand {radicand:e} in the z integrand at w = {w}"
            )));
        }
    }
    let base = p.meridian().clone();
    let nodes = dom.linspace(Z_NODES);
    let mut cum = vec![0.0];
    for win in nodes.windows(2) {
        let b = base.clone();
        let piece = quadrature::integrate(move |t| deformed_dz(&*b, a, t), win[0], win[1], Z_TOL)?;
        cum.push(cum.last().unwrap() + piece);
    }
    RevolutionProfile::new(
        Arc::new(Deformed {
            base,
            a,
            nodes,
            cum,
        }),
        dom,
        ProfileKind::ClosedForm,
    )
}

/// `k / sqrt(1 + a k²)`, the equatorial radius of the deformed ellipsoid.
pub fn r_bar_max(k: f64, a: f64) -> f64 {
    k / (1.0 + a * k * k).sqrt()
}

/// Scales deformed coordinates by `sqrt(1 + a k²)`.
pub fn rescale_hat(r_bar: f64, z_bar: f64, k: f64, a: f64) -> Result<MeridianPoint> {
    let s = 1.0 + a * k * k;
    if !(s > 0.0) {
        return Err(GeomError::Domain("1 + a k^2 must be positive".into()));
    }
    let f = s.sqrt();
    Ok(MeridianPoint {
        r_hat: r_bar * f,
        z_hat: z_bar * f,
    })
}

/// Point of the rescaled deformed ellipsoid meridian at angle `φ`, computed
/// through [`deform_profile`].
pub fn deformed_meridian_point(
    deformed: &RevolutionProfile,
    k: f64,
    a: f64,
    phi: f64,
) -> Result<MeridianPoint> {
    rescale_hat(deformed.r(phi), deformed.z(phi), k, a)
}

/// Slope `dẑ/dr̂` of the rescaled deformed meridian on the lower half-chart.
pub fn meridian_slope(k: f64, a: f64, r_hat: f64) -> Result<f64> {
    EllipsoidParams::new(k)?;
    if !(0.0..=k).contains(&r_hat) {
        return Err(GeomError::Domain(format!(
            "r_hat = {r_hat} outside [0, {k}]"
        )));
    }
    if r_hat == k {
        return Err(GeomError::Domain(
            "slope is infinite at the equator r_hat = k".into(),
        ));
    }
    let rho = k * k - r_hat * r_hat;
    let num = 1.0 + a * k * k * rho;
    let den = 1.0 + a * rho;
    if !(den > 0.0) || num < 0.0 {
        return Err(GeomError::Domain(format!(
            "invalid radicand at r_hat = {r_hat} for a = {a}"
        )));
    }
    Ok(r_hat / (k * rho.sqrt()) * (num / den).sqrt())
}

fn check_quadrature_args(k: f64, a: f64, r_hat: f64) -> Result<()> {
    EllipsoidParams::new(k)?;
    if !(0.0..=k).contains(&r_hat) {
        return Err(GeomError::Domain(format!(
            "r_hat = {r_hat} outside [0, {k}]"
        )));
    }
    // both radicand factors are linear in cos²u and positive at cos²u = 0
    if !(1.0 + a * k * k > 0.0) || !(1.0 + a * k.powi(4) >= 0.0) {
        return Err(GeomError::Domain(format!(
            "meridian integrand undefined for k = {k}, a = {a}"
        )));
    }
    Ok(())
}

/// `ẑ(r̂)` by adaptive quadrature of the slope after `r̂ = k sin u`, which
/// removes the endpoint singularity at the equator. Valid for all `k > 0`.
pub fn meridian_z_quadrature(k: f64, a: f64, r_hat: f64) -> Result<f64> {
    meridian_z_quadrature_tol(k, a, r_hat, 1e-13)
}

pub fn meridian_z_quadrature_tol(k: f64, a: f64, r_hat: f64, tol: f64) -> Result<f64> {
    check_quadrature_args(k, a, r_hat)?;
    let u_end = (r_hat / k).min(1.0).asin();
    let (k2, k4) = (k * k, k.powi(4));
    quadrature::integrate(
        |u: f64| {
            let (s, c) = u.sin_cos();
            let c2 = c * c;
            s * ((1.0 + a * k4 * c2) / (1.0 + a * k2 * c2)).sqrt()
        },
        0.0,
        u_end,
        tol,
    )
}

/// Closed-form `ẑ(r̂)` through incomplete elliptic integrals of modulus
/// `sqrt(1 − k²)`. Supported for `0 < k ≤ 1`, `a ≥ 0`; `k = 1` is the circle.
pub fn meridian_z_closed(k: f64, a: f64, r: f64) -> Result<f64> {
    EllipsoidParams::new(k)?;
    if k > 1.0 {
        return Err(GeomError::Domain("closed form requires k<1".into()));
    }
    if !(0.0..=k).contains(&r) {
        return Err(GeomError::Domain(format!("r = {r} outside [0, {k}]")));
    }
    if a < 0.0 || !a.is_finite() {
        return Err(GeomError::Domain(
            "closed form requires a >= 0; use the quadrature path".into(),
        ));
    }
    let rho = k * k - r * r;
    if k == 1.0 {
        return Ok(1.0 - rho.sqrt());
    }
    if a == 0.0 {
        return Ok(1.0 - rho.sqrt() / k);
    }
    let (k2, k4) = (k * k, k.powi(4));
    let algebraic = -(rho.sqrt() / k)
        * ((1.0 + a * k4 - a * k2 * r * r) / (1.0 + a * k2 - a * r * r)).sqrt()
        + ((1.0 + a * k4) / (1.0 + a * k2)).sqrt();
    let modulus = (1.0 - k2).sqrt();
    let phi_r = (a * rho / (1.0 + a * rho)).sqrt().min(1.0).asin();
    let phi_0 = (a * k2 / (1.0 + a * k2)).sqrt().min(1.0).asin();
    let bracket = incomplete_elliptic_e(phi_r, modulus)?
        - incomplete_elliptic_e(phi_0, modulus)?
        - incomplete_elliptic_f(phi_r, modulus)?
        + incomplete_elliptic_f(phi_0, modulus)?;
    Ok(algebraic + bracket / (a.sqrt() * k))
}

/// Linear-in-`a` approximation of the deformed meridian.
pub fn small_a_expansion(k: f64, r: f64, a: f64) -> f64 {
    let rho = k * k - r * r;
    1.0 - rho.sqrt() / k - a * k * k * (1.0 - k * k) / 6.0
        + a * (1.0 - k * k) / (6.0 * k) * rho.powf(1.5)
}

/// First-order shift of the equator height, `−a k² (1 − k²) / 6`.
pub fn equator_shift_linear(k: f64, a: f64) -> f64 {
    -a * k * k * (1.0 - k * k) / 6.0
}

/// Ellipsoid metric in the radial coordinate `r ∈ (0, k)` of one half-chart:
/// `(k² + (1/k² − 1) r²) / (k² − r²) dr² + r² dσ²`.
pub fn ellipsoid_r_metric(k: f64) -> Result<EquidistantMetric> {
    EllipsoidParams::new(k)?;
    let c = 1.0 / (k * k) - 1.0;
    EquidistantMetric::from_fn(Interval::new(0.0, k)?, 1, move |r| {
        let n = k * k + c * r * r;
        let d = k * k - r * r;
        MetricJet {
            a: n / d,
            da: (2.0 * c * r * d + 2.0 * r * n) / (d * d),
            b: r * r,
            db: 2.0 * r,
        }
    })
}

/// Deformed metric pulled back to the ellipsoid's radial coordinate:
/// `(1 + a k²) [ (k² + (1/k² − 1) r²) / ((k² − r²)(1 + a r²)²) dr² + r²/(1 + a r²) dσ² ]`.
pub fn pullback_metric(k: f64, a: f64) -> Result<EquidistantMetric> {
    EllipsoidParams::new(k)?;
    if !(1.0 + a * k * k > 0.0) {
        return Err(GeomError::Domain("1 + a k^2 must be positive".into()));
    }
    let c = 1.0 / (k * k) - 1.0;
    let scale = 1.0 + a * k * k;
    EquidistantMetric::from_fn(Interval::new(0.0, k)?, 1, move |r| {
        let n = k * k + c * r * r;
        let dn = 2.0 * c * r;
        let d = k * k - r * r;
        let e = 1.0 + a * r * r;
        let e2 = e * e;
        MetricJet {
            a: scale * n / (d * e2),
            da: scale
                * (dn / (d * e2) + 2.0 * r * n / (d * d * e2) - 4.0 * a * r * n / (d * e2 * e)),
            b: scale * r * r / e,
            db: scale * 2.0 * r / e2,
        }
    })
}

/// Induced metric of the rescaled deformed surface in its own radial
/// coordinate `r̂ ∈ (0, k)`.
pub fn deformed_surface_metric(k: f64, a: f64) -> Result<EquidistantMetric> {
    EllipsoidParams::new(k)?;
    if !(1.0 + a * k * k > 0.0) {
        return Err(GeomError::Domain("1 + a k^2 must be positive".into()));
    }
    let (k2, k4) = (k * k, k.powi(4));
    let c = 1.0 / k2 - a * k2 - 1.0;
    EquidistantMetric::from_fn(Interval::new(0.0, k)?, 1, move |r| {
        let n = k2 + a * k4 + c * r * r;
        let d1 = k2 - r * r;
        let d2 = 1.0 + a * k2 - a * r * r;
        let den = d1 * d2;
        MetricJet {
            a: n / den,
            da: (2.0 * c * r * den + n * (2.0 * r * d2 + 2.0 * a * r * d1)) / (den * den),
            b: r * r,
            db: 2.0 * r,
        }
    })
}

/// Largest distance from the rescaled deformed meridian (lower half, `n`
/// samples in `r̂`) to the circle of radius `k` through the origin.
pub fn distance_to_circle(k: f64, a: f64, n: usize) -> Result<f64> {
    let mut worst = 0.0_f64;
    for i in 0..n {
        let r = k * i as f64 / (n - 1) as f64;
        let z = meridian_z_quadrature(k, a, r)?;
        let d = ((r * r + (z - k) * (z - k)).sqrt() - k).abs();
        worst = worst.max(d);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{
        classify_topology, metric_from_profile, pole_smoothness_check, TopologyClass,
    };
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn ellipsoid_profile_values() {
        assert!(ellipsoid_profile(0.0).is_err());
        assert!(ellipsoid_profile(-1.0).is_err());
        let p = ellipsoid_profile(2.0).unwrap();
        assert!((p.r(FRAC_PI_2) - 2.0).abs() < 1e-15);
        assert!((p.z(FRAC_PI_2) - 1.0).abs() < 1e-15);
        let g = metric_from_profile(&p, 1).unwrap();
        for phi in p.domain().linspace(25) {
            let (s, c) = phi.sin_cos();
            assert_eq!(g.a(phi), 4.0 * c * c + s * s);
        }
        assert!((g.a(FRAC_PI_2) - 1.0).abs() < 1e-15);
        assert!((g.b(FRAC_PI_2) - 4.0).abs() < 1e-15);
        assert_eq!(classify_topology(&p, 1e-12), TopologyClass::Sphere);
        let unit = metric_from_profile(&ellipsoid_profile(1.0).unwrap(), 1).unwrap();
        assert!(unit
            .domain()
            .linspace(13)
            .iter()
            .all(|&w| (unit.a(w) - 1.0).abs() < 1e-15));
    }

    #[test]
    fn ellipsoid_poles_are_smooth() {
        for k in [0.3, 1.0, 2.0, 5.0] {
            let rep = pole_smoothness_check(&ellipsoid_profile(k).unwrap(), 1e-8);
            assert!(
                rep.left.is_smooth_pole() && rep.right.is_smooth_pole(),
                "k = {k}"
            );
            if let crate::profile::PoleStatus::Pole { dr_ds, .. } = rep.left {
                assert!((dr_ds - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn deformation_identity_and_values() {
        let p = ellipsoid_profile(2.0).unwrap();
        let same = deform_profile(&p, DeformationParams { a: 0.0 }).unwrap();
        for phi in p.domain().linspace(17) {
            assert!((same.r(phi) - p.r(phi)).abs() < 1e-15);
            assert!((same.z(phi) - p.z(phi)).abs() < 1e-12);
        }
        let d = deform_profile(&p, DeformationParams { a: 0.25 }).unwrap();
        assert!((d.r(FRAC_PI_2) - 2f64.sqrt()).abs() < 1e-15);
        // maximum of r̄ at the equator
        let max = d
            .domain()
            .linspace(1001)
            .into_iter()
            .map(|phi| d.r(phi))
            .fold(0.0, f64::max);
        assert!((max - r_bar_max(2.0, 0.25)).abs() < 1e-15);
        // r̄' in φ matches k cos φ / (1 + a k² sin² φ)^{3/2}
        for phi in d.domain().interior(20) {
            let expected = 2.0 * phi.cos() / (1.0 + 0.25 * 4.0 * phi.sin().powi(2)).powf(1.5);
            assert!((d.local(phi).dr - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn deformation_rejects_invalid() {
        let p = ellipsoid_profile(2.0).unwrap();
        assert!(deform_profile(&p, DeformationParams { a: -0.3 }).is_err());
        // near the poles the radicand is z'^2 (1 + 4a (4cos^2 + sin^2)), negative for a < -1/16
        assert!(deform_profile(&p, DeformationParams { a: -0.2 }).is_err());
        assert!(deform_profile(&p, DeformationParams { a: -0.05 }).is_ok());
    }

    #[test]
    fn rescale_examples() {
        let m = rescale_hat(0.3, 0.4, 2.0, 0.0).unwrap();
        assert_eq!((m.r_hat, m.z_hat), (0.3, 0.4));
        let m = rescale_hat(2f64.sqrt(), 0.0, 2.0, 0.25).unwrap();
        assert!((m.r_hat - 2.0).abs() < 1e-15);
        let m = rescale_hat(r_bar_max(1.0, 3.0), 0.0, 1.0, 3.0).unwrap();
        assert!((m.r_hat - 1.0).abs() < 1e-15);
    }

    #[test]
    fn slope_limits() {
        for a in [0.0, 0.5, 7.0] {
            let s = meridian_slope(1.0, a, 0.6).unwrap();
            assert!((s - 0.6 / 0.64f64.sqrt()).abs() < 1e-15);
        }
        let s = meridian_slope(0.7, 0.0, 0.3).unwrap();
        assert!((s - 0.3 / (0.7 * (0.49f64 - 0.09).sqrt())).abs() < 1e-15);
        let big = meridian_slope(0.5, 1e12, 0.3).unwrap();
        assert!((big - 0.3 / (0.25f64 - 0.09).sqrt()).abs() < 1e-6);
        assert!(meridian_slope(0.5, 1.0, 0.5).is_err());
    }

    #[test]
    fn quadrature_limits() {
        for r in [0.0, 0.2, 0.5, 0.69, 0.7] {
            let k: f64 = 0.7;
            let z = meridian_z_quadrature(k, 0.0, r).unwrap();
            assert!((z - (1.0 - (k * k - r * r).max(0.0).sqrt() / k)).abs() < 1e-13);
        }
        for a in [0.5, 3.0] {
            let z = meridian_z_quadrature(1.0, a, 0.8).unwrap();
            assert!((z - 0.4).abs() < 1e-13);
        }
        let z1 = meridian_z_quadrature_tol(0.8, 1.0, 0.5, 1e-13).unwrap();
        let z2 = meridian_z_quadrature_tol(0.8, 1.0, 0.5, 5e-14).unwrap();
        assert!((z1 - z2).abs() < 1e-11);
    }

    #[test]
    fn closed_form_regimes() {
        assert!(meridian_z_closed(2.0, 0.1, 1.0)
            .unwrap_err()
            .to_string()
            .contains("k<1"));
        assert!((meridian_z_closed(1.0, 5.0, 0.6).unwrap() - 0.2).abs() < 1e-15);
        assert!(meridian_z_closed(0.5, 1.0, 0.0).unwrap().abs() < 1e-15);
        let k: f64 = 0.6;
        let r: f64 = 0.4;
        let expected = 1.0 - (k * k - r * r).sqrt() / k;
        assert!((meridian_z_closed(k, 0.0, r).unwrap() - expected).abs() < 1e-15);
        // equator value against the slope integral
        let zc = meridian_z_closed(0.8, 1.0, 0.8).unwrap();
        let zq = meridian_z_quadrature(0.8, 1.0, 0.8).unwrap();
        assert!((zc - zq).abs() < 1e-12, "{zc} vs {zq}");
    }

    #[test]
    fn expansion_examples() {
        let (k, r): (f64, f64) = (0.8, 0.3);
        assert_eq!(
            small_a_expansion(k, r, 0.0),
            1.0 - (k * k - r * r).sqrt() / k
        );
        assert!(
            (small_a_expansion(k, k, 0.2) - (1.0 + equator_shift_linear(k, 0.2))).abs() < 1e-15
        );
        assert!((small_a_expansion(2.0, 2.0, 0.1) - 1.2).abs() < 1e-15);
    }

    #[test]
    fn pullback_reduces_to_ellipse_metric() {
        let radial = ellipsoid_r_metric(0.7).unwrap();
        let pulled = pullback_metric(0.7, 0.0).unwrap();
        for r in radial.domain().interior(30) {
            let (x, y) = (pulled.jet(r), radial.jet(r));
            for (u, v) in [(x.a, y.a), (x.da, y.da), (x.b, y.b), (x.db, y.db)] {
                assert!((u - v).abs() <= 1e-14 * v.abs().max(1.0), "r={r}");
            }
        }
    }

    #[test]
    fn surface_metric_matches_slope() {
        for (k, a) in [(0.5, 1.0), (0.8, 0.1), (2.0, 0.3), (1.0, 4.0)] {
            let g = deformed_surface_metric(k, a).unwrap();
            for r in g.domain().interior(20) {
                let s = meridian_slope(k, a, r).unwrap();
                let lhs = 1.0 + s * s;
                assert!(
                    (g.a(r) - lhs).abs() <= 1e-12 * lhs.max(1.0),
                    "k={k} a={a} r={r}"
                );
            }
        }
        let g = deformed_surface_metric(1.0, 2.5).unwrap();
        for r in g.domain().interior(10) {
            assert!((g.a(r) - 1.0 / (1.0 - r * r)).abs() < 1e-12);
        }
    }

    #[test]
    fn metric_derivatives_match_finite_differences() {
        let metrics = [
            ellipsoid_r_metric(0.6).unwrap(),
            pullback_metric(0.6, 2.0).unwrap(),
            deformed_surface_metric(1.7, 0.4).unwrap(),
        ];
        for g in &metrics {
            for r in g.domain().interior(9) {
                let h = 1e-5;
                let (jp, jm, j) = (g.jet(r + h), g.jet(r - h), g.jet(r));
                let da = (jp.a - jm.a) / (2.0 * h);
                let db = (jp.b - jm.b) / (2.0 * h);
                assert!((da - j.da).abs() <= 1e-6 * j.da.abs().max(1.0), "da at {r}");
                assert!((db - j.db).abs() <= 1e-6 * j.db.abs().max(1.0), "db at {r}");
            }
        }
    }

    #[test]
    fn deformed_profile_second_derivatives() {
        let p = deform_profile(
            &ellipsoid_profile(2.0).unwrap(),
            DeformationParams { a: 0.3 },
        )
        .unwrap();
        for phi in p.domain().interior(11) {
            let h = 1e-5;
            let (jp, jm, j) = (p.local(phi + h), p.local(phi - h), p.local(phi));
            assert!(((jp.dr - jm.dr) / (2.0 * h) - j.ddr).abs() < 1e-6);
            assert!(((jp.dz - jm.dz) / (2.0 * h) - j.ddz).abs() < 1e-6);
            let dz_fd = (p.z(phi + h) - p.z(phi - h)) / (2.0 * h);
            assert!((dz_fd - j.dz).abs() < 1e-6);
        }
    }

    #[test]
    fn large_a_distance_decreases() {
        let d: Vec<f64> = [1.0, 10.0, 100.0, 1000.0]
            .iter()
            .map(|&a| distance_to_circle(0.5, a, 201).unwrap())
            .collect();
        assert!(d.windows(2).all(|w| w[1] < w[0]), "{d:?}");
    }
}
