//! The two-parameter family of geodesic mappings between equidistant metrics.
//!
//! For `ds² = a dw² + b dσ²` the metric
//!
//! ```text
//! ds̄² = p a / (1 + q b)² dw² + p b / (1 + q b) dσ²
//! ```
//!
//! has the same unparametrized geodesics, with Christoffel symbols related
//! through `ψ = -½ ln|1 + q b|` by the symmetrized Levi-Civita equation
//! `Γ̄^h_ij = Γ^h_ij + δ^h_i ψ_j + δ^h_j ψ_i`.

use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::profile::{EquidistantMetric, MetricJet};
use crate::quadrature::golden_section_min;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MappingParams {
    pub p: f64,
    pub q: f64,
}

impl MappingParams {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if p == 0.0 || !p.is_finite() {
            return Err(GeomError::InvalidParameter(
                "p must be nonzero and finite".into(),
            ));
        }
        if !q.is_finite() {
            return Err(GeomError::InvalidParameter("q must be finite".into()));
        }
        Ok(MappingParams { p, q })
    }

    pub fn homothety(p: f64) -> Result<Self> {
        Self::new(p, 0.0)
    }
}

/// The three independent Christoffel symbols of the (w, σ) block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChristoffelSet {
    /// Γ^w_ww
    pub g_w_ww: f64,
    /// Γ^w_σσ
    pub g_w_ss: f64,
    /// Γ^σ_wσ
    pub g_s_ws: f64,
}

pub fn christoffel(g: &EquidistantMetric, w: f64) -> Result<ChristoffelSet> {
    christoffel_from_jet(g.jet(w), w)
}

pub(crate) fn christoffel_from_jet(j: MetricJet, w: f64) -> Result<ChristoffelSet> {
    if j.b == 0.0 || !j.b.is_finite() {
        return Err(GeomError::Singular {
            w,
            what: "b(w) = 0 (pole of the rotational chart)",
        });
    }
    if j.a == 0.0 || !j.a.is_finite() {
        return Err(GeomError::Singular {
            w,
            what: "a(w) = 0",
        });
    }
    Ok(ChristoffelSet {
        g_w_ww: j.da / (2.0 * j.a),
        g_w_ss: -j.db / (2.0 * j.a),
        g_s_ws: j.db / (2.0 * j.b),
    })
}

fn check_denominator(q: f64, b: f64, w: f64) -> Result<f64> {
    let d = 1.0 + q * b;
    if d == 0.0 || !d.is_finite() {
        return Err(GeomError::Singular {
            w,
            what: "1 + q b(w) = 0",
        });
    }
    Ok(d)
}

/// `ψ(w) = -½ ln|1 + q b(w)|`.
pub fn psi(g: &EquidistantMetric, q: f64, w: f64) -> Result<f64> {
    let d = check_denominator(q, g.b(w), w)?;
    Ok(-0.5 * d.abs().ln())
}

/// `ψ'(w) = -q b'(w) / (2 (1 + q b(w)))`.
pub fn psi_prime(g: &EquidistantMetric, q: f64, w: f64) -> Result<f64> {
    let j = g.jet(w);
    let d = check_denominator(q, j.b, w)?;
    Ok(-q * j.db / (2.0 * d))
}

/// Ranges of `q` for which `1 + q b` keeps one sign over the whole domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QAdmissibility {
    /// Lower end of `(lo, +inf)`, where the image metric is positive definite.
    pub positive_definite_lo: f64,
    /// Upper end of `(-inf, hi)` where the image has Minkowski signature;
    /// `None` when `b` vanishes somewhere.
    pub minkowski_hi: Option<f64>,
    /// Closed interval of `q` for which `1 + q b(w) = 0` at some `w`.
    pub excluded: (f64, f64),
    pub b_min: f64,
    pub b_max: f64,
    pub w_at_b_min: f64,
    pub w_at_b_max: f64,
}

impl QAdmissibility {
    pub fn is_positive_definite(&self, q: f64) -> bool {
        q > self.positive_definite_lo
    }

    pub fn is_minkowski(&self, q: f64) -> bool {
        self.minkowski_hi.is_some_and(|hi| q < hi)
    }

    pub fn is_admissible(&self, q: f64) -> bool {
        self.is_positive_definite(q) || self.is_minkowski(q)
    }

    pub fn describe(&self) -> String {
        let mut s = format!(
            "positive definite q in ({}, inf)",
            self.positive_definite_lo
        );
        if let Some(hi) = self.minkowski_hi {
            s.push_str(&format!(", Minkowski q in (-inf, {hi})"));
        }
        s
    }

    fn minkowski_suffix(&self) -> String {
        match self.minkowski_hi {
            Some(hi) => format!("; Minkowski range is (-inf, {hi})"),
            None => String::new(),
        }
    }
}

const SCAN_POINTS: usize = 2048;
const EXTREMUM_W_TOL: f64 = 1e-10;

/// Locates the extremum of `b` (minimum for `sign = 1`, maximum for
/// `sign = -1`) by a uniform scan refined with golden section.
fn b_extremum(g: &EquidistantMetric, sign: f64) -> (f64, f64) {
    let pts = g.domain().linspace(SCAN_POINTS);
    let vals: Vec<f64> = pts.iter().map(|&w| sign * g.b(w)).collect();
    let (imin, _) =
        vals.iter().enumerate().fold(
            (0, f64::INFINITY),
            |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc },
        );
    let lo = pts[imin.saturating_sub(1)];
    let hi = pts[(imin + 1).min(pts.len() - 1)];
    let (w, v) = golden_section_min(|w| sign * g.b(w), lo, hi, EXTREMUM_W_TOL);
    if v <= vals[imin] {
        (w, sign * v)
    } else {
        (pts[imin], sign * vals[imin])
    }
}

pub fn admissible_q_range(g: &EquidistantMetric) -> QAdmissibility {
    let (w_min, b_min) = b_extremum(g, 1.0);
    let (w_max, b_max) = b_extremum(g, -1.0);
    let positive_definite_lo = -1.0 / b_max;
    let minkowski_hi = if b_min > 0.0 {
        Some(-1.0 / b_min)
    } else {
        None
    };
    let excluded = (
        minkowski_hi.unwrap_or(f64::NEG_INFINITY),
        positive_definite_lo,
    );
    QAdmissibility {
        positive_definite_lo,
        minkowski_hi,
        excluded,
        b_min,
        b_max,
        w_at_b_min: w_min,
        w_at_b_max: w_max,
    }
}

/// Image metric `ā = p a/(1+qb)²`, `b̄ = p b/(1+qb)` with exact derivatives.
pub fn map_metric(g: &EquidistantMetric, mp: MappingParams) -> Result<EquidistantMetric> {
    let MappingParams { p, q } = mp;
    if q != 0.0 {
        let adm = admissible_q_range(g);
        if !adm.is_admissible(q) {
            // 1 + q b vanishes where b = -1/q
            let target = -1.0 / q;
            let w = crossing_point(g, target).unwrap_or_else(|| {
                // touching from one side, e.g. q = -1/b_max
                if (adm.b_max - target).abs() <= (adm.b_min - target).abs() {
                    adm.w_at_b_max
                } else {
                    adm.w_at_b_min
                }
            });
            return Err(GeomError::InadmissibleQ {
                q,
                w,
                lo: adm.positive_definite_lo,
                minkowski: adm.minkowski_suffix(),
            });
        }
    }
    let base = g.clone();
    EquidistantMetric::from_fn(g.domain(), g.fiber_dim(), move |w| {
        let j = base.jet(w);
        let d = 1.0 + q * j.b;
        let d2 = d * d;
        MetricJet {
            a: p * j.a / d2,
            da: p * (j.da / d2 - 2.0 * q * j.a * j.db / (d2 * d)),
            b: p * j.b / d,
            db: p * j.db / d2,
        }
    })
}

/// First sample bracket where `b - target` changes sign, refined by bisection.
fn crossing_point(g: &EquidistantMetric, target: f64) -> Option<f64> {
    let pts = g.domain().linspace(SCAN_POINTS);
    let f = |w: f64| g.b(w) - target;
    for win in pts.windows(2) {
        let (mut lo, mut hi) = (win[0], win[1]);
        let (flo, fhi) = (f(lo), f(hi));
        if flo == 0.0 {
            return Some(lo);
        }
        if flo * fhi < 0.0 {
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if f(mid) * flo > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Some(0.5 * (lo + hi));
        }
    }
    None
}

/// True iff `q ≠ 0` and `b'` is not identically zero on the sample grid.
pub fn is_nontrivial(g: &EquidistantMetric, q: f64, samples: usize) -> bool {
    if q == 0.0 {
        return false;
    }
    let pts = g.domain().linspace(samples.max(2));
    let scale = pts
        .iter()
        .map(|&w| g.b(w).abs())
        .fold(0.0_f64, f64::max)
        .max(1.0)
        / g.domain().len();
    pts.iter()
        .any(|&w| g.jet(w).db.abs() > 1e3 * f64::EPSILON * scale)
}

/// Residuals of the symmetrized Levi-Civita equation between `g` and its
/// image under `mp` at `w`:
/// `(Γ̄^w_ww − Γ^w_ww − 2ψ', Γ̄^σ_wσ − Γ^σ_wσ − ψ', Γ̄^w_σσ − Γ^w_σσ)`.
pub fn verify_levi_civita(g: &EquidistantMetric, mp: MappingParams, w: f64) -> Result<[f64; 3]> {
    let gbar = map_metric(g, mp)?;
    levi_civita_residual(g, &gbar, mp.q, w)
}

/// Same residuals with a precomputed image metric.
pub fn levi_civita_residual(
    g: &EquidistantMetric,
    gbar: &EquidistantMetric,
    q: f64,
    w: f64,
) -> Result<[f64; 3]> {
    let c = christoffel(g, w)?;
    let cb = christoffel(gbar, w)?;
    let dpsi = psi_prime(g, q, w)?;
    Ok([
        cb.g_w_ww - c.g_w_ww - 2.0 * dpsi,
        cb.g_s_ws - c.g_s_ws - dpsi,
        cb.g_w_ss - c.g_w_ss,
    ])
}

/// Largest absolute residual component over `points`.
pub fn max_levi_civita_residual(
    g: &EquidistantMetric,
    mp: MappingParams,
    points: &[f64],
) -> Result<f64> {
    let gbar = map_metric(g, mp)?;
    let mut worst = 0.0_f64;
    for &w in points {
        let r = levi_civita_residual(g, &gbar, mp.q, w)?;
        worst = r.iter().fold(worst, |m, v| m.max(v.abs()));
    }
    Ok(worst)
}
