//! Meridian profiles of surfaces of revolution and the equidistant metrics
//! they induce.
//!
//! A surface of revolution in E_{n+1} is `x^i = r(w) u^i`, `x^{n+1} = z(w)`
//! with `u` on the unit sphere S_{n-1}. Its metric is
//! `(r'^2 + z'^2) dw^2 + r^2 dσ^2`, an instance of the warped form
//! `a(w) dw^2 + b(w) dσ^2` carried by [`EquidistantMetric`].
//!
//! Any monotone parameter `w` is accepted, not only arc length.

use std::fmt;
use std::io::Read;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::interp::MonotoneCubic;
use crate::quadrature;

/// Default pole tolerance for closed-form profiles.
pub const POLE_TOL_CLOSED: f64 = 1e-8;
/// Default pole tolerance for tabulated profiles.
pub const POLE_TOL_TABULATED: f64 = 1e-4;

const VALIDATION_SAMPLES: usize = 513;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(GeomError::InvalidParameter(
                "domain endpoints must be finite".into(),
            ));
        }
        if lo >= hi {
            return Err(GeomError::InvalidParameter(format!(
                "empty domain [{lo}, {hi}]"
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, w: f64) -> bool {
        (self.lo..=self.hi).contains(&w)
    }

    /// `n` equally spaced points including both endpoints.
    pub fn linspace(&self, n: usize) -> Vec<f64> {
        match n {
            0 => vec![],
            1 => vec![self.lo],
            _ => (0..n)
                .map(|i| {
                    if i == n - 1 {
                        self.hi
                    } else {
                        self.lo + self.len() * i as f64 / (n - 1) as f64
                    }
                })
                .collect(),
        }
    }

    /// `n` equally spaced strictly interior points.
    pub fn interior(&self, n: usize) -> Vec<f64> {
        (1..=n)
            .map(|i| self.lo + self.len() * i as f64 / (n + 1) as f64)
            .collect()
    }
}

/// Radius and derivatives of a meridian at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalJet {
    pub r: f64,
    pub dr: f64,
    pub ddr: f64,
    pub dz: f64,
    pub ddz: f64,
}

impl LocalJet {
    pub fn speed_sq(&self) -> f64 {
        self.dr * self.dr + self.dz * self.dz
    }
}

/// Source of a meridian curve `(r(w), z(w))`.
///
/// `z` is separate from [`Meridian::local`] because for some profiles it is
/// an integral and most consumers only need derivatives.
pub trait Meridian: Send + Sync {
    fn local(&self, w: f64) -> LocalJet;
    fn z(&self, w: f64) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileKind {
    ClosedForm,
    Tabulated,
}

#[derive(Clone)]
pub struct RevolutionProfile {
    meridian: Arc<dyn Meridian>,
    domain: Interval,
    kind: ProfileKind,
}

impl fmt::Debug for RevolutionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RevolutionProfile")
            .field("domain", &self.domain)
            .field("kind", &self.kind)
            .finish()
    }
}

struct ClosedForm<R, Z> {
    r: R,
    z: Z,
}

impl<R, Z> Meridian for ClosedForm<R, Z>
where
    R: Fn(f64) -> [f64; 3] + Send + Sync,
    Z: Fn(f64) -> [f64; 3] + Send + Sync,
{
    fn local(&self, w: f64) -> LocalJet {
        let [r, dr, ddr] = (self.r)(w);
        let [_, dz, ddz] = (self.z)(w);
        LocalJet {
            r,
            dr,
            ddr,
            dz,
            ddz,
        }
    }

    fn z(&self, w: f64) -> f64 {
        (self.z)(w)[0]
    }
}

struct Tabulated {
    r: MonotoneCubic,
    z: MonotoneCubic,
}

impl Meridian for Tabulated {
    fn local(&self, w: f64) -> LocalJet {
        let (r, dr, ddr) = self.r.eval3(w);
        let (_, dz, ddz) = self.z.eval3(w);
        LocalJet {
            r,
            dr,
            ddr,
            dz,
            ddz,
        }
    }

    fn z(&self, w: f64) -> f64 {
        self.z.eval(w)
    }
}

impl RevolutionProfile {
    /// Wraps an arbitrary meridian after checking `r > 0` in the interior and
    /// `r'^2 + z'^2 > 0` on a dense sample of the domain.
    pub fn new(meridian: Arc<dyn Meridian>, domain: Interval, kind: ProfileKind) -> Result<Self> {
        let p = RevolutionProfile {
            meridian,
            domain,
            kind,
        };
        p.validate()?;
        Ok(p)
    }

    /// Profile from closures returning `[value, d/dw, d²/dw²]`.
    pub fn closed_form<R, Z>(domain: Interval, r: R, z: Z) -> Result<Self>
    where
        R: Fn(f64) -> [f64; 3] + Send + Sync + 'static,
        Z: Fn(f64) -> [f64; 3] + Send + Sync + 'static,
    {
        Self::new(
            Arc::new(ClosedForm { r, z }),
            domain,
            ProfileKind::ClosedForm,
        )
    }

    fn validate(&self) -> Result<()> {
        let pts = self.domain.linspace(VALIDATION_SAMPLES);
        for (i, &w) in pts.iter().enumerate() {
            let j = self.meridian.local(w);
            if !(j.speed_sq() > 0.0) {
                return Err(GeomError::DegenerateProfile { w });
            }
            let interior = i > 0 && i + 1 < pts.len();
            if interior && !(j.r > 0.0) {
                return Err(GeomError::NonPositiveRadius { w, r: j.r });
            }
        }
        Ok(())
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn meridian(&self) -> &Arc<dyn Meridian> {
        &self.meridian
    }

    pub fn local(&self, w: f64) -> LocalJet {
        self.meridian.local(w)
    }

    pub fn r(&self, w: f64) -> f64 {
        self.meridian.local(w).r
    }

    pub fn z(&self, w: f64) -> f64 {
        self.meridian.z(w)
    }

    pub fn default_pole_tol(&self) -> f64 {
        match self.kind {
            ProfileKind::ClosedForm => POLE_TOL_CLOSED,
            ProfileKind::Tabulated => POLE_TOL_TABULATED,
        }
    }
}

/// Coefficients `a`, `b` of `a dw² + b dσ²` and their first derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricJet {
    pub a: f64,
    pub da: f64,
    pub b: f64,
    pub db: f64,
}

pub type MetricFn = Arc<dyn Fn(f64) -> MetricJet + Send + Sync>;

/// Warped metric `a(w) dw² + b(w) dσ²` where `dσ²` is the round metric on
/// a sphere of dimension `fiber_dim`.
#[derive(Clone)]
pub struct EquidistantMetric {
    jet: MetricFn,
    fiber_dim: usize,
    domain: Interval,
}

impl fmt::Debug for EquidistantMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EquidistantMetric")
            .field("domain", &self.domain)
            .field("fiber_dim", &self.fiber_dim)
            .finish()
    }
}

impl EquidistantMetric {
    pub fn from_fn<F>(domain: Interval, fiber_dim: usize, jet: F) -> Result<Self>
    where
        F: Fn(f64) -> MetricJet + Send + Sync + 'static,
    {
        if fiber_dim < 1 {
            return Err(GeomError::InvalidParameter(
                "fiber_dim must be at least 1".into(),
            ));
        }
        Ok(EquidistantMetric {
            jet: Arc::new(jet),
            fiber_dim,
            domain,
        })
    }

    pub fn jet(&self, w: f64) -> MetricJet {
        (self.jet)(w)
    }

    pub fn a(&self, w: f64) -> f64 {
        self.jet(w).a
    }

    pub fn b(&self, w: f64) -> f64 {
        self.jet(w).b
    }

    pub fn fiber_dim(&self) -> usize {
        self.fiber_dim
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// True when `a > 0` and `b > 0` at `samples` interior points.
    pub fn is_positive_definite(&self, samples: usize) -> bool {
        self.domain.interior(samples).into_iter().all(|w| {
            let j = self.jet(w);
            j.a > 0.0 && j.b > 0.0
        })
    }
}

/// Induced metric of a surface of revolution: `a = r'² + z'²`, `b = r²`.
pub fn metric_from_profile(p: &RevolutionProfile, fiber_dim: usize) -> Result<EquidistantMetric> {
    for w in p.domain().linspace(VALIDATION_SAMPLES) {
        if !(p.local(w).speed_sq() > 0.0) {
            return Err(GeomError::DegenerateProfile { w });
        }
    }
    let m = p.meridian().clone();
    EquidistantMetric::from_fn(p.domain(), fiber_dim, move |w| {
        let j = m.local(w);
        MetricJet {
            a: j.speed_sq(),
            da: 2.0 * (j.dr * j.ddr + j.dz * j.ddz),
            b: j.r * j.r,
            db: 2.0 * j.r * j.dr,
        }
    })
}

const ARC_NODES: usize = 257;

/// Cumulative arc length `s(w) = ∫ sqrt(r'² + z'²)` with an inverse.
struct ArcLength {
    base: Arc<dyn Meridian>,
    nodes: Vec<f64>,
    cum: Vec<f64>,
}

impl ArcLength {
    fn speed(&self, w: f64) -> f64 {
        self.base.local(w).speed_sq().sqrt()
    }

    fn s_from_node(&self, i: usize, w: f64) -> f64 {
        let base = self.base.clone();
        let piece = quadrature::integrate(
            move |t| base.local(t).speed_sq().sqrt(),
            self.nodes[i],
            w,
            1e-15,
        )
        .unwrap_or(f64::NAN);
        self.cum[i] + piece
    }

    fn total(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    /// Original parameter at arc length `s`, by safeguarded Newton.
    fn invert(&self, s: f64) -> f64 {
        let n = self.nodes.len();
        if s <= 0.0 {
            return self.nodes[0];
        }
        if s >= self.total() {
            return self.nodes[n - 1];
        }
        let i = match self.cum.binary_search_by(|v| v.partial_cmp(&s).unwrap()) {
            Ok(i) => return self.nodes[i],
            Err(i) => i - 1,
        };
        let (mut lo, mut hi) = (self.nodes[i], self.nodes[i + 1]);
        let frac = (s - self.cum[i]) / (self.cum[i + 1] - self.cum[i]);
        let mut w = lo + frac * (hi - lo);
        for _ in 0..60 {
            let f = self.s_from_node(i, w) - s;
            if f > 0.0 {
                hi = w;
            } else {
                lo = w;
            }
            let step = f / self.speed(w);
            let mut next = w - step;
            if !(next > lo && next < hi) || !next.is_finite() {
                next = 0.5 * (lo + hi);
            }
            if (next - w).abs() <= 1e-16 * (1.0 + w.abs()) {
                return next;
            }
            w = next;
        }
        w
    }
}

impl Meridian for ArcLength {
    fn local(&self, s: f64) -> LocalJet {
        let w = self.invert(s);
        let j = self.base.local(w);
        let a = j.speed_sq();
        let speed = a.sqrt();
        let da = 2.0 * (j.dr * j.ddr + j.dz * j.ddz);
        // d/ds = (1/speed) d/dw
        let ddr = (j.ddr - j.dr * da / (2.0 * a)) / a;
        let ddz = (j.ddz - j.dz * da / (2.0 * a)) / a;
        LocalJet {
            r: j.r,
            dr: j.dr / speed,
            ddr,
            dz: j.dz / speed,
            ddz,
        }
    }

    fn z(&self, s: f64) -> f64 {
        self.base.z(self.invert(s))
    }
}

/// Reparameterizes `p` by arc length on `[0, L]`.
pub fn arclength_reparameterize(p: &RevolutionProfile, tol: f64) -> Result<RevolutionProfile> {
    if !(tol > 0.0) {
        return Err(GeomError::InvalidParameter("tol must be positive".into()));
    }
    let nodes = p.domain().linspace(ARC_NODES);
    let base = p.meridian().clone();
    let mut cum = Vec::with_capacity(ARC_NODES);
    cum.push(0.0);
    for win in nodes.windows(2) {
        let b = base.clone();
        let piece = quadrature::integrate(
            move |t| b.local(t).speed_sq().sqrt(),
            win[0],
            win[1],
            (tol * 1e-3).max(1e-15),
        )?;
        if !(piece > 0.0) {
            return Err(GeomError::Internal(format!(
                "arc length not increasing on [{}, {}]",
                win[0], win[1]
            )));
        }
        cum.push(cum.last().unwrap() + piece);
    }
    let arc = ArcLength { base, nodes, cum };
    let domain = Interval::new(0.0, arc.total())?;
    let out = RevolutionProfile::new(Arc::new(arc), domain, p.kind())?;
    for s in domain.linspace(65) {
        let dev = (out.local(s).speed_sq() - 1.0).abs();
        if dev > tol {
            return Err(GeomError::Internal(format!(
                "unit-speed check failed at s = {s}: |r'^2 + z'^2 - 1| = {dev:e}"
            )));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum PoleStatus {
    NotAPole {
        r: f64,
    },
    Pole {
        smooth: bool,
        dr_ds: f64,
        dz_ds: f64,
    },
}

impl PoleStatus {
    /// Smooth pole, or not a pole at all.
    pub fn ok(&self) -> bool {
        match self {
            PoleStatus::NotAPole { .. } => true,
            PoleStatus::Pole { smooth, .. } => *smooth,
        }
    }

    pub fn is_smooth_pole(&self) -> bool {
        matches!(self, PoleStatus::Pole { smooth: true, .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoleReport {
    pub left: PoleStatus,
    pub right: PoleStatus,
}

fn pole_status(p: &RevolutionProfile, w: f64, tol: f64) -> PoleStatus {
    let j = p.local(w);
    if j.r.abs() > tol {
        return PoleStatus::NotAPole { r: j.r };
    }
    // unit-speed derivatives, valid in any parameterization
    let speed = j.speed_sq().sqrt();
    let dr_ds = j.dr / speed;
    let dz_ds = j.dz / speed;
    PoleStatus::Pole {
        smooth: (dr_ds.abs() - 1.0).abs() <= tol && dz_ds.abs() <= tol,
        dr_ds,
        dz_ds,
    }
}

/// Checks `|dr/ds| = 1` and `dz/ds = 0` at each endpoint where `r = 0`.
pub fn pole_smoothness_check(p: &RevolutionProfile, tol: f64) -> PoleReport {
    let d = p.domain();
    PoleReport {
        left: pole_status(p, d.lo, tol),
        right: pole_status(p, d.hi, tol),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TopologyClass {
    Sphere,
    DiskOrPlane,
    Torus,
    Cylinder,
    Other,
}

impl fmt::Display for TopologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TopologyClass::Sphere => "sphere",
            TopologyClass::DiskOrPlane => "disk-or-plane",
            TopologyClass::Torus => "torus",
            TopologyClass::Cylinder => "cylinder",
            TopologyClass::Other => "other",
        };
        f.write_str(s)
    }
}

pub fn classify_topology(p: &RevolutionProfile, tol: f64) -> TopologyClass {
    let d = p.domain();
    let (r1, r2) = (p.r(d.lo), p.r(d.hi));
    if !(r1.is_finite() && r2.is_finite()) || r1 < -tol || r2 < -tol {
        return TopologyClass::Other;
    }
    let pole1 = r1.abs() <= tol;
    let pole2 = r2.abs() <= tol;
    match (pole1, pole2) {
        (true, true) => TopologyClass::Sphere,
        (true, false) | (false, true) => TopologyClass::DiskOrPlane,
        (false, false) => {
            let closes = (r1 - r2).abs() <= tol && (p.z(d.lo) - p.z(d.hi)).abs() <= tol;
            if closes {
                TopologyClass::Torus
            } else {
                TopologyClass::Cylinder
            }
        }
    }
}

/// Reads a `w,r,z` CSV table into a profile with a shape-preserving cubic
/// interpolant. Lines starting with `#` are ignored.
pub fn load_tabulated_profile<R: Read>(source: R) -> Result<RevolutionProfile> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(source);
    let header = rdr.headers()?.clone();
    let header_str = header.iter().collect::<Vec<_>>().join(",");
    let mut w = Vec::new();
    let mut r = Vec::new();
    let mut z = Vec::new();
    if header_str.is_empty() {
        return Err(GeomError::NoData);
    }
    if header.len() != 3 || &header[0] != "w" || &header[1] != "r" || &header[2] != "z" {
        return Err(GeomError::BadHeader { found: header_str });
    }
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| GeomError::MalformedRow {
            row,
            msg: e.to_string(),
        })?;
        if rec.len() != 3 {
            return Err(GeomError::MalformedRow {
                row,
                msg: format!("expected 3 fields, found {}", rec.len()),
            });
        }
        let mut vals = [0.0; 3];
        for (k, field) in rec.iter().enumerate() {
            vals[k] = field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| GeomError::MalformedRow {
                    row,
                    msg: format!("cannot parse {field:?} as a number"),
                })?;
        }
        w.push(vals[0]);
        r.push(vals[1]);
        z.push(vals[2]);
    }
    match w.len() {
        0 => return Err(GeomError::NoData),
        n if n < 4 => return Err(GeomError::TooFewRows(n)),
        _ => {}
    }
    if let Some(i) = (1..w.len()).find(|&i| w[i] <= w[i - 1]) {
        return Err(GeomError::NonMonotone { row: i + 1 });
    }
    if let Some(i) = (1..r.len() - 1).find(|&i| r[i] < 0.0) {
        return Err(GeomError::NegativeRadius { row: i + 1 });
    }
    let domain = Interval::new(w[0], *w.last().unwrap())?;
    let rc = MonotoneCubic::new(w.clone(), r)?;
    let zc = MonotoneCubic::new(w, z)?;
    RevolutionProfile::new(
        Arc::new(Tabulated { r: rc, z: zc }),
        domain,
        ProfileKind::Tabulated,
    )
}

/// Unit sphere meridian `r = sin w`, `z = 1 - cos w` on `[0, π]`.
pub fn unit_sphere_profile() -> RevolutionProfile {
    RevolutionProfile::closed_form(
        Interval {
            lo: 0.0,
            hi: std::f64::consts::PI,
        },
        |w| [w.sin(), w.cos(), -w.sin()],
        |w| [1.0 - w.cos(), w.sin(), w.cos()],
    )
    .expect("unit sphere profile is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sphere_csv(n: usize) -> String {
        let mut s = String::from("# unit sphere\nw,r,z\n");
        for i in 0..n {
            let w = PI * i as f64 / (n - 1) as f64;
            s.push_str(&format!(
                "{:.17e},{:.17e},{:.17e}\n",
                w,
                w.sin(),
                1.0 - w.cos()
            ));
        }
        s
    }

    #[test]
    fn sphere_metric_coefficients() {
        let g = metric_from_profile(&unit_sphere_profile(), 1).unwrap();
        for w in (Interval { lo: 0.0, hi: PI }).linspace(17) {
            let j = g.jet(w);
            assert!((j.a - 1.0).abs() < 1e-15);
            assert!(j.da.abs() < 1e-15);
            assert_eq!(j.b, w.sin() * w.sin());
        }
    }

    #[test]
    fn degenerate_profile_rejected() {
        let d = Interval::new(-1.0, 1.0).unwrap();
        // r' = z' = 0 at w = 0
        let err = RevolutionProfile::closed_form(
            d,
            |w| [2.0 + w * w, 2.0 * w, 2.0],
            |w| [w * w * w, 3.0 * w * w, 6.0 * w],
        )
        .unwrap_err();
        match err {
            GeomError::DegenerateProfile { w } => assert!(w.abs() < 1e-12),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn tabulated_sphere_is_accurate() {
        let p = load_tabulated_profile(sphere_csv(101).as_bytes()).unwrap();
        assert_eq!(p.kind(), ProfileKind::Tabulated);
        let g = metric_from_profile(&p, 1).unwrap();
        let h = PI / 100.0;
        let mut worst_a: f64 = 0.0;
        let mut worst_b: f64 = 0.0;
        for i in 0..100 {
            let w = (i as f64 + 0.5) * h;
            worst_a = worst_a.max((g.a(w) - 1.0).abs());
            worst_b = worst_b.max((g.b(w) - w.sin().powi(2)).abs());
        }
        assert!(worst_a < 1e-6, "max |a-1| = {worst_a:e}");
        assert!(worst_b < 1e-8, "max |b-sin^2| = {worst_b:e}");
        assert_eq!(classify_topology(&p, 1e-12), TopologyClass::Sphere);
        let poles = pole_smoothness_check(&p, POLE_TOL_TABULATED);
        assert!(poles.left.is_smooth_pole() && poles.right.is_smooth_pole());
    }

    #[test]
    fn tabulated_errors() {
        let e = load_tabulated_profile("".as_bytes()).unwrap_err();
        assert_eq!(e.to_string(), "no data rows");
        let e = load_tabulated_profile("w,r,z\n".as_bytes()).unwrap_err();
        assert_eq!(e.to_string(), "no data rows");
        let e = load_tabulated_profile("x,r,z\n0,0,0\n".as_bytes()).unwrap_err();
        assert!(matches!(e, GeomError::BadHeader { ref found } if found == "x,r,z"));
        let e =
            load_tabulated_profile("w,r,z\n0,0,0\n1,1,1\n0.5,1,2\n2,0,3\n".as_bytes()).unwrap_err();
        assert!(matches!(e, GeomError::NonMonotone { row: 3 }), "{e}");
        let e = load_tabulated_profile("w,r,z\n0,0,0\n1,1,1\n".as_bytes()).unwrap_err();
        assert!(matches!(e, GeomError::TooFewRows(2)));
        let e = load_tabulated_profile("w,r,z\n0,0,0\n1,abc,1\n".as_bytes()).unwrap_err();
        assert!(matches!(e, GeomError::MalformedRow { row: 2, .. }), "{e}");
        let e =
            load_tabulated_profile("w,r,z\n0,0,0\n1,-1,1\n2,1,2\n3,0,3\n".as_bytes()).unwrap_err();
        assert!(matches!(e, GeomError::NegativeRadius { row: 2 }));
    }

    #[test]
    fn topology_examples() {
        let cyl = RevolutionProfile::closed_form(
            Interval::new(0.0, 1.0).unwrap(),
            |_| [1.0, 0.0, 0.0],
            |w| [w, 1.0, 0.0],
        )
        .unwrap();
        assert_eq!(classify_topology(&cyl, 1e-12), TopologyClass::Cylinder);
        let torus = RevolutionProfile::closed_form(
            Interval::new(0.0, 2.0 * PI).unwrap(),
            |w| [2.0 + w.cos(), -w.sin(), -w.cos()],
            |w| [w.sin(), w.cos(), -w.sin()],
        )
        .unwrap();
        assert_eq!(classify_topology(&torus, 1e-12), TopologyClass::Torus);
        let disk = RevolutionProfile::closed_form(
            Interval::new(0.0, 1.0).unwrap(),
            |w| [w, 1.0, 0.0],
            |_| [0.0, 0.0, 0.0],
        )
        .unwrap();
        assert_eq!(classify_topology(&disk, 1e-12), TopologyClass::DiskOrPlane);
        assert_eq!(
            classify_topology(&unit_sphere_profile(), 1e-12),
            TopologyClass::Sphere
        );
    }

    #[test]
    fn non_pole_endpoint_reported() {
        let cyl = RevolutionProfile::closed_form(
            Interval::new(0.0, 1.0).unwrap(),
            |_| [1.0, 0.0, 0.0],
            |w| [w, 1.0, 0.0],
        )
        .unwrap();
        let rep = pole_smoothness_check(&cyl, 1e-8);
        assert_eq!(rep.left, PoleStatus::NotAPole { r: 1.0 });
        assert!(rep.left.ok() && rep.right.ok());
    }

    #[test]
    fn arclength_of_unit_speed_is_identity() {
        let p = unit_sphere_profile();
        let q = arclength_reparameterize(&p, 1e-10).unwrap();
        assert!((q.domain().hi - PI).abs() < 1e-13);
        for s in q.domain().linspace(33) {
            assert!((q.r(s) - s.sin()).abs() < 1e-12);
            assert!((q.z(s) - (1.0 - s.cos())).abs() < 1e-12);
        }
    }

    #[test]
    fn arclength_of_scaled_circle() {
        // speed 2 circle of radius 2
        let p = RevolutionProfile::closed_form(
            Interval::new(0.0, PI).unwrap(),
            |w| [2.0 * w.sin(), 2.0 * w.cos(), -2.0 * w.sin()],
            |w| [2.0 - 2.0 * w.cos(), 2.0 * w.sin(), 2.0 * w.cos()],
        )
        .unwrap();
        let q = arclength_reparameterize(&p, 1e-10).unwrap();
        assert!((q.domain().hi - 2.0 * PI).abs() < 1e-12);
        let g = metric_from_profile(&q, 1).unwrap();
        for s in q.domain().interior(50) {
            assert!((g.a(s) - 1.0).abs() < 1e-10);
            assert!((q.r(s) - 2.0 * (s / 2.0).sin()).abs() < 1e-11);
        }
        assert_eq!(classify_topology(&q, 1e-10), TopologyClass::Sphere);
    }
}
