//! Geodesics of `a(w) dw² + b(w) dσ²` in the (w, σ) chart.
//!
//! By rotational symmetry every geodesic stays in a totally geodesic
//! 2-surface spanned by ∂w and one great-circle direction of the fiber
//! sphere, so the (w, σ) block is enough whatever the fiber dimension.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::mapping::{admissible_q_range, christoffel_from_jet, map_metric, MappingParams};
use crate::ode::{self, AdaptiveSettings, SolveError, Stop};
use crate::par::{self, Execution};
use crate::profile::EquidistantMetric;
use crate::quadrature::golden_section_min;

/// Integration stops once `b(w)` drops below this fraction of `max b`.
pub const POLE_GUARD: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeodesicState {
    pub w: f64,
    /// Rotation angle, unwrapped.
    pub sigma: f64,
    pub w_dot: f64,
    pub sigma_dot: f64,
}

impl GeodesicState {
    fn to_array(self) -> [f64; 4] {
        [self.w, self.sigma, self.w_dot, self.sigma_dot]
    }

    fn from_array(y: &[f64; 4]) -> Self {
        GeodesicState {
            w: y[0],
            sigma: y[1],
            w_dot: y[2],
            sigma_dot: y[3],
        }
    }

    /// `sqrt(a ẇ² + b σ̇²)`.
    pub fn speed(&self, g: &EquidistantMetric) -> f64 {
        let j = g.jet(self.w);
        (j.a * self.w_dot * self.w_dot + j.b * self.sigma_dot * self.sigma_dot).sqrt()
    }

    /// Same point, tangent rescaled to unit speed in `g`.
    pub fn normalized(&self, g: &EquidistantMetric) -> Result<Self> {
        let s = self.speed(g);
        if !(s > 0.0 && s.is_finite()) {
            return Err(GeomError::InvalidParameter(
                "initial tangent must have positive finite speed".into(),
            ));
        }
        Ok(GeodesicState {
            w_dot: self.w_dot / s,
            sigma_dot: self.sigma_dot / s,
            ..*self
        })
    }

    pub fn reversed(&self) -> Self {
        GeodesicState {
            w_dot: -self.w_dot,
            sigma_dot: -self.sigma_dot,
            ..*self
        }
    }
}

/// Why the right-hand side refused a state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Contact {
    /// `b(w)` fell inside the pole guard band.
    Pole,
    /// `w` left the metric domain.
    Boundary,
}

fn rhs_guarded(
    g: &EquidistantMetric,
    y: &[f64; 4],
    b_guard: f64,
) -> std::result::Result<[f64; 4], Contact> {
    let [w, _, wd, sd] = *y;
    if !g.domain().contains(w) {
        return Err(Contact::Boundary);
    }
    let j = g.jet(w);
    if !(j.b > b_guard) {
        return Err(Contact::Pole);
    }
    let c = christoffel_from_jet(j, w).map_err(|_| Contact::Pole)?;
    Ok([
        wd,
        sd,
        -c.g_w_ww * wd * wd - c.g_w_ss * sd * sd,
        -2.0 * c.g_s_ws * wd * sd,
    ])
}

/// `(ẇ, σ̇, ẅ, σ̈)` from the geodesic equations. Refuses states at a pole
/// (`b ≤ 0`) or outside the domain.
pub fn geodesic_rhs(
    g: &EquidistantMetric,
    s: &GeodesicState,
) -> std::result::Result<[f64; 4], Contact> {
    rhs_guarded(g, &s.to_array(), 0.0)
}

/// `b σ̇ / sqrt(a ẇ² + b σ̇²)`, i.e. `b dσ/ds`.
pub fn clairaut_invariant(g: &EquidistantMetric, s: &GeodesicState) -> Result<f64> {
    let speed = s.speed(g);
    if !(speed > 0.0) {
        return Err(GeomError::InvalidParameter("zero-speed state".into()));
    }
    Ok(g.b(s.w) * s.sigma_dot / speed)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceSample {
    pub t: f64,
    pub state: GeodesicState,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct IntegratorStats {
    pub steps: usize,
    pub rejected_steps: usize,
    pub max_error_estimate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceStatus {
    Completed,
    PoleContact,
    BoundaryContact,
}

#[derive(Debug, Clone)]
pub struct GeodesicTrace {
    pub samples: Vec<TraceSample>,
    pub metric: EquidistantMetric,
    pub stats: IntegratorStats,
    pub status: TraceStatus,
}

impl GeodesicTrace {
    pub fn first(&self) -> &TraceSample {
        &self.samples[0]
    }

    pub fn last(&self) -> &TraceSample {
        self.samples.last().expect("trace is never empty")
    }

    pub fn clairaut_values(&self) -> Result<Vec<f64>> {
        self.samples
            .iter()
            .map(|s| clairaut_invariant(&self.metric, &s.state))
            .collect()
    }

    /// `max |c(t) - c(0)|` of the Clairaut invariant.
    pub fn clairaut_drift(&self) -> Result<f64> {
        let c = self.clairaut_values()?;
        Ok(c.iter().map(|v| (v - c[0]).abs()).fold(0.0, f64::max))
    }

    /// `max |speed(t) - speed(0)|`.
    pub fn speed_drift(&self) -> f64 {
        let s0 = self.first().state.speed(&self.metric);
        self.samples
            .iter()
            .map(|s| (s.state.speed(&self.metric) - s0).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicSettings {
    pub ode: AdaptiveSettings,
    /// Relative pole guard, see [`POLE_GUARD`].
    pub pole_guard: f64,
}

impl GeodesicSettings {
    pub fn with_tol(tol: f64) -> Self {
        GeodesicSettings {
            ode: AdaptiveSettings::with_tol(tol),
            pole_guard: POLE_GUARD,
        }
    }
}

pub fn integrate_geodesic(
    g: &EquidistantMetric,
    init: GeodesicState,
    t_end: f64,
    tol: f64,
) -> Result<GeodesicTrace> {
    integrate_geodesic_with(g, init, t_end, &GeodesicSettings::with_tol(tol))
}

pub fn integrate_geodesic_with(
    g: &EquidistantMetric,
    init: GeodesicState,
    t_end: f64,
    settings: &GeodesicSettings,
) -> Result<GeodesicTrace> {
    if !(settings.ode.tol > 0.0) {
        return Err(GeomError::InvalidParameter("tol must be positive".into()));
    }
    if !t_end.is_finite() {
        return Err(GeomError::InvalidParameter("t_end must be finite".into()));
    }
    let b_max = admissible_q_range(g).b_max;
    let b_guard = settings.pole_guard * b_max;
    let y0 = init.to_array();
    if !y0.iter().all(|v| v.is_finite()) || (init.w_dot == 0.0 && init.sigma_dot == 0.0) {
        return Err(GeomError::InvalidParameter(
            "initial state must be finite with nonzero tangent".into(),
        ));
    }
    if rhs_guarded(g, &y0, b_guard).is_err() {
        return Err(GeomError::InvalidParameter(format!(
            "initial w = {} is outside the domain or inside the pole guard band",
            init.w
        )));
    }
    let sol = ode::solve(
        |_t, y| rhs_guarded(g, y, b_guard),
        0.0,
        y0,
        t_end,
        &settings.ode,
    )
    .map_err(|e| match e {
        SolveError::StepUnderflow { t, y } | SolveError::TooManySteps { t, y } => {
            GeomError::StepUnderflow {
                t,
                last: GeodesicState::from_array(&y),
            }
        }
        SolveError::InitialRhs => GeomError::Internal("initial state refused".into()),
    })?;
    let status = match sol.stop {
        Stop::Completed => TraceStatus::Completed,
        Stop::Refused(Contact::Pole) => TraceStatus::PoleContact,
        Stop::Refused(Contact::Boundary) => TraceStatus::BoundaryContact,
    };
    let samples = sol
        .t
        .iter()
        .zip(&sol.y)
        .map(|(&t, y)| TraceSample {
            t,
            state: GeodesicState::from_array(y),
        })
        .collect();
    Ok(GeodesicTrace {
        samples,
        metric: g.clone(),
        stats: IntegratorStats {
            steps: sol.stats.accepted,
            rejected_steps: sol.stats.rejected,
            max_error_estimate: sol.max_error_estimate,
        },
        status,
    })
}

/// Cubic Hermite point on segment `i` of `trace` at local fraction `s`.
fn hermite(trace: &GeodesicTrace, i: usize, s: f64) -> (f64, f64) {
    let (p, q) = (&trace.samples[i], &trace.samples[i + 1]);
    let h = q.t - p.t;
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    let w = h00 * p.state.w + h10 * h * p.state.w_dot + h01 * q.state.w + h11 * h * q.state.w_dot;
    let sg = h00 * p.state.sigma
        + h10 * h * p.state.sigma_dot
        + h01 * q.state.sigma
        + h11 * h * q.state.sigma_dot;
    (w, sg)
}

/// Smallest `g`-distance from `(w, σ)` to the segments `segs` of `other`,
/// measured with `g` at the query point, and where along `other` it occurs.
fn nearest_on_segments(
    g: &EquidistantMetric,
    w: f64,
    sigma: f64,
    other: &GeodesicTrace,
    segs: impl IntoIterator<Item = usize>,
) -> (f64, f64) {
    let j = g.jet(w);
    let d2 = |pw: f64, ps: f64| {
        let (dw, ds) = (pw - w, ps - sigma);
        j.a * dw * dw + j.b * ds * ds
    };
    let mut best = (f64::INFINITY, 0.0);
    for i in segs {
        for (node, at) in [(i, i as f64), (i + 1, (i + 1) as f64)] {
            let st = &other.samples[node].state;
            let v = d2(st.w, st.sigma);
            if v < best.0 {
                best = (v, at);
            }
        }
        let (s, v) = golden_section_min(
            |s| {
                let (pw, ps) = hermite(other, i, s);
                d2(pw, ps)
            },
            0.0,
            1.0,
            1e-12,
        );
        if v < best.0 {
            best = (v, i as f64 + s);
        }
    }
    (best.0.max(0.0).sqrt(), best.1)
}

/// Distance from `(w, σ)` to the curve of `other` by a global search.
/// `None` when the closest point is the far end of `other` (the query lies
/// beyond the overlap).
fn distance_to_curve(
    g: &EquidistantMetric,
    w: f64,
    sigma: f64,
    other: &GeodesicTrace,
) -> Option<f64> {
    let n = other.samples.len();
    if n < 2 {
        let s = &other.samples[0].state;
        let j = g.jet(w);
        return Some((j.a * (s.w - w).powi(2) + j.b * (s.sigma - sigma).powi(2)).sqrt());
    }
    let j = g.jet(w);
    let imin = other
        .samples
        .iter()
        .enumerate()
        .map(|(i, s)| {
            (
                i,
                j.a * (s.state.w - w).powi(2) + j.b * (s.state.sigma - sigma).powi(2),
            )
        })
        .fold(
            (0, f64::INFINITY),
            |acc, x| if x.1 < acc.1 { x } else { acc },
        )
        .0;
    let segs = [imin.checked_sub(1), (imin + 1 < n).then_some(imin)];
    let (d, at) = nearest_on_segments(g, w, sigma, other, segs.into_iter().flatten());
    if at >= (n - 1) as f64 - 1e-9 && d > 1e-14 {
        None
    } else {
        Some(d)
    }
}

/// Chart coordinate that is strictly monotone along a trace: `σ` whenever
/// the Clairaut constant is nonzero, `w` along meridians.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Key {
    Sigma,
    W,
}

fn key_values(trace: &GeodesicTrace, key: Key) -> Vec<f64> {
    trace
        .samples
        .iter()
        .map(|s| match key {
            Key::Sigma => s.state.sigma,
            Key::W => s.state.w,
        })
        .collect()
}

fn direction(v: &[f64]) -> Option<f64> {
    if v.len() < 2 {
        return None;
    }
    let d = (v[1] - v[0]).signum();
    (d != 0.0 && v.windows(2).all(|p| (p[1] - p[0]) * d > 0.0)).then_some(d)
}

fn common_key(t1: &GeodesicTrace, t2: &GeodesicTrace) -> Option<Key> {
    [Key::Sigma, Key::W].into_iter().find(|&k| {
        let (d1, d2) = (direction(&key_values(t1, k)), direction(&key_values(t2, k)));
        d1.is_some() && d1 == d2
    })
}

/// Deviation with the search on `to` localized by a monotone key: only the
/// segment whose key range contains the query's key and its neighbours are
/// searched, so distinct passes of the curve near a pole are not confused.
fn keyed_deviation(
    g: &EquidistantMetric,
    from: &GeodesicTrace,
    to: &GeodesicTrace,
    key: Key,
) -> (f64, usize) {
    let kv = key_values(to, key);
    let dir = direction(&kv).unwrap_or(1.0);
    // oriented so that the sequence increases
    let kv: Vec<f64> = kv.iter().map(|v| v * dir).collect();
    let n = kv.len();
    let mut worst = 0.0_f64;
    let mut compared = 0;
    for (s, q) in from.samples.iter().zip(key_values(from, key)) {
        let q = q * dir;
        if q < kv[0] || q > kv[n - 1] {
            continue;
        }
        let i = kv.partition_point(|&v| v <= q).clamp(1, n - 1) - 1;
        let segs = i.saturating_sub(1)..(i + 2).min(n - 1);
        let (d, _) = nearest_on_segments(g, s.state.w, s.state.sigma, to, segs);
        worst = worst.max(d);
        compared += 1;
    }
    (worst, compared)
}

fn one_sided_deviation(
    g: &EquidistantMetric,
    from: &GeodesicTrace,
    to: &GeodesicTrace,
) -> (f64, usize) {
    let mut worst = 0.0_f64;
    let mut compared = 0;
    for s in &from.samples {
        if let Some(d) = distance_to_curve(g, s.state.w, s.state.sigma, to) {
            worst = worst.max(d);
            compared += 1;
        }
    }
    (worst, compared)
}

/// Largest distance between the point sets of two traces over their common
/// extent, in the metric of `t1`. Parameterization is ignored.
pub fn unparametrized_deviation(t1: &GeodesicTrace, t2: &GeodesicTrace) -> Result<f64> {
    let g = &t1.metric;
    let ((d12, n12), (d21, n21)) = match common_key(t1, t2) {
        Some(key) => (
            keyed_deviation(g, t1, t2, key),
            keyed_deviation(g, t2, t1, key),
        ),
        None => (
            one_sided_deviation(g, t1, t2),
            one_sided_deviation(g, t2, t1),
        ),
    };
    if n12 + n21 == 0 {
        return Err(GeomError::DisjointTraces);
    }
    Ok(d12.max(d21))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub init: GeodesicState,
    #[serde(rename = "deviation_max")]
    pub max_transverse_deviation: f64,
    /// Larger of the two drifts.
    pub clairaut_drift: f64,
    pub clairaut_drift_g: f64,
    pub clairaut_drift_gbar: f64,
    pub deviation_tol: f64,
    pub clairaut_tol: f64,
    pub status_g: TraceStatus,
    pub status_gbar: TraceStatus,
    pub passed: bool,
}

/// Integrates the same initial point and direction under `g` and its image
/// under `mp` and compares the two curves.
pub fn verify_geodesic_equivalence(
    g: &EquidistantMetric,
    mp: MappingParams,
    init: GeodesicState,
    t_end: f64,
    tol: f64,
) -> Result<EquivalenceReport> {
    let gbar = map_metric(g, mp)?;
    equivalence_with_image(g, &gbar, init, t_end, tol)
}

fn equivalence_with_image(
    g: &EquidistantMetric,
    gbar: &EquidistantMetric,
    init: GeodesicState,
    t_end: f64,
    tol: f64,
) -> Result<EquivalenceReport> {
    let init_g = init.normalized(g)?;
    let init_gbar = init.normalized(gbar)?;
    let tr = integrate_geodesic(g, init_g, t_end, tol)?;
    let trb = integrate_geodesic(gbar, init_gbar, t_end, tol)?;
    let dev = unparametrized_deviation(&tr, &trb)?;
    let cg = tr.clairaut_drift()?;
    let cgb = trb.clairaut_drift()?;
    let deviation_tol = 1e3 * tol;
    let clairaut_tol = 1e2 * tol;
    Ok(EquivalenceReport {
        init,
        max_transverse_deviation: dev,
        clairaut_drift: cg.max(cgb),
        clairaut_drift_g: cg,
        clairaut_drift_gbar: cgb,
        deviation_tol,
        clairaut_tol,
        status_g: tr.status,
        status_gbar: trb.status,
        passed: dev <= deviation_tol && cg <= clairaut_tol && cgb <= clairaut_tol,
    })
}

/// [`verify_geodesic_equivalence`] over many initial states; the image
/// metric is built once and the runs are independent.
pub fn verify_equivalence_batch(
    g: &EquidistantMetric,
    mp: MappingParams,
    inits: &[GeodesicState],
    t_end: f64,
    tol: f64,
    exec: Execution,
) -> Result<Vec<EquivalenceReport>> {
    let gbar = map_metric(g, mp)?;
    par::try_map(exec, inits.to_vec(), |init| {
        equivalence_with_image(g, &gbar, init, t_end, tol)
    })
}

/// Seeded initial states with unit `g`-speed, started in the middle half of
/// the domain and kept away from meridional directions (|sin θ| ≥ 0.2, θ
/// measured from ∂w) so they do not run into a pole.
pub fn random_initial_states(g: &EquidistantMetric, n: usize, seed: u64) -> Vec<GeodesicState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = g.domain();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let w = d.lo + d.len() * rng.random_range(0.25..0.75);
        let sigma = rng.random_range(0.0..2.0 * PI);
        let theta: f64 = rng.random_range(0.0..2.0 * PI);
        if theta.sin().abs() < 0.2 {
            continue;
        }
        let j = g.jet(w);
        out.push(GeodesicState {
            w,
            sigma,
            w_dot: theta.cos() / j.a.sqrt(),
            sigma_dot: theta.sin() / j.b.sqrt(),
        });
    }
    out
}

/// Maps a trace of the Euclidean plane in polar form (`a = 1`, `b = w²`) to
/// Cartesian coordinates.
pub fn polar_to_cartesian(s: &GeodesicState) -> (f64, f64) {
    (s.w * s.sigma.cos(), s.w * s.sigma.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{metric_from_profile, unit_sphere_profile, Interval, MetricJet};

    fn sphere() -> EquidistantMetric {
        metric_from_profile(&unit_sphere_profile(), 1).unwrap()
    }

    fn flat_polar() -> EquidistantMetric {
        EquidistantMetric::from_fn(Interval::new(0.0, 10.0).unwrap(), 1, |w| MetricJet {
            a: 1.0,
            da: 0.0,
            b: w * w,
            db: 2.0 * w,
        })
        .unwrap()
    }

    #[test]
    fn rhs_examples() {
        let g = sphere();
        let eq = GeodesicState {
            w: PI / 2.0,
            sigma: 0.0,
            w_dot: 0.0,
            sigma_dot: 1.0,
        };
        let d = geodesic_rhs(&g, &eq).unwrap();
        assert!(d[2].abs() < 1e-16 && d[3] == 0.0);

        let s = GeodesicState {
            w: 1.0,
            sigma: 0.0,
            w_dot: 0.0,
            sigma_dot: 1.0,
        };
        let d = geodesic_rhs(&flat_polar(), &s).unwrap();
        assert_eq!(d[2], 1.0);

        let m = GeodesicState {
            w: 1.0,
            sigma: 0.3,
            w_dot: 1.0,
            sigma_dot: 0.0,
        };
        assert_eq!(geodesic_rhs(&g, &m).unwrap()[3], 0.0);

        let pole = GeodesicState { w: 0.0, ..m };
        assert_eq!(geodesic_rhs(&g, &pole), Err(Contact::Pole));
    }

    #[test]
    fn clairaut_examples() {
        let g = sphere();
        let eq = GeodesicState {
            w: PI / 2.0,
            sigma: 0.0,
            w_dot: 0.0,
            sigma_dot: 1.0,
        };
        assert!((clairaut_invariant(&g, &eq).unwrap() - 1.0).abs() < 1e-15);
        let zero = GeodesicState {
            w_dot: 0.0,
            sigma_dot: 0.0,
            ..eq
        };
        assert!(clairaut_invariant(&g, &zero).is_err());
    }

    #[test]
    fn meridian_stays_meridional() {
        let g = sphere();
        let init = GeodesicState {
            w: 1.0,
            sigma: 0.4,
            w_dot: 1.0,
            sigma_dot: 0.0,
        };
        let tr = integrate_geodesic(&g, init, 1.5, 1e-10).unwrap();
        assert!(tr
            .samples
            .iter()
            .all(|s| (s.state.sigma - 0.4).abs() < 1e-12));
        assert!(tr.clairaut_values().unwrap().iter().all(|c| *c == 0.0));
    }

    #[test]
    fn meridian_hits_pole_guard() {
        let g = sphere();
        let init = GeodesicState {
            w: 1.0,
            sigma: 0.0,
            w_dot: 1.0,
            sigma_dot: 0.0,
        };
        let tr = integrate_geodesic(&g, init, 5.0, 1e-10).unwrap();
        assert_eq!(tr.status, TraceStatus::PoleContact);
        let w_last = tr.last().state.w;
        assert!(PI - w_last < 1e-4, "stopped at {w_last}");
    }

    #[test]
    fn invalid_init_rejected() {
        let g = sphere();
        let bad = GeodesicState {
            w: 1.0,
            sigma: 0.0,
            w_dot: 0.0,
            sigma_dot: 0.0,
        };
        assert!(integrate_geodesic(&g, bad, 1.0, 1e-10).is_err());
        let out = GeodesicState {
            w: 4.0,
            w_dot: 1.0,
            ..bad
        };
        assert!(integrate_geodesic(&g, out, 1.0, 1e-10).is_err());
    }

    #[test]
    fn self_deviation_is_zero() {
        let g = sphere();
        let init = random_initial_states(&g, 1, 3)[0];
        let tr = integrate_geodesic(&g, init, 2.0, 1e-10).unwrap();
        assert_eq!(unparametrized_deviation(&tr, &tr).unwrap(), 0.0);
    }

    #[test]
    fn seeded_states_are_reproducible_and_unit_speed() {
        let g = sphere();
        let a = random_initial_states(&g, 5, 42);
        let b = random_initial_states(&g, 5, 42);
        assert_eq!(a, b);
        for s in &a {
            assert!((s.speed(&g) - 1.0).abs() < 1e-14);
        }
    }
}
