//! Adaptive Dormand–Prince 5(4) integrator for small fixed-size systems.
//!
//! The right-hand side may refuse to evaluate at a state (returning `Err`);
//! the step is then retried with half the step size until `h_min`, at which
//! point integration stops and the refusal is reported.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveSettings {
    /// Local error tolerance, mixed absolute/relative.
    pub tol: f64,
    pub h_init: f64,
    pub h_max: f64,
    pub h_min: f64,
    pub max_steps: usize,
}

impl AdaptiveSettings {
    pub fn with_tol(tol: f64) -> Self {
        AdaptiveSettings {
            tol,
            h_init: 1e-3,
            h_max: 0.02,
            h_min: 1e-14,
            max_steps: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
}

#[derive(Debug, Clone)]
pub enum Stop<E> {
    Completed,
    /// The right-hand side refused every step down to `h_min`.
    Refused(E),
}

#[derive(Debug, Clone)]
pub struct Solution<const N: usize, E> {
    pub t: Vec<f64>,
    pub y: Vec<[f64; N]>,
    pub stats: StepStats,
    pub max_error_estimate: f64,
    pub stop: Stop<E>,
}

#[derive(Debug, Clone)]
pub enum SolveError<const N: usize> {
    StepUnderflow { t: f64, y: [f64; N] },
    TooManySteps { t: f64, y: [f64; N] },
    InitialRhs,
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
// fifth-order weights (also the last stage row, FSAL)
const B: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
// b5 - b4
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn combine<const N: usize>(y: &[f64; N], h: f64, coeffs: &[f64], ks: &[[f64; N]]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in coeffs.iter().zip(ks) {
        if *c != 0.0 {
            for i in 0..N {
                out[i] += h * c * k[i];
            }
        }
    }
    out
}

struct Trial<const N: usize> {
    y: [f64; N],
    k_last: [f64; N],
    err: f64,
}

fn trial_step<const N: usize, F, Er>(
    f: &F,
    t: f64,
    y: &[f64; N],
    k1: &[f64; N],
    h: f64,
    tol: f64,
) -> Result<Trial<N>, Er>
where
    F: Fn(f64, &[f64; N]) -> Result<[f64; N], Er>,
{
    let mut ks: Vec<[f64; N]> = Vec::with_capacity(7);
    ks.push(*k1);
    let rows: [&[f64]; 5] = [&A2, &A3, &A4, &A5, &A6];
    for (s, row) in rows.iter().enumerate() {
        let ys = combine(y, h, row, &ks);
        ks.push(f(t + C[s + 1] * h, &ys)?);
    }
    let y_new = combine(y, h, &B, &ks);
    let k7 = f(t + h, &y_new)?;
    ks.push(k7);
    let mut err: f64 = 0.0;
    for i in 0..N {
        let e: f64 = E.iter().zip(&ks).map(|(c, k)| c * k[i]).sum::<f64>() * h;
        let scale = tol * (1.0 + y[i].abs().max(y_new[i].abs()));
        err = err.max(e.abs() / scale);
    }
    Ok(Trial {
        y: y_new,
        k_last: k7,
        err,
    })
}

/// Integrates `y' = f(t, y)` from `t0` to `t_end` (either direction),
/// recording every accepted step.
pub fn solve<const N: usize, F, Er>(
    f: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    settings: &AdaptiveSettings,
) -> Result<Solution<N, Er>, SolveError<N>>
where
    F: Fn(f64, &[f64; N]) -> Result<[f64; N], Er>,
{
    let dir = if t_end >= t0 { 1.0 } else { -1.0 };
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y).map_err(|_| SolveError::InitialRhs)?;
    let mut sol = Solution {
        t: vec![t0],
        y: vec![y0],
        stats: StepStats::default(),
        max_error_estimate: 0.0,
        stop: Stop::Completed,
    };
    let mut h = settings.h_init.min(settings.h_max).max(settings.h_min);
    let span = (t_end - t0).abs();
    while (t - t0).abs() < span {
        if sol.stats.accepted + sol.stats.rejected >= settings.max_steps {
            return Err(SolveError::TooManySteps { t, y });
        }
        let remaining = (t_end - t).abs();
        let last = h >= remaining * (1.0 - 1e-12);
        let h_step = if last { remaining } else { h };
        match trial_step(&f, t, &y, &k1, dir * h_step, settings.tol) {
            Ok(trial) if trial.err <= 1.0 => {
                t = if last { t_end } else { t + dir * h_step };
                y = trial.y;
                k1 = trial.k_last;
                sol.t.push(t);
                sol.y.push(y);
                sol.stats.accepted += 1;
                sol.max_error_estimate = sol.max_error_estimate.max(trial.err * settings.tol);
                let factor = if trial.err == 0.0 {
                    5.0
                } else {
                    (0.9 * trial.err.powf(-0.2)).clamp(0.2, 5.0)
                };
                if !last {
                    h = (h_step * factor).min(settings.h_max);
                }
            }
            Ok(trial) => {
                sol.stats.rejected += 1;
                h = h_step * (0.9 * trial.err.powf(-0.2)).clamp(0.1, 0.9);
                if h < settings.h_min {
                    return Err(SolveError::StepUnderflow { t, y });
                }
            }
            Err(refusal) => {
                sol.stats.rejected += 1;
                h = 0.5 * h_step;
                if h < settings.h_min {
                    sol.stop = Stop::Refused(refusal);
                    return Ok(sol);
                }
            }
        }
    }
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_period() {
        let f = |_t: f64, y: &[f64; 2]| -> Result<[f64; 2], ()> { Ok([y[1], -y[0]]) };
        let s = solve(
            f,
            0.0,
            [1.0, 0.0],
            2.0 * std::f64::consts::PI,
            &AdaptiveSettings::with_tol(1e-12),
        )
        .unwrap();
        let y = s.y.last().unwrap();
        assert!((y[0] - 1.0).abs() < 1e-9 && y[1].abs() < 1e-9, "{y:?}");
        assert!(matches!(s.stop, Stop::Completed));
        assert_eq!(*s.t.last().unwrap(), 2.0 * std::f64::consts::PI);
    }

    #[test]
    fn exponential_backward() {
        let f = |_t: f64, y: &[f64; 1]| -> Result<[f64; 1], ()> { Ok([y[0]]) };
        let s = solve(f, 1.0, [1.0], 0.0, &AdaptiveSettings::with_tol(1e-12)).unwrap();
        assert!((s.y.last().unwrap()[0] - (-1f64).exp()).abs() < 1e-11);
        assert!(s.t.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn refusal_stops_integration() {
        // refuse to enter y > 0.5
        let f = |_t: f64, y: &[f64; 1]| -> Result<[f64; 1], &'static str> {
            if y[0] > 0.5 {
                Err("wall")
            } else {
                Ok([1.0])
            }
        };
        let s = solve(f, 0.0, [0.0], 2.0, &AdaptiveSettings::with_tol(1e-10)).unwrap();
        assert!(matches!(s.stop, Stop::Refused("wall")));
        let t_last = *s.t.last().unwrap();
        assert!(t_last <= 0.5 && t_last > 0.5 - 1e-10, "{t_last}");
    }
}
