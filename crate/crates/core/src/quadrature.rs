//! Adaptive Gauss–Kronrod (7/15) quadrature and a golden-section minimizer.

// tables keep their published digits
#![allow(clippy::excessive_precision)]

use crate::error::{GeomError, Result};

// Kronrod abscissae and weights, QUADPACK qk15 table.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for the odd Kronrod nodes 1, 3, 5, 7(centre).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_DEPTH: u32 = 60;

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Integrates `f` over `[a, b]` to absolute accuracy `abs_tol`.
///
/// Intervals are bisected until the Kronrod–Gauss difference on each piece
/// falls below its share of the tolerance. Reversed limits flip the sign.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(GeomError::Domain(
            "integration limits must be finite".into(),
        ));
    }
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return integrate(f, b, a, abs_tol).map(|v| -v);
    }
    let total = b - a;
    let (v, e) = kronrod15(&f, a, b);
    let value = refine(&f, a, b, v, e, abs_tol, total, 0)?;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(GeomError::Domain(format!(
            "integrand is not finite on [{a}, {b}]"
        )))
    }
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    whole: f64,
    err: f64,
    abs_tol: f64,
    total: f64,
    depth: u32,
) -> Result<f64> {
    // tolerance share proportional to interval width, with a roundoff floor
    let share = abs_tol * (b - a) / total;
    let floor = 50.0 * f64::EPSILON * whole.abs();
    if err <= share.max(floor) {
        return Ok(whole);
    }
    if depth >= MAX_DEPTH {
        return Err(GeomError::Domain(format!(
            "quadrature did not converge on [{a}, {b}] (error estimate {err:e})"
        )));
    }
    let m = 0.5 * (a + b);
    let (l, el) = kronrod15(f, a, m);
    let (r, er) = kronrod15(f, m, b);
    Ok(refine(f, a, m, l, el, abs_tol, total, depth + 1)?
        + refine(f, m, b, r, er, abs_tol, total, depth + 1)?)
}

/// Minimizes a unimodal `f` on `[a, b]`; returns `(argmin, min)`.
pub fn golden_section_min<F: Fn(f64) -> f64>(
    f: F,
    mut a: f64,
    mut b: f64,
    x_tol: f64,
) -> (f64, f64) {
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iter = 0;
    while (b - a).abs() > x_tol && iter < 200 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        iter += 1;
    }
    // the bracket endpoints themselves may be the minimizer
    let mut best = if fc < fd { (c, fc) } else { (d, fd) };
    for x in [a, b] {
        let fx = f(x);
        if fx < best.1 {
            best = (x, fx);
        }
    }
    best
}
