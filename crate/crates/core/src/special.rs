//! Numerical helpers shared by the analytic modules: root bracketing,
//! adaptive Gauss-Kronrod quadrature and incomplete gamma wrappers.

use crate::error::{Error, Result};

/// Finds a root of `f` on `[lo, hi]` by bisection with a secant step when it
/// stays inside the bracket. `f(lo)` and `f(hi)` must have opposite signs
/// (a zero at either end is accepted).
pub fn find_root<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, xtol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::Bracket { lo, hi });
    }
    for iter in 0..400 {
        if (b - a).abs() <= xtol * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        // alternate secant and bisection so a bad secant cannot stall progress
        let mut m = 0.5 * (a + b);
        if iter % 2 == 0 {
            let s = b - fb * (b - a) / (fb - fa);
            if s.is_finite() && s > a.min(b) && s < a.max(b) {
                m = s;
            }
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    Ok(if fa.abs() < fb.abs() { a } else { b })
}

// Kronrod 15-point nodes/weights with the embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Adaptive G7-K15 quadrature on a finite interval.
///
/// Returns `(value, error_estimate)`. The error estimate is the sum of the
/// per-panel Kronrod-Gauss differences, which overestimates the true error
/// for smooth integrands.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64) -> (f64, f64) {
    if b <= a {
        return (0.0, 0.0);
    }
    let mut stack = vec![(a, b, abs_tol, 0u32)];
    let mut total = 0.0;
    let mut err = 0.0;
    while let Some((lo, hi, tol, depth)) = stack.pop() {
        let (v, e) = gk15(&mut f, lo, hi);
        if e <= tol.max(1e-300) || depth >= 48 || (hi - lo) <= 1e-14 * hi.abs().max(1.0) {
            total += v;
            err += e;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, 0.5 * tol, depth + 1));
            stack.push((mid, hi, 0.5 * tol, depth + 1));
        }
    }
    (total, err)
}

pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

/// Unregularized upper incomplete gamma Γ(a, x).
pub fn upper_gamma(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return gamma(a);
    }
    statrs::function::gamma::gamma_ur(a, x) * gamma(a)
}

/// Unregularized lower incomplete gamma γ(a, x).
pub fn lower_gamma(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return gamma(a);
    }
    statrs::function::gamma::gamma_lr(a, x) * gamma(a)
}

/// `∫_r^∞ s^{d-1} e^{-μ s} ds` for integer `d ≥ 1`, in closed form.
pub fn erlang_moment_tail(d: u32, mu: f64, r: f64) -> f64 {
    let r = r.max(0.0);
    let x = mu * r;
    // (d-1)!/μ^d · e^{-x} Σ_{k<d} x^k/k!
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..d {
        term *= x / k as f64;
        sum += term;
    }
    let fact: f64 = (1..d).map(|k| k as f64).product();
    fact / mu.powi(d as i32) * (-x).exp() * sum
}

/// `ln(1 - e^{-x})` for `x > 0`, accurate at both ends.
pub fn ln1m_exp_neg(x: f64) -> f64 {
    if x > std::f64::consts::LN_2 {
        (-(-x).exp()).ln_1p()
    } else {
        (-(-x).exp_m1()).ln()
    }
}
