//! Complex gamma and Riemann zeta in double precision.
//!
//! `ln_gamma` uses an upward shift into the Stirling regime plus the
//! reflection formula; `zeta` uses Euler–Maclaurin with the functional
//! equation for Re s < 0.

use num_complex::Complex64 as C64;
use num_traits::Zero;
use std::f64::consts::PI;

/// Even-index Bernoulli numbers B_2, B_4, ..., B_40 as floats.
pub const BERNOULLI_EVEN: [f64; 20] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
    2577687858367.0 / 6.0,
    -26315271553053477373.0 / 1919190.0,
    2929993913841559.0 / 6.0,
    -261082718496449122051.0 / 13530.0,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Principal-branch-agnostic log Γ(z); only `exp` of the result is meaningful
/// across branch cuts.
pub fn ln_gamma(z: C64) -> C64 {
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return C64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(C64::new(1.0, 0.0) - z);
    }
    let mut w = z;
    let mut shift = C64::zero();
    while w.norm() < 16.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut corr = C64::zero();
    let mut pow = inv;
    for (j, b) in BERNOULLI_EVEN.iter().take(10).enumerate() {
        let n = (j + 1) as f64;
        corr += pow * (b / (2.0 * n * (2.0 * n - 1.0)));
        pow *= inv2;
    }
    (w - 0.5) * w.ln() - w + LN_SQRT_2PI + corr - shift
}

pub fn gamma(z: C64) -> C64 {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return C64::new(f64::INFINITY, 0.0);
    }
    ln_gamma(z).exp()
}

/// log|Γ(x)| for real x.
pub fn ln_gamma_real(x: f64) -> f64 {
    ln_gamma(C64::new(x, 0.0)).re
}

pub fn gamma_real(x: f64) -> f64 {
    if x > 0.0 && x < 171.0 {
        let v = ln_gamma(C64::new(x, 0.0)).exp();
        return v.re;
    }
    gamma(C64::new(x, 0.0)).re
}

/// Whether z is within `tol` of a non-positive integer (a pole of Γ).
pub fn near_gamma_pole(z: C64, tol: f64) -> bool {
    z.re < 0.5 && (z.re - z.re.round()).abs() < tol && z.im.abs() < tol
}

/// Riemann ζ(s) for s ≠ 1.
pub fn zeta(s: C64) -> C64 {
    if s.re < -0.5 {
        // ζ(s) = 2^s π^{s-1} sin(πs/2) Γ(1-s) ζ(1-s)
        let one_minus = C64::new(1.0, 0.0) - s;
        let pref = (s * 2f64.ln() + (s - 1.0) * PI.ln() + ln_gamma(one_minus)).exp();
        return pref * (s * (PI / 2.0)).sin() * zeta(one_minus);
    }
    let n = 20 + s.im.abs().ceil() as usize;
    let nf = n as f64;
    let mut sum = C64::zero();
    for k in 1..n {
        sum += (-s * (k as f64).ln()).exp();
    }
    let n_s = (-s * nf.ln()).exp();
    sum += n_s * nf / (s - 1.0) + n_s * 0.5;
    // Σ B_{2j}/(2j)! · s(s+1)…(s+2j−2) · N^{−s−2j+1}
    let mut rising = s;
    let mut npow = n_s / nf;
    let mut fact = 2.0;
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let term = rising * npow * (b / fact);
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
        let m = 2.0 * (j as f64 + 1.0);
        rising = rising * (s + m - 1.0) * (s + m);
        npow /= nf * nf;
        fact *= (m + 1.0) * (m + 2.0);
    }
    sum
}

/// ζ_ℝ(s) = π^{−s/2} Γ(s/2).
pub fn zeta_r(s: C64) -> C64 {
    (-s * 0.5 * PI.ln() + ln_gamma(s * 0.5)).exp()
}

/// (2π)^{−s} Γ(s), the table convention for ζ_ℂ.
pub fn zeta_c_printed(s: C64) -> C64 {
    (-s * (2.0 * PI).ln() + ln_gamma(s)).exp()
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}
