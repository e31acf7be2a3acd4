//! Unramified local zeta integral of the triple product, summed directly.

use super::{IdentityReport, VerifyError, Result};
use crate::langlands::{zeta_p, LanglandsParam, ZetaCConvention};
use num_complex::Complex64 as C64;
use std::time::Instant;

pub const TOL_LOCAL_ZETA: f64 = 1e-8;

/// (a^n − b^n)/(a − b) as Σ_{j<n} a^j b^{n−1−j}, exact at a = b.
fn geometric(a: C64, b: C64, n: i64) -> C64 {
    let mut s = C64::new(0.0, 0.0);
    let mut aj = C64::new(1.0, 0.0);
    let mut bj = b.powi(n as i32 - 1);
    let binv = if b.norm() > 0.0 { b.inv() } else { C64::new(0.0, 0.0) };
    for _ in 0..n {
        s += aj * bj;
        aj *= a;
        bj *= binv;
    }
    s
}

/// S(k, k₂, k₃, l) with l = min(k, k + 2k₂, k + 2k₃).
fn summand(p: f64, s: C64, sat: &[(C64, C64); 3], k: i64, k2: i64, k3: i64) -> C64 {
    let pw = |e: C64| (e * p.ln()).exp();
    let l = k.min(k + 2 * k2).min(k + 2 * k3);
    let one = C64::new(1.0, 0.0);
    // (1 − p^{−2s−2})/(1 − p^{2s+1}) · (1 − p^{(l+1)(2s+1)}) = (1 − p^{−2s−2}) Σ_{j≤l} p^{j(2s+1)}
    let r = pw(s * 2.0 + 1.0);
    let mut g = C64::new(0.0, 0.0);
    let mut rj = one;
    for _ in 0..=l {
        g += rj;
        rj *= r;
    }
    let v = (one - pw(-s * 2.0 - 2.0)) * g * pw(-(s + 0.5) * (3 * k + 2 * k2 + 2 * k3) as f64);
    let (a, b): (Vec<C64>, Vec<C64>) = sat.iter().map(|&(x, y)| (pw(x), pw(y))).unzip();
    let f1 = geometric(a[0], b[0], k + 1);
    // p^{(k+k_j+1)ṡ − k_j s̈} − (ṡ ↔ s̈) over p^ṡ − p^s̈ = (ab)^{−k_j} (a^n − b^n)/(a − b), n = k + 2k_j + 1
    let f = |j: usize, kj: i64| (a[j] * b[j]).powi(-kj as i32) * geometric(a[j], b[j], k + 2 * kj + 1);
    v * f1 * f(1, k2) * f(2, k3)
}

/// Sum of S over the cone with 3k + 2k₂ + 2k₃ − 2l ≤ e, the exponent of p^{−(s+½)} in the summand.
fn cone_sum(p: f64, s: C64, sat: &[(C64, C64); 3], e: i64) -> C64 {
    let mut total = C64::new(0.0, 0.0);
    for k in 0..=e {
        let lo = -(k / 2);
        for k2 in lo..=e {
            for k3 in lo..=e {
                let l = k.min(k + 2 * k2).min(k + 2 * k3);
                if 3 * k + 2 * k2 + 2 * k3 - 2 * l > e {
                    continue;
                }
                total += summand(p, s, sat, k, k2, k3);
            }
        }
    }
    total
}

/// Direct summation of the local zeta integral; returns (value, size of the last increment).
pub fn local_zeta_sum(p: u64, s: C64, sat: &[(C64, C64); 3], eps: f64) -> Result<(C64, f64)> {
    let theta: f64 = sat.iter().map(|(a, b)| a.re.abs().max(b.re.abs())).sum();
    if s.re + 0.5 - theta <= 0.0 {
        return Err(VerifyError::Domain(format!("triple sum diverges at Re s = {} with Σ|Re ṡ| = {theta}", s.re)));
    }
    let pf = p as f64;
    let mut e = 16;
    let mut prev = cone_sum(pf, s, sat, e);
    loop {
        e += 8;
        let cur = cone_sum(pf, s, sat, e);
        let inc = (cur - prev).norm();
        if inc <= 0.1 * eps * cur.norm() {
            return Ok((cur, inc));
        }
        if e > 400 {
            return Err(VerifyError::Accuracy(format!("local zeta sum not converged: increment {inc:e}")));
        }
        prev = cur;
    }
}

/// L_p(s + ½, π₁×π₂×π₃)/(ζ_p(2s+2)ζ_p(4s+2)) from the tensor product of local parameters.
pub fn local_zeta_closed_form(p: u64, s: C64, sat: &[(C64, C64); 3]) -> Result<C64> {
    let par = |i: usize| LanglandsParam::unramified(p, sat[i].0, sat[i].1);
    let t = par(0).tensor(&par(1))?.tensor(&par(2))?;
    let l = t.local_l(s + 0.5, ZetaCConvention::Tate)?;
    Ok(l / (zeta_p(s * 2.0 + 2.0, p) * zeta_p(s * 4.0 + 2.0, p)))
}

/// Unramified local zeta identity at p for Satake exponents (ṡ_j, s̈_j).
pub fn check_local_zeta_unramified(p: u64, s: C64, sat: [(C64, C64); 3], eps: f64) -> Result<IdentityReport> {
    let start = Instant::now();
    let central: C64 = sat.iter().map(|(a, b)| a + b).sum();
    if central.norm() > 1e-12 {
        return Err(VerifyError::Domain(format!("central characters do not cancel: Σ(ṡ + s̈) = {central}")));
    }
    let (lhs, inc) = local_zeta_sum(p, s, &sat, eps)?;
    let rhs = local_zeta_closed_form(p, s, &sat)?;
    let mut r = IdentityReport::new("localzeta", (lhs, inc), (rhs, 1e-15 * rhs.norm()), TOL_LOCAL_ZETA)
        .input("p", p)
        .input("s", s);
    for (j, (a, b)) in sat.iter().enumerate() {
        r = r.input(&format!("satake{}", j + 1), format!("({a}, {b})"));
    }
    Ok(r.timed(start))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn trivial_parameters() {
        let z = |x: f64| 1.0 / (1.0 - 2f64.powf(-x));
        let want = z(1.5).powi(8) / (z(4.0) * z(6.0));
        let r = check_local_zeta_unramified(2, c(1.0, 0.0), [(c(0.0, 0.0), c(0.0, 0.0)); 3], 1e-12).unwrap();
        assert!((r.lhs[0] - want).abs() < 1e-10 * want, "{} vs {want}", r.lhs[0]);
        assert!((r.rhs[0] - want).abs() < 1e-13 * want);
        assert!(r.pass);
    }

    #[test]
    fn nontempered_parameters() {
        // the mpmath summation gives the same closed form for these exponents
        let mut sat = [(c(0.1, 0.3), c(-0.2, 0.1)), (c(0.05, 0.7), c(0.03, -0.2)), (c(0.0, 1.1), c(0.02, 0.4))];
        let tot: C64 = sat.iter().map(|(a, b)| a + b).sum();
        sat[0].0 -= tot;
        let r = check_local_zeta_unramified(3, c(1.25, 0.0), sat, 1e-10).unwrap();
        assert!(r.pass && r.relative_discrepancy < 1e-9, "{r:?}");
    }

    #[test]
    fn rejects_divergent_and_unbalanced_input() {
        let sat = [(c(0.9, 0.0), c(-0.9, 0.0)), (c(0.5, 0.0), c(-0.5, 0.0)), (c(0.0, 0.0), c(0.0, 0.0))];
        assert!(matches!(check_local_zeta_unramified(2, c(0.5, 0.0), sat, 1e-8), Err(VerifyError::Domain(_))));
        let sat = [(c(0.1, 0.0), c(0.0, 0.0)), (c(0.0, 0.0), c(0.0, 0.0)), (c(0.0, 0.0), c(0.0, 0.0))];
        assert!(matches!(check_local_zeta_unramified(2, c(1.0, 0.0), sat, 1e-8), Err(VerifyError::Domain(_))));
    }
}
