//! Modified Bessel K of complex order and the classical Whittaker function.
//!
//! Small arguments use the I-series with a running cancellation estimate.
//! Everything else integrates `½∫ exp(−x cosh w − μw) dw` along a path that
//! sits on the level Im w = −arcsin(min(1, t/x)) between the turning points
//! and then ramps back to the real axis, so the integrand never exceeds the
//! size of the answer by more than O(1).

use crate::quad;
use crate::special::ln_gamma;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use super::SurfaceError;

/// Largest |Im μ| accepted.
pub const MAX_IMAG_ORDER: f64 = 60.0;

const SERIES_REL_TOL: f64 = 2e-14;
const RAMP_SLOPE: f64 = 0.5;

/// K_μ(x) as `(m, ℓ)` with K = m·e^ℓ, so that tiny or huge values stay
/// representable.
pub fn kbessel_log(mu: C64, x: f64) -> Result<(C64, f64), SurfaceError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SurfaceError::Domain(format!("kbessel needs x > 0, got {x}")));
    }
    if mu.im.abs() > MAX_IMAG_ORDER {
        return Err(SurfaceError::Domain(format!("|Im mu| = {} exceeds {MAX_IMAG_ORDER}", mu.im.abs())));
    }
    // K_μ = K_{−μ} and K_{μ̄}(x) = conj K_μ(x): reduce to Re μ ≥ 0, Im μ ≥ 0.
    let mut m = mu;
    let mut conj = false;
    if m.re < 0.0 {
        m = -m;
    }
    if m.im < 0.0 {
        m = m.conj();
        conj = true;
    }
    let (v, l) = match series(m, x) {
        Some(v) => (v, 0.0),
        None => contour(m, x),
    };
    Ok(if conj { (v.conj(), l) } else { (v, l) })
}

pub fn kbessel(mu: C64, x: f64) -> Result<C64, SurfaceError> {
    let (m, l) = kbessel_log(mu, x)?;
    Ok(m * l.exp())
}

/// e^x K_μ(x), the classical exponentially scaled variant.
pub fn kbessel_scaled(mu: C64, x: f64) -> Result<C64, SurfaceError> {
    let (m, l) = kbessel_log(mu, x)?;
    Ok(m * (l + x).exp())
}

/// e^{πt/2} K_{it}(x), real for real t; the natural scale for Maass forms.
pub fn kbessel_it_scaled(t: f64, x: f64) -> Result<f64, SurfaceError> {
    let (m, l) = kbessel_log(C64::new(0.0, t), x)?;
    Ok(m.re * (l + 0.5 * PI * t.abs()).exp())
}

fn series(mu: C64, x: f64) -> Option<C64> {
    let s = (mu * PI).sin();
    if s.norm() < 1e-3 || x > 2.0 * (1.0 + mu.norm()) {
        return None;
    }
    let (ip, ap) = i_series(mu, x)?;
    let (im, am) = i_series(-mu, x)?;
    let pref = C64::new(PI / 2.0, 0.0) / s;
    let val = pref * (im - ip);
    // log-gamma in the leading terms is good to ~1e-14 absolute
    let err = 1e-14 * pref.norm() * (ap + am);
    if val.norm() > 0.0 && err <= SERIES_REL_TOL * val.norm() {
        Some(val)
    } else {
        None
    }
}

/// I_ν(x) with the sum of absolute term sizes.
fn i_series(nu: C64, x: f64) -> Option<(C64, f64)> {
    let z = 0.25 * x * x;
    let lead = nu * (0.5 * x).ln() - ln_gamma(nu + 1.0);
    if !lead.re.is_finite() {
        return None;
    }
    let mut term = lead.exp();
    let mut sum = term;
    let mut abs = term.norm();
    let mut m = 1.0;
    while m < 1000.0 {
        term *= z / (m * (nu + m));
        sum += term;
        abs += term.norm();
        if term.norm() <= 1e-18 * abs && m > 0.5 * x {
            return Some((sum, abs));
        }
        m += 1.0;
    }
    None
}

/// Path integral for Re μ ≥ 0, Im μ ≥ 0.
fn contour(mu: C64, x: f64) -> (C64, f64) {
    let t = mu.im;
    let sigma = mu.re;
    let ratio = t / x;
    let theta_f = -ratio.min(1.0).asin();
    let u_s = if ratio > 1.0 { ratio.acosh() } else { 0.0 };
    let a2 = u_s + (-theta_f) / RAMP_SLOPE;
    let l0 = x * theta_f.cos() - t * theta_f;

    // Beyond a2 the path is real and the integrand is exp(−x cosh u ± σu + l0).
    let mut big_u = (a2 + 1.0).max(1.0);
    while x * big_u.cosh() - sigma * big_u - l0 < 46.0 {
        big_u += 0.25;
    }

    let integrand = |u: f64| -> C64 {
        let au = u.abs();
        let phi = ((au - u_s) * RAMP_SLOPE).clamp(0.0, -theta_f);
        let dtheta = if au > u_s && au < a2 { RAMP_SLOPE * u.signum() } else { 0.0 };
        let w = C64::new(u, theta_f + phi);
        let e = -(w.cosh() * x + mu * w) + l0;
        e.exp() * C64::new(1.0, dtheta)
    };

    let mut cuts = vec![0.0, u_s, a2, big_u];
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    let mut total = C64::new(0.0, 0.0);
    let symmetric = sigma == 0.0;
    for w in cuts.windows(2) {
        let (v, _) = quad::adaptive(integrand, w[0], w[1], 0.0, 1e-15);
        total += v;
        if !symmetric {
            let (v, _) = quad::adaptive(integrand, -w[1], -w[0], 0.0, 1e-15);
            total += v;
        }
    }
    let val = if symmetric { C64::new(total.re, 0.0) } else { total * 0.5 };
    (val, -l0)
}

/// Classical Whittaker function w_{κ,μ}(y) normalized by w ~ y^κ e^{−y/2}.
pub fn whittaker_w(kappa: f64, mu: C64, y: f64) -> Result<C64, SurfaceError> {
    if !(y > 0.0) {
        return Err(SurfaceError::Domain(format!("whittaker_w needs y > 0, got {y}")));
    }
    if kappa == 0.0 {
        let k = kbessel(mu, 0.5 * y)?;
        return Ok(k * (y / PI).sqrt());
    }
    if (mu - C64::new(kappa - 0.5, 0.0)).norm() < 1e-15 || (mu + C64::new(kappa - 0.5, 0.0)).norm() < 1e-15 {
        return Ok(C64::new((kappa * y.ln() - 0.5 * y).exp(), 0.0));
    }
    let m = if mu.re >= 0.0 { mu } else { -mu };
    let a = m - kappa + 0.5;
    if m.im.abs() > 0.5 || a.re < 1.0 {
        return whittaker_ode(kappa, m, y);
    }
    // y^{μ+1/2} e^{−y/2}/Γ(μ−κ+½) ∫ e^{−yt} t^{μ−κ−½}(1+t)^{μ+κ−½} dt, with t = τ/y
    let b = m + kappa - 0.5;
    let (integral, _) = quad::exp_sinh(
        |tau| {
            let tt = tau / y;
            ((a - 1.0) * tt.ln() + b * (1.0 + tt).ln() - tau).exp()
        },
        1e-14,
    );
    let pref = ((m + 0.5) * y.ln() - 0.5 * y - ln_gamma(a) - y.ln()).exp();
    Ok(pref * integral)
}

/// Asymptotic series of e^{z/2} z^{−κ} W_{κ,μ}(z) and its derivative, or None
/// if it does not reach full precision at z.
fn whittaker_asymptotic(kappa: f64, mu: C64, z: f64) -> Option<(C64, C64)> {
    let a = mu - kappa + 0.5;
    let b = -mu - kappa + 0.5;
    let mut c = C64::new(1.0, 0.0);
    let mut s = c;
    let mut ds = C64::new(0.0, 0.0);
    let mut last = f64::INFINITY;
    for j in 0..400 {
        let jf = j as f64;
        c = -c * (a + jf) * (b + jf) / ((jf + 1.0) * z);
        s += c;
        ds -= c * ((jf + 1.0) / z);
        let mag = c.norm();
        if mag < 1e-17 * s.norm() {
            return Some((s, s * (-0.5 + kappa / z) + ds));
        }
        if mag > last && j > 2 * mu.norm() as usize + 4 {
            return None;
        }
        last = mag;
    }
    None
}

/// W_{κ,μ}(y) by integrating y²w″ = (y²/4 − κy − 1/4 + μ²)w inward from the
/// asymptotic region with Taylor steps. W is the dominant solution in that
/// direction, so the integration is stable.
fn whittaker_ode(kappa: f64, mu: C64, y: f64) -> Result<C64, SurfaceError> {
    Ok(whittaker_ode_many(kappa, mu, &[y], 0.0)?[0])
}

/// `whittaker_ode` at many points in one inward sweep, each value multiplied by e^{extra_log}.
fn whittaker_ode_many(kappa: f64, mu: C64, ys: &[f64], extra_log: f64) -> Result<Vec<C64>, SurfaceError> {
    let mut order: Vec<usize> = (0..ys.len()).collect();
    order.sort_by(|&a, &b| ys[b].total_cmp(&ys[a]));
    let mut out = vec![C64::new(0.0, 0.0); ys.len()];
    let Some(&first) = order.first() else { return Ok(out) };
    if !(ys[order[order.len() - 1]] > 0.0) {
        return Err(SurfaceError::Domain("whittaker_w needs y > 0".into()));
    }
    let mut z = ys[first].max(20.0 + 2.0 * mu.norm());
    let (mut w, mut dw) = loop {
        if let Some(v) = whittaker_asymptotic(kappa, mu, z) {
            break v;
        }
        z *= 1.5;
        if z > 1e5 {
            return Err(SurfaceError::Domain(format!("whittaker_w: no asymptotic start for kappa={kappa}, mu={mu}")));
        }
    };
    // W = g·e^{log_scale}; (w, dw) carry g and g′
    let mut log_scale = kappa * z.ln() - 0.5 * z + extra_log;
    let c = C64::new(0.25, 0.0) - mu * mu;
    let mut coef = Vec::with_capacity(64);
    for &i in &order {
        let target = ys[i];
        while z > target {
            let h = -(z - target).min(0.3 * z).min(2.0);
            let p0 = c + (-0.25 * z * z + kappa * z);
            let p1 = -0.5 * z + kappa;
            coef.clear();
            coef.push(w);
            coef.push(dw);
            let (mut sum, mut dsum) = (w + dw * h, dw);
            let mut hp = h;
            for n in 0..200usize {
                let nf = n as f64;
                let mut r = coef[n + 1] * (2.0 * z * (nf + 1.0) * nf) + coef[n] * (nf * (nf - 1.0)) + coef[n] * p0;
                if n >= 1 {
                    r += coef[n - 1] * p1;
                }
                if n >= 2 {
                    r -= coef[n - 2] * 0.25;
                }
                let next = -r / (z * z * (nf + 2.0) * (nf + 1.0));
                coef.push(next);
                dsum += next * ((nf + 2.0) * hp);
                hp *= h;
                let term = next * hp;
                sum += term;
                if n > 4 && term.norm() < 1e-17 * sum.norm() && (coef[n + 1] * hp / h).norm() < 1e-17 * sum.norm() {
                    break;
                }
            }
            z += h;
            let m = sum.norm().max(dsum.norm());
            w = sum / m;
            dw = dsum / m;
            log_scale += m.ln();
        }
        out[i] = w * log_scale.exp();
    }
    Ok(out)
}

/// e^{πt/2}K_{it}(x) at many points, through W_{0,it}(2x) = √(2x/π) K_{it}(x).
/// One inward sweep serves every point, which makes this far cheaper than
/// repeated [`kbessel_it_scaled`] calls when the points share t.
pub fn kbessel_it_scaled_many(t: f64, xs: &[f64]) -> Result<Vec<f64>, SurfaceError> {
    let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x).collect();
    let w = whittaker_ode_many(0.0, C64::new(0.0, t), &ys, 0.5 * PI * t)?;
    Ok(w.iter().zip(xs).map(|(v, &x)| v.re * (PI / (2.0 * x)).sqrt()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn half_order_closed_form() {
        let k = kbessel(C64::new(0.5, 0.0), 1.0).unwrap();
        assert!(rel(k, C64::new(0.461_068_504_447_894_4, 0.0)) < 1e-14);
        for &x in &[0.01, 0.7, 3.0, 25.0, 300.0] {
            let want = (PI / (2.0 * x)).sqrt() * (-x).exp();
            let k = kbessel(C64::new(0.5, 0.0), x).unwrap();
            assert!(rel(k, C64::new(want, 0.0)) < 1e-13, "x={x}");
        }
    }

    #[test]
    fn order_zero_matches_direct_integral() {
        let (direct, _) = quad::adaptive_real(|u| (-u.cosh()).exp(), 0.0, 8.0, 0.0, 1e-15);
        let k = kbessel(C64::new(0.0, 0.0), 1.0).unwrap();
        assert!((k.re - direct).abs() < 1e-12 * direct);
    }

    #[test]
    fn evenness_and_conjugation() {
        let mu = C64::new(0.3, 4.0);
        let a = kbessel(mu, 2.5).unwrap();
        let b = kbessel(-mu, 2.5).unwrap();
        let c = kbessel(mu.conj(), 2.5).unwrap();
        assert!(rel(a, b) < 1e-15);
        assert!(rel(a, c.conj()) < 1e-15);
    }

    #[test]
    fn series_and_contour_agree_on_overlap() {
        let mut accepted = 0;
        for &(t, x) in &[(5.0, 0.3), (5.0, 1.0), (13.7, 1.0), (13.7, 3.0), (20.0, 2.0), (0.7, 0.4), (0.7, 1.5)] {
            let mu = C64::new(0.0, t);
            let Some(s) = series(mu, x) else { continue };
            accepted += 1;
            let (m, l) = contour(mu, x);
            let c = m * l.exp();
            assert!(rel(s, c) < 1e-12, "t={t} x={x}: {s} vs {c}");
        }
        assert!(accepted >= 3, "only {accepted} overlap points");
    }

    #[test]
    fn whittaker_holomorphic_row() {
        let w = whittaker_w(6.0, C64::new(5.5, 0.0), 3.0).unwrap();
        let want = 3f64.powi(6) * (-1.5f64).exp();
        assert!((w.re - want).abs() < 1e-13 * want);
    }

    #[test]
    fn whittaker_against_reference_values() {
        // mpmath whitw
        let cases = [
            (1.407197223810204, 8.386707029291609, 1.5, 2.19585355446406e-5),
            (-0.7616166044116938, 8.606503223340628, 3.0, -7.7977296065422e-8),
            (2.5, 25.0, 40.0, -5.70788813570208e-14),
        ];
        for (k, t, y, want) in cases {
            let got = whittaker_w(k, C64::new(0.0, t), y).unwrap();
            assert!((got.re - want).abs() < 1e-12 * want.abs() && got.im.abs() < 1e-12 * want.abs(), "{got} vs {want}");
        }
        // integral path against the ODE path on real orders
        for (k, m, y) in [(-1.3, 0.7, 2.0), (0.2, 1.9, 5.0), (-0.5, 0.25, 17.0)] {
            let a = whittaker_w(k, C64::new(m, 0.0), y).unwrap();
            let b = whittaker_ode(k, C64::new(m, 0.0), y).unwrap();
            assert!(rel(a, b) < 1e-11, "{a} vs {b}");
        }
    }

    #[test]
    fn whittaker_large_y_normalisation() {
        let (k, mu, y) = (1.3, C64::new(0.0, 2.0), 80.0);
        let w = whittaker_w(k, mu, y).unwrap();
        let r = w.re / (k * y.ln() - 0.5 * y).exp();
        assert!((r - 1.0).abs() < 0.1 && w.im.abs() < 1e-12 * w.re.abs());
    }
}
