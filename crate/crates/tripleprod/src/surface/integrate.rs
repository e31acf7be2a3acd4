//! Quadrature over the standard fundamental domain with measure dx dy / y².
//!
//! The domain splits into the region under y = 1, integrated in y for each
//! x node between the arc and y = 1, the rectangle [−½, ½] × [1, Y], and the
//! cusp y > Y, which is bounded (or computed exactly) from a decay certificate.
//! Levels double the panel counts in both directions; the reported error is
//! the change between the last two levels plus the cusp and pointwise terms.

use super::domain::PointH;
use super::forms::AutomorphicFunction;
use super::SurfaceError;
use crate::qexp::HoloEigenform;
use crate::quad::GaussRule;
use crate::special::{gamma_real, zeta};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

type Result<T> = std::result::Result<T, SurfaceError>;

const NODES: usize = 12;
const MAX_LEVEL: usize = 5;

/// Behaviour of an integrand in the cusp.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decay {
    /// |F(x+iy)| ≤ coef·y^power·e^{−rate·y} for y ≥ from_y.
    Exponential { coef: f64, power: f64, rate: f64, from_y: f64 },
    /// F ≡ value above y = 1; the cusp contributes exactly value/Y.
    Constant { value: C64 },
}

impl Decay {
    /// Certificate for a product of two bounded functions.
    pub fn product(self, other: Decay) -> Decay {
        let parts = |d: Decay| match d {
            Decay::Exponential { coef, power, rate, from_y } => (coef, power, rate, from_y),
            Decay::Constant { value } => (value.norm(), 0.0, 0.0, 1.0),
        };
        let (c1, p1, r1, y1) = parts(self);
        let (c2, p2, r2, y2) = parts(other);
        Decay::Exponential { coef: c1 * c2, power: p1 + p2, rate: r1 + r2, from_y: y1.max(y2) }
    }

    /// Cutoff Y and the bound on ∫_{y>Y} |F| dμ, or the exact cusp value for constants.
    fn cutoff(&self, eps: f64) -> Result<(f64, f64, C64)> {
        match *self {
            Decay::Constant { value } => Ok((2.0, 0.0, value / 2.0)),
            Decay::Exponential { coef, power, rate, from_y } => {
                let tail = |y: f64| -> f64 {
                    if rate > 0.0 {
                        let den = rate - (power - 2.0).max(0.0) / y;
                        if den <= 0.0 {
                            return f64::INFINITY;
                        }
                        coef * y.powf(power - 2.0) * (-rate * y).exp() / den
                    } else if power < 1.0 {
                        coef * y.powf(power - 1.0) / (1.0 - power)
                    } else {
                        f64::INFINITY
                    }
                };
                if rate <= 0.0 && power >= 1.0 {
                    return Err(SurfaceError::NoDecay);
                }
                let mut y = from_y.max(2.0);
                if rate > 0.0 {
                    y = y.max(((4.0 / eps).ln() + coef.max(1.0).ln()) / rate);
                }
                let mut steps = 0;
                while tail(y) > eps / 4.0 {
                    y += 0.25;
                    steps += 1;
                    if steps > 100_000 {
                        return Err(SurfaceError::NoDecay);
                    }
                }
                Ok((y, tail(y), C64::new(0.0, 0.0)))
            }
        }
    }

    fn rate(&self) -> f64 {
        match *self {
            Decay::Exponential { rate, .. } => rate,
            Decay::Constant { .. } => 0.0,
        }
    }
}

/// Result of a fundamental-domain integral with its diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct FdIntegral {
    pub value: C64,
    pub error_bound: f64,
    /// Bound on the neglected cusp region.
    pub tail_bound: f64,
    /// ∫ (pointwise evaluation error) dμ at the final level.
    pub pointwise_error: f64,
    pub cutoff_y: f64,
    /// (number of nodes, value) per refinement level.
    pub levels: Vec<(usize, C64)>,
}

/// One level: returns (value, pointwise error integral, node count).
fn level<F>(f: &F, rule: &GaussRule, l: usize, y_cut: f64, rate: f64) -> Result<(C64, f64, usize)>
where
    F: Fn(PointH) -> Result<(C64, f64)> + Sync,
{
    let xp = 4usize << l;
    let yp = 1usize << l;
    let strip = if rate > 0.0 { (4.0 / rate).min(0.5) } else { 0.5 } / yp as f64;
    let strips = ((y_cut - 1.0) / strip).ceil() as usize;
    let strip = (y_cut - 1.0) / strips as f64;
    let mut xs = Vec::with_capacity(xp * NODES);
    for i in 0..xp {
        let a = -0.5 + i as f64 / xp as f64;
        xs.extend(rule.on(a, a + 1.0 / xp as f64));
    }
    let columns: Vec<Result<(C64, f64, usize)>> = xs
        .par_iter()
        .map(|&(x, wx)| {
            let mut acc = C64::new(0.0, 0.0);
            let mut err = 0.0;
            let mut count = 0;
            let y0 = (1.0 - x * x).sqrt();
            let mut add = |a: f64, b: f64| -> Result<()> {
                for (y, wy) in rule.on(a, b) {
                    let (v, e) = f(PointH { x, y })?;
                    let w = wx * wy / (y * y);
                    acc += v * w;
                    err += e * w;
                    count += 1;
                }
                Ok(())
            };
            for j in 0..yp {
                let h = (1.0 - y0) / yp as f64;
                add(y0 + j as f64 * h, y0 + (j + 1) as f64 * h)?;
            }
            for j in 0..strips {
                add(1.0 + j as f64 * strip, 1.0 + (j + 1) as f64 * strip)?;
            }
            Ok((acc, err, count))
        })
        .collect();
    let mut total = C64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut count = 0;
    for c in columns {
        let (a, e, n) = c?;
        total += a;
        err += e;
        count += n;
    }
    Ok((total, err, count))
}

/// ∫_{SL₂(ℤ)\ℍ} F dx dy / y² to absolute accuracy `eps` where attainable.
///
/// `f` returns a value and a pointwise error bound at points of the domain.
pub fn integrate_fd<F>(f: F, decay: Decay, eps: f64) -> Result<FdIntegral>
where
    F: Fn(PointH) -> Result<(C64, f64)> + Sync,
{
    let (y_cut, tail_bound, cusp) = decay.cutoff(eps)?;
    let rule = GaussRule::new(NODES);
    let mut levels = Vec::new();
    let mut prev: Option<C64> = None;
    let mut result = None;
    for l in 0..=MAX_LEVEL {
        let (v, perr, n) = level(&f, &rule, l, y_cut, decay.rate())?;
        let v = v + cusp;
        levels.push((n, v));
        if let Some(p) = prev {
            let diff = (v - p).norm();
            result = Some((v, diff, perr));
            if diff + perr + tail_bound <= eps / 2.0 || l == MAX_LEVEL {
                break;
            }
        }
        prev = Some(v);
    }
    let (value, diff, pointwise_error) = result.expect("at least two levels");
    Ok(FdIntegral {
        value,
        error_bound: diff + pointwise_error + tail_bound,
        tail_bound,
        pointwise_error,
        cutoff_y: y_cut,
        levels,
    })
}

/// Petersson norm ⟨f, f⟩ = ∫ y^k |f|² dμ.
pub fn petersson_norm(f: &HoloEigenform, eps: f64) -> Result<FdIntegral> {
    let g = AutomorphicFunction::holomorphic(f);
    let tol = eps * 1e-2;
    let decay = g.decay().product(g.decay());
    integrate_fd(
        |z| {
            let (v, e) = g.eval_reduced(z, tol)?;
            Ok((C64::new(v.norm_sqr(), 0.0), e * (2.0 * v.norm() + e)))
        },
        decay,
        eps,
    )
}

/// ∫ F₁F₂F₃ dμ for functions whose weights sum to zero.
pub fn triple_integral(
    a: &AutomorphicFunction,
    b: &AutomorphicFunction,
    c: &AutomorphicFunction,
    eps: f64,
) -> Result<FdIntegral> {
    let w = a.weight() + b.weight() + c.weight();
    if w != 0 {
        return Err(SurfaceError::Weight(w));
    }
    let tol = eps * 1e-2;
    let decay = a.decay().product(b.decay()).product(c.decay());
    integrate_fd(
        |z| {
            let (va, ea) = a.eval_reduced(z, tol)?;
            let (vb, eb) = b.eval_reduced(z, tol)?;
            let (vc, ec) = c.eval_reduced(z, tol)?;
            let (na, nb, nc) = (va.norm() + ea, vb.norm() + eb, vc.norm() + ec);
            Ok((va * vb * vc, ea * nb * nc + na * eb * nc + na * nb * ec))
        },
        decay,
        eps,
    )
}

/// Unfolded form of ∫ y^k|f|² E(z, s) dμ for real s > 1:
/// Γ(s+k−1)(4π)^{−(s+k−1)} Σ λ_n² n^{−s}, with Σ λ_n² n^{−s} = ζ(s)/ζ(2s) · Π_p L_p(s, Ad f)
/// over p below the coefficient precision. Returns (value, estimated truncation error).
pub fn unfolded_eisenstein_integral(f: &HoloEigenform, s: f64) -> Result<(f64, f64)> {
    if s <= 1.0 {
        return Err(SurfaceError::Domain(format!("unfolding needs s > 1, got {s}")));
    }
    let k = f.weight() as f64;
    let mut log_prod = 0.0;
    let mut pmax = 2u64;
    for &p in f.satake_map().keys() {
        let l = f.lambda(p as usize);
        let x = (p as f64).powf(-s);
        // (1 − α²X)(1 − X)(1 − β²X) with α + β = λ, αβ = 1
        log_prod -= ((1.0 - (l * l - 2.0) * x + x * x) * (1.0 - x)).ln();
        pmax = p;
    }
    let zs = zeta(C64::new(s, 0.0)).re / zeta(C64::new(2.0 * s, 0.0)).re;
    let a = s + k - 1.0;
    let pref = gamma_real(a) * (4.0 * PI).powf(-a);
    let value = pref * zs * log_prod.exp();
    // Σ_{p>P} (λ_p² − 1) p^{−s} has mean zero; its size is about P^{1/2−s}/ln P
    let pm = pmax as f64;
    let err = value * pm.powf(0.5 - s) / pm.ln();
    Ok((value, err))
}
