//! Piecewise Chebyshev tables of `e^{π|Im μ|/2} K_μ(x)` for one fixed order.
//!
//! Form evaluation calls K at thousands of points with the same order, so the
//! contour integrals in [`super::bessel`] are sampled once per panel instead.

use super::bessel::kbessel_log;
use super::SurfaceError;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

const DEGREE: usize = 24;
const WIDTH: f64 = 1.0;

#[derive(Debug, Clone)]
pub struct BesselTable {
    mu: C64,
    x0: f64,
    x_max: f64,
    scale: f64,
    panels: Vec<[C64; DEGREE]>,
}

impl BesselTable {
    /// Table on `[x0, x_max]`; values are treated as zero beyond `x_max`.
    pub fn new(mu: C64, x0: f64, x_max: f64) -> Result<Self, SurfaceError> {
        if !(x0 > 0.0 && x_max > x0) {
            return Err(SurfaceError::Domain(format!("bad table range [{x0}, {x_max}]")));
        }
        let scale = 0.5 * PI * mu.im.abs();
        let count = ((x_max - x0) / WIDTH).ceil() as usize;
        let mut panels = Vec::with_capacity(count);
        for i in 0..count {
            let a = x0 + i as f64 * WIDTH;
            let mut vals = [C64::new(0.0, 0.0); DEGREE];
            for (j, v) in vals.iter_mut().enumerate() {
                let u = (PI * (j as f64 + 0.5) / DEGREE as f64).cos();
                let x = a + 0.5 * WIDTH * (u + 1.0);
                let (m, l) = kbessel_log(mu, x)?;
                *v = m * (l + x + scale).exp();
            }
            let mut coef = [C64::new(0.0, 0.0); DEGREE];
            for (k, c) in coef.iter_mut().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for (j, v) in vals.iter().enumerate() {
                    acc += v * (PI * k as f64 * (j as f64 + 0.5) / DEGREE as f64).cos();
                }
                *c = acc * (2.0 / DEGREE as f64);
            }
            coef[0] *= 0.5;
            panels.push(coef);
        }
        let x_max = x0 + count as f64 * WIDTH;
        Ok(Self { mu, x0, x_max, scale, panels })
    }

    pub fn order(&self) -> C64 {
        self.mu
    }

    pub fn range(&self) -> (f64, f64) {
        (self.x0, self.x_max)
    }

    /// e^{π|Im μ|/2} K_μ(x); direct evaluation below the table, zero above it.
    pub fn eval(&self, x: f64) -> C64 {
        if x >= self.x_max {
            return C64::new(0.0, 0.0);
        }
        if x < self.x0 {
            return match kbessel_log(self.mu, x) {
                Ok((m, l)) => m * (l + self.scale).exp(),
                Err(_) => C64::new(f64::NAN, f64::NAN),
            };
        }
        let i = (((x - self.x0) / WIDTH) as usize).min(self.panels.len() - 1);
        let a = self.x0 + i as f64 * WIDTH;
        let u = 2.0 * (x - a) / WIDTH - 1.0;
        // Clenshaw
        let c = &self.panels[i];
        let (mut b1, mut b2) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        for k in (1..DEGREE).rev() {
            let b0 = c[k] + b1 * (2.0 * u) - b2;
            b2 = b1;
            b1 = b0;
        }
        (c[0] + b1 * u - b2) * (-x).exp()
    }

    /// Bound on |e^{π|Im μ|/2} K_μ(x)| from |K_μ(x)| ≤ K_ν(x), ν = |Re μ|, and
    /// K_ν(x) ≤ √(π/2x) e^{−x} e^{max(0, ν²−1/4)/2x}.
    pub fn bound(&self, x: f64) -> f64 {
        let nu = self.mu.re.abs();
        let k = (PI / (2.0 * x)).sqrt() * (-x + (nu * nu - 0.25).max(0.0) / (2.0 * x)).exp();
        k * self.scale.exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::bessel::kbessel;

    #[test]
    fn table_matches_direct_evaluation() {
        for mu in [C64::new(0.0, 13.7797), C64::new(0.0, 9.5337), C64::new(0.0, 3.0), C64::new(1.5, 0.0)] {
            let t = BesselTable::new(mu, 5.0, mu.im.abs() + 40.0).unwrap();
            let scale = (0.5 * PI * mu.im.abs()).exp();
            let mut x = 5.013;
            while x < mu.im.abs() + 39.0 {
                let want = kbessel(mu, x).unwrap() * scale;
                let got = t.eval(x);
                let mag = [x - 0.4, x + 0.4]
                    .iter()
                    .map(|&v| (kbessel(mu, v).unwrap() * scale).norm())
                    .fold(want.norm(), f64::max);
                assert!((got - want).norm() <= 1e-12 * mag.max(1e-300), "mu={mu} x={x}: {got} vs {want}");
                x += 0.377;
            }
        }
    }
}
