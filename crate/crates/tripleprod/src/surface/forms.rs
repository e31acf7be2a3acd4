//! Automorphic functions on SL₂(ℤ)\ℍ evaluated from their Fourier expansions.
//!
//! Every function here has weight 0 or is a weight-k holomorphic form scaled
//! by y^{k/2}, so |F| is Γ-invariant and F picks up only a unimodular phase.

use super::domain::{reduce, PointH};
use super::integrate::Decay;
use super::table::BesselTable;
use super::SurfaceError;
use crate::qexp::HoloEigenform;
use crate::special::{zeta, zeta_r};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;
use std::sync::Arc;

type Result<T> = std::result::Result<T, SurfaceError>;

/// Largest n for which Eisenstein divisor sums are precomputed.
const EIS_TERMS: usize = 256;

/// Bound on |c_n| used past the known coefficients: d(n) n^θ ≤ 2√n n^{7/64}.
fn coeff_envelope(n: f64) -> f64 {
    2.0 * n.powf(0.5 + 7.0 / 64.0)
}

fn table_for(mu: C64) -> Result<BesselTable> {
    let t = mu.im.abs();
    let x_max = (t + 50.0).max(0.5 * PI * t + 40.0) + mu.re.abs() * 4.0;
    BesselTable::new(mu, 5.0, x_max)
}

/// Hecke–Maass cusp form data: φ(z) = Σ_{n≥1} c_n √y K̃_{it}(2πny) cs(2πnx),
/// where K̃ = e^{πt/2}K_{it} and cs is cos (even) or sin (odd).
#[derive(Debug, Clone)]
pub struct MaassExpansion {
    pub t: f64,
    pub odd: bool,
    /// c_0 is ignored; c_1 = 1.
    pub coeffs: Vec<f64>,
    table: BesselTable,
}

impl MaassExpansion {
    pub fn new(t: f64, odd: bool, coeffs: Vec<f64>) -> Result<Self> {
        if !(t > 0.0) {
            return Err(SurfaceError::Domain(format!("spectral parameter {t} must be positive")));
        }
        let table = table_for(C64::new(0.0, t))?;
        Ok(Self { t, odd, coeffs, table })
    }

    pub fn table(&self) -> &BesselTable {
        &self.table
    }

    /// Terms needed at height y before the table runs out.
    pub fn terms_needed(&self, y: f64) -> usize {
        (self.table.range().1 / (2.0 * PI * y)).ceil() as usize
    }

    fn value(&self, w: PointH) -> Result<(C64, f64)> {
        let needed = self.terms_needed(w.y);
        if needed >= self.coeffs.len() {
            return Err(SurfaceError::Shortfall { needed: needed + 1, available: self.coeffs.len() });
        }
        let sy = w.y.sqrt();
        let mut acc = 0.0;
        for n in 1..needed {
            let k = self.table.eval(2.0 * PI * n as f64 * w.y).re;
            let arg = 2.0 * PI * n as f64 * w.x;
            acc += self.coeffs[n] * k * if self.odd { arg.sin() } else { arg.cos() };
        }
        let mut tail = 0.0;
        let mut n = needed;
        loop {
            let b = coeff_envelope(n as f64) * sy * self.table.bound(2.0 * PI * n as f64 * w.y);
            tail += b;
            if b < 1e-18 * tail.max(1e-300) || b == 0.0 {
                break;
            }
            n += 1;
        }
        Ok((C64::new(sy * acc, 0.0), tail + 1e-15 * (sy * acc).abs()))
    }

    fn decay(&self) -> Decay {
        // |K_{it}(x)| ≤ K_0(x) ≤ √(π/2x) e^{−x}, so |φ| ≤ (e^{πt/2}/2) Σ |c_n| n^{−1/2} e^{−2πny}.
        let mut s = 0.0;
        for n in 1..self.coeffs.len().max(200) {
            let c = self.coeffs.get(n).map_or(coeff_envelope(n as f64), |v| v.abs());
            s += c / (n as f64).sqrt() * (-2.0 * PI * (n as f64 - 1.0)).exp();
        }
        Decay::Exponential { coef: 0.5 * (0.5 * PI * self.t).exp() * s, power: 0.0, rate: 2.0 * PI, from_y: 1.0 }
    }
}

#[derive(Debug, Clone)]
pub enum FormKind {
    /// y^{k/2} f(z), or its complex conjugate.
    Holomorphic { weight: u32, lambdas: Arc<Vec<f64>>, conjugate: bool },
    Maass(Arc<MaassExpansion>),
    /// Real-analytic Eisenstein series E(z, s) = Σ_{Γ∞\Γ} Im(γz)^s, times `scale`.
    Eisenstein { s: C64, scale: f64, phi: C64, pref: C64, sigma: Arc<Vec<C64>>, table: Arc<BesselTable> },
}

#[derive(Debug, Clone)]
pub struct AutomorphicFunction {
    kind: FormKind,
    label: String,
}

impl AutomorphicFunction {
    pub fn holomorphic(f: &HoloEigenform) -> Self {
        Self::holo(f, false)
    }

    /// y^{k/2} conj(f), of weight −k.
    pub fn holomorphic_conj(f: &HoloEigenform) -> Self {
        Self::holo(f, true)
    }

    fn holo(f: &HoloEigenform, conjugate: bool) -> Self {
        let n = f.precision().min(400);
        let label = if conjugate { format!("conj({})", f.label()) } else { f.label() };
        Self {
            kind: FormKind::Holomorphic { weight: f.weight(), lambdas: Arc::new(f.lambdas()[..n].to_vec()), conjugate },
            label,
        }
    }

    pub fn maass(m: Arc<MaassExpansion>, label: impl Into<String>) -> Self {
        Self { kind: FormKind::Maass(m), label: label.into() }
    }

    /// Classical E(z, s) with constant term y^s + φ(s) y^{1−s}.
    pub fn eisenstein(s: C64) -> Result<Self> {
        Self::eis(s, 1.0, format!("E(·,{s})"))
    }

    /// E¹(z, s) = E(z, s)/√2, the unitary normalisation.
    pub fn eisenstein_unitary(s: C64) -> Result<Self> {
        Self::eis(s, std::f64::consts::FRAC_1_SQRT_2, format!("E1(·,{s})"))
    }

    fn eis(s: C64, scale: f64, label: String) -> Result<Self> {
        let xi = |z: C64| zeta_r(z) * zeta(z);
        let two_s = s * 2.0;
        if (two_s - 1.0).norm() < 1e-8 || (two_s - 2.0).norm() < 1e-8 || (two_s).norm() < 1e-8 {
            return Err(SurfaceError::Domain(format!("Eisenstein series singular at s = {s}")));
        }
        let mu = s - 0.5;
        let table = table_for(mu)?;
        let kscale = 0.5 * PI * mu.im.abs();
        let phi = xi(two_s - 1.0) / xi(two_s);
        let pref = C64::new(4.0 * (-kscale).exp(), 0.0) / xi(two_s);
        let mut sigma = vec![C64::new(0.0, 0.0); EIS_TERMS + 1];
        let e = C64::new(1.0, 0.0) - two_s;
        for d in 1..=EIS_TERMS {
            let v = (e * (d as f64).ln()).exp();
            for m in (d..=EIS_TERMS).step_by(d) {
                sigma[m] += v;
            }
        }
        for (n, v) in sigma.iter_mut().enumerate().skip(1) {
            *v *= ((s - 0.5) * (n as f64).ln()).exp();
        }
        Ok(Self {
            kind: FormKind::Eisenstein { s, scale, phi, pref, sigma: Arc::new(sigma), table: Arc::new(table) },
            label,
        })
    }

    pub fn kind(&self) -> &FormKind {
        &self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Weight of the underlying function: k, −k for conjugates, 0 otherwise.
    pub fn weight(&self) -> i64 {
        match &self.kind {
            FormKind::Holomorphic { weight, conjugate, .. } => {
                if *conjugate {
                    -(*weight as i64)
                } else {
                    *weight as i64
                }
            }
            _ => 0,
        }
    }

    /// Value at any z ∈ ℍ with an absolute error estimate; reduces z first.
    pub fn eval(&self, z: PointH, tol: f64) -> Result<(C64, f64)> {
        let (w, g, _) = reduce(z);
        let (v, e) = self.eval_reduced(w, tol)?;
        let k = self.weight();
        if k == 0 {
            return Ok((v, e));
        }
        // F(z) = (|j|/j)^k F(gz), j = j(g, z)
        let (jr, ji) = z.j(&g);
        let phase = C64::new(jr, -ji).unscale(jr.hypot(ji)).powi(k as i32);
        Ok((v * phase, e))
    }

    /// Value at a point already in (or near) the fundamental domain.
    pub fn eval_reduced(&self, w: PointH, tol: f64) -> Result<(C64, f64)> {
        match &self.kind {
            FormKind::Holomorphic { weight, lambdas, conjugate } => {
                let (v, e) = holo_value(*weight, lambdas, w, tol)?;
                Ok((if *conjugate { v.conj() } else { v }, e))
            }
            FormKind::Maass(m) => m.value(w),
            FormKind::Eisenstein { s, scale, phi, pref, sigma, table } => {
                let ly = w.y.ln();
                let mut v = (s * ly).exp() + phi * ((C64::new(1.0, 0.0) - s) * ly).exp();
                let x_max = table.range().1;
                let needed = (x_max / (2.0 * PI * w.y)).ceil() as usize;
                if needed >= sigma.len() {
                    return Err(SurfaceError::Shortfall { needed: needed + 1, available: sigma.len() });
                }
                let sy = w.y.sqrt();
                let mut acc = C64::new(0.0, 0.0);
                for n in 1..needed {
                    acc += sigma[n] * table.eval(2.0 * PI * n as f64 * w.y) * (2.0 * PI * n as f64 * w.x).cos();
                }
                v += pref * acc * sy;
                let sre = s.re;
                let growth = (sre - 0.5).abs();
                let mut tail = 0.0;
                let mut n = needed;
                loop {
                    let nf = n as f64;
                    let b = 2.0 * nf.sqrt() * nf.powf(growth) * sy * table.bound(2.0 * PI * nf * w.y);
                    tail += b;
                    if b < 1e-18 * tail || b == 0.0 {
                        break;
                    }
                    n += 1;
                }
                let tail = tail * pref.norm();
                let _ = tol;
                Ok((v * *scale, (tail + 1e-14 * v.norm()) * scale))
            }
        }
    }

    /// Bound |F(x+iy)| ≤ coef·y^power·e^{−rate·y} for y ≥ from_y.
    pub fn decay(&self) -> Decay {
        match &self.kind {
            FormKind::Holomorphic { weight, lambdas, .. } => {
                let k = *weight as f64;
                let mut s = 0.0;
                for n in 1..lambdas.len() {
                    let nf = n as f64;
                    s += lambdas[n].abs() * (0.5 * (k - 1.0) * nf.ln() - 2.0 * PI * (nf - 1.0)).exp();
                }
                Decay::Exponential { coef: s * 1.0001, power: 0.5 * k, rate: 2.0 * PI, from_y: 1.0 }
            }
            FormKind::Maass(m) => m.decay(),
            FormKind::Eisenstein { s, scale, phi, pref, table, .. } => {
                // Fourier part bounded at y = 1 and decreasing beyond it.
                let mut f = 0.0;
                let growth = (s.re - 0.5).abs();
                for n in 1..EIS_TERMS {
                    let nf = n as f64;
                    f += 2.0 * nf.sqrt() * nf.powf(growth) * table.bound(2.0 * PI * nf);
                }
                let coef = (1.0 + phi.norm() + f * pref.norm()) * scale;
                Decay::Exponential { coef, power: s.re.max(1.0 - s.re), rate: 0.0, from_y: 1.0 }
            }
        }
    }
}

/// y^{k/2} Σ λ_n n^{(k−1)/2} e^{2πinz} for y ≥ 1/2.
fn holo_value(k: u32, lambdas: &[f64], w: PointH, tol: f64) -> Result<(C64, f64)> {
    if w.y < 0.5 {
        return Err(SurfaceError::Domain(format!("holomorphic evaluation needs y ≥ 1/2, got {}", w.y)));
    }
    let kf = k as f64;
    let half_ly = 0.5 * kf * w.y.ln();
    let peak = kf / (4.0 * PI * w.y);
    let r_base = (-2.0 * PI * w.y).exp();
    let mut acc = C64::new(0.0, 0.0);
    for n in 1.. {
        let nf = n as f64;
        let env = (0.5 * (kf - 1.0) * nf.ln() + half_ly - 2.0 * PI * nf * w.y).exp();
        if nf > peak + 1.0 {
            let bound = 2.0 * nf.sqrt() * env;
            let r = r_base * (1.0 + 1.0 / nf).powf(0.5 * kf);
            if r < 1.0 && bound / (1.0 - r) < tol * 1e-3 {
                return Ok((acc, bound / (1.0 - r) + 1e-15 * acc.norm()));
            }
        }
        if n >= lambdas.len() {
            return Err(SurfaceError::Shortfall { needed: n + 1, available: lambdas.len() });
        }
        acc += C64::from_polar(lambdas[n] * env, 2.0 * PI * nf * w.x);
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qexp::cusp_eigenforms;
    use crate::surface::domain::{mat_mul, translation, S};

    fn delta() -> HoloEigenform {
        cusp_eigenforms(12, 120).unwrap().remove(0)
    }

    #[test]
    fn holomorphic_modularity() {
        let f = AutomorphicFunction::holomorphic(&delta());
        let z = PointH::new(0.31, 1.2);
        let (v, _) = f.eval(z, 1e-14).unwrap();
        let g = mat_mul(&mat_mul(&translation(2), &S), &translation(-1));
        let gz = z.act(&g);
        let (w, _) = f.eval(gz, 1e-14).unwrap();
        // y^{k/2}f transforms by (j/|j|)^k
        let (jr, ji) = z.j(&g);
        let phase = C64::new(jr, ji).unscale(jr.hypot(ji)).powi(12);
        assert!((w - v * phase).norm() < 1e-13 * v.norm().max(1e-20), "{w} vs {}", v * phase);
    }

    #[test]
    fn delta_direct_product_formula() {
        // Δ = q Π (1 − q^n)^24 at z = i: check y^6 Δ(i)
        let f = AutomorphicFunction::holomorphic(&delta());
        let q = (-2.0 * PI).exp();
        let mut prod = q;
        for n in 1..60 {
            prod *= (1.0 - q.powi(n)).powi(24);
        }
        let (v, e) = f.eval(PointH::new(0.0, 1.0), 1e-15).unwrap();
        assert!((v.re - prod).abs() < 1e-15 && v.im.abs() < 1e-15, "{v} {prod} {e}");
    }

    /// E(z, 3) summed directly over coprime (c, d).
    fn eis_direct(z: PointH, s: f64) -> f64 {
        let mut acc = z.y.powf(s);
        let r = 400i64;
        for c in 1..=r {
            for d in -r * 4..=r * 4 {
                if num_integer::Integer::gcd(&c, &d) == 1 {
                    let den = (c as f64 * z.x + d as f64).powi(2) + (c as f64 * z.y).powi(2);
                    acc += z.y.powf(s) / den.powf(s);
                }
            }
        }
        acc
    }

    #[test]
    fn eisenstein_matches_direct_sum() {
        let e = AutomorphicFunction::eisenstein(C64::new(3.0, 0.0)).unwrap();
        for z in [PointH::new(0.1, 1.1), PointH::new(-0.4, 0.95)] {
            let (v, _) = e.eval(z, 1e-14).unwrap();
            let want = eis_direct(z, 3.0);
            // truncation of the lattice sum is O(r^{-5})
            assert!((v.re - want).abs() < 1e-9 && v.im.abs() < 1e-12, "{v} vs {want}");
        }
    }

    #[test]
    fn eisenstein_functional_equation() {
        // E*(z, s) = ξ(2s) E(z, s) is symmetric under s ↦ 1 − s
        let s = C64::new(0.5, 4.3);
        let xi = |z: C64| zeta_r(z) * zeta(z);
        let z = PointH::new(0.2, 1.3);
        let a = AutomorphicFunction::eisenstein(s).unwrap().eval(z, 1e-14).unwrap().0 * xi(s * 2.0);
        let sb = C64::new(1.0, 0.0) - s;
        let b = AutomorphicFunction::eisenstein(sb).unwrap().eval(z, 1e-14).unwrap().0 * xi(sb * 2.0);
        assert!((a - b).norm() < 1e-11 * a.norm(), "{a} vs {b}");
    }

    #[test]
    fn maass_evaluation_reports_shortfall() {
        let m = MaassExpansion::new(9.5337, true, vec![0.0, 1.0, 0.5]).unwrap();
        let f = AutomorphicFunction::maass(Arc::new(m), "odd");
        assert!(matches!(f.eval(PointH::new(0.0, 1.0), 1e-10), Err(SurfaceError::Shortfall { .. })));
    }
}
