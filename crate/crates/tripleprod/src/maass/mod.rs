//! Level-one Hecke–Maass cusp forms.
//!
//! Spectral parameters are located by scanning a Hejhal consistency detector
//! for sign changes and refining with Brent's method. Coefficients come from
//! a base Hejhal solve, extended to large n by Fourier inversion on lower
//! horocycles. Certification compares two independent runs.

pub mod hejhal;

use crate::langlands::LanglandsParam;
use crate::lfun::GlobalRep;
use crate::qexp::{Satake, SatakeBranch};
use crate::surface::{AutomorphicFunction, MaassExpansion, SurfaceError};
use hejhal::{anchor_disagreement, detector, extend, solve_system, truncation, DETECTOR_ANCHORS};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum MaassError {
    #[error("no sign change of the detector in [{0}, {1}]")]
    NoSignChange(f64, f64),
    #[error("ill-conditioned system: {0}")]
    IllConditioned(String),
    #[error("bad parameters: {0}")]
    Parameters(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("archive: {0}")]
    Archive(String),
}

pub type Result<T> = std::result::Result<T, MaassError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn delta(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverDiagnostics {
    pub base_truncation: usize,
    pub base_samples: usize,
    pub base_anchor: f64,
    pub condition: Option<f64>,
    /// |detector| at the refined t.
    pub detector_residual: f64,
    /// Largest disagreement of c_2..c_8 between the detector anchors at t.
    pub anchor_disagreement: f64,
    /// Largest |c_n − c'_n| between the two certification runs.
    pub certification_gap: f64,
    /// Brent bracket that produced t.
    pub bracket: (f64, f64),
}

/// A Hecke–Maass cusp form with c_1 = 1.
#[derive(Debug, Clone)]
pub struct MaassForm {
    pub t: f64,
    pub parity: Parity,
    /// c_0 = 0, c_1 = 1.
    pub coeffs: Vec<f64>,
    pub certified_digits: u32,
    pub diagnostics: SolverDiagnostics,
    satake: Vec<Option<Satake>>,
}

impl MaassForm {
    pub fn new(t: f64, parity: Parity, coeffs: Vec<f64>, certified_digits: u32, diagnostics: SolverDiagnostics) -> Self {
        let satake = (0..coeffs.len())
            .map(|p| (p >= 2 && is_prime(p)).then(|| Satake::from_unitary(p as u64, C64::new(coeffs[p], 0.0))))
            .collect();
        Self { t, parity, coeffs, certified_digits, diagnostics, satake }
    }

    pub fn eigenvalue(&self) -> f64 {
        0.25 + self.t * self.t
    }

    pub fn label(&self) -> String {
        format!("maass({:.4},{})", self.t, if self.parity == Parity::Odd { "odd" } else { "even" })
    }

    /// Largest |c_m c_n − Σ_{d|(m,n)} c_{mn/d²}| over m, n ≤ bound with mn in range.
    pub fn hecke_residual(&self, bound: usize) -> f64 {
        let mut worst: f64 = 0.0;
        for m in 2..=bound {
            for n in m..=bound {
                if m * n >= self.coeffs.len() {
                    continue;
                }
                let g = num_integer::gcd(m, n);
                let s: f64 = (1..=g).filter(|d| g % d == 0).map(|d| self.coeffs[m * n / (d * d)]).sum();
                worst = worst.max((self.coeffs[m] * self.coeffs[n] - s).abs());
            }
        }
        worst
    }

    pub fn expansion(&self) -> Result<MaassExpansion> {
        Ok(MaassExpansion::new(self.t, self.parity == Parity::Odd, self.coeffs.clone())?)
    }

    pub fn automorphic(&self) -> Result<AutomorphicFunction> {
        Ok(AutomorphicFunction::maass(Arc::new(self.expansion()?), self.label()))
    }

    pub fn to_json(&self) -> MaassJson {
        MaassJson {
            t: format!("{:.12}", self.t),
            parity: self.parity,
            coeffs: self.coeffs.clone(),
            certified_digits: self.certified_digits,
            diagnostics: self.diagnostics.clone(),
        }
    }

    pub fn from_json(doc: &MaassJson) -> Result<Self> {
        let t: f64 = doc.t.parse().map_err(|e| MaassError::Archive(format!("bad t {:?}: {e}", doc.t)))?;
        if doc.coeffs.len() < 2 || (doc.coeffs[1] - 1.0).abs() > 1e-12 {
            return Err(MaassError::Archive("coefficients must start with c_0, c_1 = 1".into()));
        }
        Ok(Self::new(t, doc.parity, doc.coeffs.clone(), doc.certified_digits, doc.diagnostics.clone()))
    }
}

/// Archive format for a Maass form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MaassJson {
    pub t: String,
    pub parity: Parity,
    pub coeffs: Vec<f64>,
    pub certified_digits: u32,
    pub diagnostics: SolverDiagnostics,
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Satake exponents (ṡ_p, s̈_p) of a Maass form at p, from λ_p = c_p.
pub fn maass_satake(form: &MaassForm, p: u64) -> Option<Satake> {
    form.satake.get(p as usize).copied().flatten()
}

impl GlobalRep for MaassForm {
    fn label(&self) -> String {
        MaassForm::label(self)
    }

    fn arch(&self) -> LanglandsParam {
        LanglandsParam::principal_series(C64::new(0.0, self.t), self.parity.delta())
    }

    fn local_roots(&self, p: u64) -> Option<(C64, C64)> {
        maass_satake(self, p).map(|s| s.roots())
    }

    fn supply(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn theta(&self) -> f64 {
        // Kim–Sarnak; the forms found here are numerically tempered
        if self.satake.iter().flatten().any(|s| s.branch == SatakeBranch::NonTempered) {
            7.0 / 64.0
        } else {
            0.0
        }
    }

    fn weight(&self) -> Option<u32> {
        None
    }
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Number of coefficients to compute.
    pub coeff_count: usize,
    /// Scan step in t.
    pub step: f64,
    /// Brent tolerance in t.
    pub t_tol: f64,
    /// Largest accepted |detector| at a refined root.
    pub accept: f64,
    /// Anchor of the base coefficient solve, below √3/2.
    pub y_anchor: f64,
    /// Extra truncation beyond the default for the base solve.
    pub extra_terms: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { coeff_count: 200, step: 0.01, t_tol: 1e-13, accept: 1e-7, y_anchor: 0.5, extra_terms: 0 }
    }
}

/// Brackets [a_i, a_{i+1}] of the scan grid where the detector changes sign.
pub fn scan(a: f64, b: f64, parity: Parity, step: f64) -> Result<Vec<(f64, f64, f64, f64)>> {
    if !(b > a && a > 0.0 && step > 0.0) {
        return Err(MaassError::Parameters(format!("bad scan range [{a}, {b}] step {step}")));
    }
    let n = ((b - a) / step).ceil() as usize;
    let grid: Vec<f64> = (0..=n).map(|i| (a + i as f64 * step).min(b)).collect();
    let vals: Vec<Result<f64>> = grid.par_iter().map(|&t| detector(t, parity, DETECTOR_ANCHORS)).collect();
    let vals: Vec<f64> = vals.into_iter().collect::<Result<_>>()?;
    Ok((0..n)
        .filter(|&i| vals[i].signum() != vals[i + 1].signum())
        .map(|i| (grid[i], grid[i + 1], vals[i], vals[i + 1]))
        .collect())
}

/// Refine a bracket to a spectral parameter; `None` when the sign change is a pole.
pub fn refine(lo: f64, hi: f64, parity: Parity, opts: &SolveOptions) -> Result<Option<(f64, f64)>> {
    let f = |t: f64| detector(t, parity, DETECTOR_ANCHORS).unwrap_or(f64::NAN);
    let mut conv = roots::SimpleConvergency { eps: opts.t_tol, max_iter: 200 };
    let t = match roots::find_root_brent(lo, hi, &f, &mut conv) {
        Ok(t) => t,
        Err(_) => return Ok(None),
    };
    let r = f(t).abs();
    // a genuine eigenvalue also makes the other coefficients anchor-independent
    if !(r <= opts.accept) || anchor_disagreement(t, parity, DETECTOR_ANCHORS, 8)? > opts.accept.sqrt() {
        return Ok(None);
    }
    Ok(Some((t, r)))
}

/// Coefficients at a known spectral parameter: base Hejhal solve plus extension.
pub fn coefficients(t: f64, parity: Parity, opts: &SolveOptions, ladder_ratio: f64) -> Result<(Vec<f64>, (usize, usize, Option<f64>))> {
    let (m, q) = truncation(t, opts.y_anchor);
    let m = m + opts.extra_terms;
    let base = solve_system(t, parity, m, q.max(m + 12), opts.y_anchor, true)?;
    let mut coeffs = extend(t, parity, &base.coeffs, opts.coeff_count.max(2), ladder_ratio)?;
    // low coefficients straight from the base solve where it is sharpest
    let keep = (m / 2).min(coeffs.len() - 1);
    coeffs[..=keep].copy_from_slice(&base.coeffs[..=keep]);
    Ok((coeffs, (base.m, base.q, base.condition)))
}

/// Find and certify all forms of the given parity with t in [a, b].
pub fn solve(a: f64, b: f64, parity: Parity, opts: &SolveOptions) -> Result<Vec<MaassForm>> {
    let brackets = scan(a, b, parity, opts.step)?;
    let mut forms = Vec::new();
    for (lo, hi, _, _) in brackets {
        let Some((t, r)) = refine(lo, hi, parity, opts)? else { continue };
        let dis = anchor_disagreement(t, parity, DETECTOR_ANCHORS, 8)?;
        let (c1, (m, q, cond)) = coefficients(t, parity, opts, 0.8)?;
        // independent run: another anchor, more terms, another ladder
        let alt = SolveOptions { y_anchor: opts.y_anchor * 0.85, extra_terms: opts.extra_terms + 4, ..opts.clone() };
        let (c2, _) = coefficients(t, parity, &alt, 0.75)?;
        let gap = c1.iter().zip(&c2).skip(2).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        let digits = if gap > 0.0 { (-gap.log10()).floor().clamp(0.0, 16.0) as u32 } else { 16 };
        let diagnostics = SolverDiagnostics {
            base_truncation: m,
            base_samples: q,
            base_anchor: opts.y_anchor,
            condition: cond,
            detector_residual: r,
            anchor_disagreement: dis,
            certification_gap: gap,
            bracket: (lo, hi),
        };
        forms.push(MaassForm::new(t, parity, c1, digits, diagnostics));
    }
    Ok(forms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn satake_of_zero_coefficient() {
        let diag = SolverDiagnostics {
            base_truncation: 0,
            base_samples: 0,
            base_anchor: 0.5,
            condition: None,
            detector_residual: 0.0,
            anchor_disagreement: 0.0,
            certification_gap: 0.0,
            bracket: (0.0, 0.0),
        };
        let f = MaassForm::new(10.0, Parity::Odd, vec![0.0, 1.0, 0.0, 1.5], 10, diag);
        let s = maass_satake(&f, 2).unwrap();
        assert_eq!(s.branch, SatakeBranch::Tempered);
        assert!((s.s1.im - std::f64::consts::PI / (2.0 * 2f64.ln())).abs() < 1e-14);
        let (a, b) = s.roots();
        assert!((a.norm() - 1.0).abs() < 1e-14 && (a + b).norm() < 1e-14);
        let s3 = maass_satake(&f, 3).unwrap();
        assert!(((s3.lambda()).re - 1.5).abs() < 1e-14);
    }
}
