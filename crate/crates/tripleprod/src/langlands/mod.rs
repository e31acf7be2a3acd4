//! Local Langlands parameters for GL(2)-type data at a single place.
//!
//! Archimedean factors are the characters `(s,δ)¹_ℝ` and the induced
//! representations `(s,l)²_ℝ`; non-archimedean factors are `‖·‖^s ⊗ sp^n`.
//! Parameters are multisets kept in a canonical sorted form, so equality of
//! parameters (up to a tolerance on the complex exponents) is decidable.
//!
//! The local L-factors follow the tables
//!
//! ```text
//! L(s, (s∞,δ)¹)     = ζ_ℝ(s + s∞ + δ)
//! L(s, (s∞,l)²)     = ζ_ℂ(s + s∞ + l/2)
//! L(s, ‖·‖^t ⊗ sp^n) = ζ_p(s + t + n − 1)
//! ```
//!
//! with ζ_ℂ selectable between `2(2π)^{−s}Γ(s)` and `(2π)^{−s}Γ(s)`.

mod render;

use crate::special::{ln_gamma, zeta_c_printed, zeta_r};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::f64::consts::PI;

pub use render::render_complex;

/// Tolerance for recognising equal exponents and trivial factors.
pub const EXPONENT_TOL: f64 = 1e-9;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum LanglandsError {
    #[error("parameters live at different places: {0} vs {1}")]
    PlaceMismatch(Place, Place),
    #[error("adjoint needs a degree-2 parameter, got degree {0}")]
    NotDegreeTwo(usize),
    #[error("no trivial factor to remove from {0}")]
    NoTrivialFactor(String),
    #[error("pole of L(s, {factor}) at s = {s}")]
    Pole { s: C64, factor: String },
    #[error("unsupported factor for this table: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, LanglandsError>;

/// Normalisation of ζ_ℂ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum ZetaCConvention {
    /// `2(2π)^{−s}Γ(s) = ζ_ℝ(s)ζ_ℝ(s+1)`, compatible with `(s,0)² ≃ (s,0)¹ ⊕ (s,1)¹`.
    #[default]
    Tate,
    /// `(2π)^{−s}Γ(s)` as printed in the L-factor tables.
    Printed,
}

pub fn zeta_c(s: C64, conv: ZetaCConvention) -> C64 {
    match conv {
        ZetaCConvention::Tate => zeta_c_printed(s) * 2.0,
        ZetaCConvention::Printed => zeta_c_printed(s),
    }
}

/// ζ_p(s) = (1 − p^{−s})^{−1}.
pub fn zeta_p(s: C64, p: u64) -> C64 {
    let x = (-s * (p as f64).ln()).exp();
    (C64::new(1.0, 0.0) - x).inv()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Place {
    Infinite,
    Finite(u64),
}

impl std::fmt::Display for Place {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Place::Infinite => write!(f, "∞"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ArchFactor {
    Dim1 { s: C64, delta: u8 },
    /// Always stored with `l > 0`.
    Dim2 { s: C64, l: u32 },
}

impl ArchFactor {
    pub fn dim(&self) -> usize {
        match self {
            ArchFactor::Dim1 { .. } => 1,
            ArchFactor::Dim2 { .. } => 2,
        }
    }

    pub fn s(&self) -> C64 {
        match *self {
            ArchFactor::Dim1 { s, .. } | ArchFactor::Dim2 { s, .. } => s,
        }
    }

    /// Canonicalise a (possibly l = 0 or negative l) factor.
    fn normalise(s: C64, l: i64) -> Vec<ArchFactor> {
        if l == 0 {
            vec![ArchFactor::Dim1 { s, delta: 0 }, ArchFactor::Dim1 { s, delta: 1 }]
        } else {
            vec![ArchFactor::Dim2 { s, l: l.unsigned_abs() as u32 }]
        }
    }

    fn key(&self) -> (u8, u32, f64, f64) {
        match *self {
            ArchFactor::Dim1 { s, delta } => (0, delta as u32, s.re, s.im),
            ArchFactor::Dim2 { s, l } => (1, l, s.re, s.im),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonArchFactor {
    pub s: C64,
    /// Size of the special representation; 1 means a plain character.
    pub n: u32,
    /// Ramified twists have no table rows; operations on them error.
    #[serde(default)]
    pub ramified: bool,
}

impl NonArchFactor {
    pub fn unramified(s: C64) -> Self {
        Self { s, n: 1, ramified: false }
    }

    pub fn special(s: C64, n: u32) -> Self {
        assert!(n >= 1, "sp^n needs n >= 1");
        Self { s, n, ramified: false }
    }

    fn key(&self) -> (u8, u32, f64, f64) {
        (self.ramified as u8, self.n, self.s.re, self.s.im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Factor {
    Arch(ArchFactor),
    NonArch(NonArchFactor),
}

impl Factor {
    pub fn dim(&self) -> usize {
        match self {
            Factor::Arch(a) => a.dim(),
            Factor::NonArch(f) => f.n as usize,
        }
    }

    fn key(&self) -> (u8, u32, f64, f64) {
        match self {
            Factor::Arch(a) => a.key(),
            Factor::NonArch(f) => f.key(),
        }
    }

    fn is_trivial(&self) -> bool {
        match *self {
            Factor::Arch(ArchFactor::Dim1 { s, delta: 0 }) => s.norm() < EXPONENT_TOL,
            Factor::NonArch(NonArchFactor { s, n: 1, ramified: false }) => s.norm() < EXPONENT_TOL,
            _ => false,
        }
    }
}

fn cmp_key(a: &(u8, u32, f64, f64), b: &(u8, u32, f64, f64)) -> Ordering {
    a.0.cmp(&b.0)
        .then(a.1.cmp(&b.1))
        .then(a.2.total_cmp(&b.2))
        .then(a.3.total_cmp(&b.3))
}

/// A finite direct sum of irreducible local parameters at one place.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LanglandsParam {
    place: Place,
    factors: Vec<Factor>,
}

impl LanglandsParam {
    pub fn new(place: Place, factors: Vec<Factor>) -> Self {
        let mut flat = Vec::with_capacity(factors.len());
        for f in factors {
            match (place, f) {
                (Place::Infinite, Factor::Arch(ArchFactor::Dim2 { s, l })) => {
                    flat.extend(ArchFactor::normalise(s, l as i64).into_iter().map(Factor::Arch))
                }
                (Place::Infinite, Factor::Arch(ArchFactor::Dim1 { s, delta })) => {
                    flat.push(Factor::Arch(ArchFactor::Dim1 { s, delta: delta % 2 }))
                }
                (Place::Finite(_), Factor::NonArch(_)) => flat.push(f),
                _ => panic!("factor {f:?} does not belong at place {place}"),
            }
        }
        flat.sort_by(|a, b| cmp_key(&a.key(), &b.key()));
        Self { place, factors: flat }
    }

    /// The trivial one-dimensional parameter.
    pub fn trivial(place: Place) -> Self {
        let f = match place {
            Place::Infinite => Factor::Arch(ArchFactor::Dim1 { s: C64::new(0.0, 0.0), delta: 0 }),
            Place::Finite(_) => Factor::NonArch(NonArchFactor::unramified(C64::new(0.0, 0.0))),
        };
        Self::new(place, vec![f])
    }

    pub fn arch(factors: Vec<ArchFactor>) -> Self {
        Self::new(Place::Infinite, factors.into_iter().map(Factor::Arch).collect())
    }

    pub fn nonarch(p: u64, factors: Vec<NonArchFactor>) -> Self {
        Self::new(Place::Finite(p), factors.into_iter().map(Factor::NonArch).collect())
    }

    /// `(0, k−1)²_ℝ`, the archimedean parameter of a weight-k holomorphic form.
    pub fn holomorphic(k: u32) -> Self {
        Self::arch(vec![ArchFactor::Dim2 { s: C64::new(0.0, 0.0), l: k - 1 }])
    }

    /// `(s,δ)¹ ⊕ (−s,δ)¹`, a principal series of parity δ.
    pub fn principal_series(s: C64, delta: u8) -> Self {
        Self::arch(vec![ArchFactor::Dim1 { s, delta }, ArchFactor::Dim1 { s: -s, delta }])
    }

    /// `‖·‖^{ṡ} ⊕ ‖·‖^{s̈}`, an unramified principal series at p.
    pub fn unramified(p: u64, s1: C64, s2: C64) -> Self {
        Self::nonarch(p, vec![NonArchFactor::unramified(s1), NonArchFactor::unramified(s2)])
    }

    pub fn place(&self) -> Place {
        self.place
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn degree(&self) -> usize {
        self.factors.iter().map(Factor::dim).sum()
    }

    /// Direct sum.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.same_place(other)?;
        let mut f = self.factors.clone();
        f.extend_from_slice(&other.factors);
        Ok(Self::new(self.place, f))
    }

    fn same_place(&self, other: &Self) -> Result<()> {
        if self.place != other.place {
            return Err(LanglandsError::PlaceMismatch(self.place, other.place));
        }
        Ok(())
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.same_place(other)?;
        let mut out = Vec::new();
        for a in &self.factors {
            for b in &other.factors {
                tensor_factor(a, b, &mut out);
            }
        }
        Ok(Self::new(self.place, out))
    }

    pub fn dual(&self) -> Self {
        let f = self
            .factors
            .iter()
            .map(|f| match *f {
                Factor::Arch(ArchFactor::Dim1 { s, delta }) => Factor::Arch(ArchFactor::Dim1 { s: -s, delta }),
                Factor::Arch(ArchFactor::Dim2 { s, l }) => Factor::Arch(ArchFactor::Dim2 { s: -s, l }),
                // (‖·‖^s ⊗ sp^n)^∨ = ‖·‖^{1−n−s} ⊗ sp^n
                Factor::NonArch(NonArchFactor { s, n, ramified }) => Factor::NonArch(NonArchFactor {
                    s: C64::new(1.0 - n as f64, 0.0) - s,
                    n,
                    ramified,
                }),
            })
            .collect();
        Self::new(self.place, f)
    }

    /// Remove one copy of the trivial parameter.
    pub fn remove_trivial(&self) -> Result<Self> {
        let idx = self
            .factors
            .iter()
            .position(Factor::is_trivial)
            .ok_or_else(|| LanglandsError::NoTrivialFactor(self.render()))?;
        let mut f = self.factors.clone();
        f.remove(idx);
        Ok(Self { place: self.place, factors: f })
    }

    /// `Ad ϱ = ϱ ⊗ ϱ^∨ ⊖ 1`.
    pub fn adjoint(&self) -> Result<Self> {
        if self.degree() != 2 {
            return Err(LanglandsError::NotDegreeTwo(self.degree()));
        }
        self.tensor(&self.dual())?.remove_trivial()
    }

    /// Equality of multisets with exponents compared to `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.place != other.place || self.factors.len() != other.factors.len() {
            return false;
        }
        // Greedy matching is exact here because the discrete data must agree
        // and exponents within a class are compared pairwise.
        let mut used = vec![false; other.factors.len()];
        'outer: for a in &self.factors {
            for (j, b) in other.factors.iter().enumerate() {
                if !used[j] && factor_close(a, b, tol) {
                    used[j] = true;
                    continue 'outer;
                }
            }
            return false;
        }
        true
    }

    /// Local L-factor `L(s, ϱ)`.
    pub fn local_l(&self, s: C64, conv: ZetaCConvention) -> Result<C64> {
        let mut v = C64::new(1.0, 0.0);
        for f in &self.factors {
            v *= factor_l(self.place, f, s, conv)?;
        }
        Ok(v)
    }

    /// log L(s, ϱ); used where the product would over- or underflow.
    pub fn ln_local_l(&self, s: C64, conv: ZetaCConvention) -> Result<C64> {
        let mut v = C64::new(0.0, 0.0);
        for f in &self.factors {
            v += ln_factor_l(self.place, f, s, conv)?;
        }
        Ok(v)
    }

    /// Analytic conductor `C(t, ϱ)` at an archimedean place.
    pub fn analytic_conductor(&self, t: f64) -> f64 {
        assert_eq!(self.place, Place::Infinite, "analytic conductor is archimedean");
        let it = C64::new(0.0, t);
        self.factors
            .iter()
            .map(|f| match *f {
                Factor::Arch(ArchFactor::Dim1 { s, .. }) => 1.0 + (it + s).norm(),
                Factor::Arch(ArchFactor::Dim2 { s, l }) => (1.0 + (it + s + l as f64 / 2.0).norm()).powi(2),
                Factor::NonArch(_) => unreachable!(),
            })
            .product()
    }

    /// Conductor exponent sum at a finite place, returned as p^e.
    pub fn conductor(&self) -> Result<u64> {
        let Place::Finite(p) = self.place else {
            panic!("integer conductor is non-archimedean");
        };
        let mut e = 0u32;
        for f in &self.factors {
            if let Factor::NonArch(g) = f {
                if g.ramified {
                    return Err(LanglandsError::Unsupported(render::factor(f)));
                }
                e += g.n - 1;
            }
        }
        Ok(p.pow(e))
    }

    /// ε-factor with the standard additive character.
    pub fn epsilon(&self, s: C64) -> Result<C64> {
        let mut v = C64::new(1.0, 0.0);
        for f in &self.factors {
            v *= match (self.place, *f) {
                (_, Factor::Arch(ArchFactor::Dim1 { delta, .. })) => C64::i().powu(delta as u32),
                (_, Factor::Arch(ArchFactor::Dim2 { l, .. })) => C64::i().powu(l + 1),
                (Place::Finite(p), Factor::NonArch(g)) => {
                    if g.ramified {
                        return Err(LanglandsError::Unsupported(render::factor(f)));
                    }
                    let e = -s - g.s - (g.n as f64 - 2.0) / 2.0;
                    let base = -(e * (p as f64).ln()).exp();
                    base.powu(g.n - 1)
                }
                _ => unreachable!(),
            };
        }
        Ok(v)
    }

    /// Text rendering, e.g. `(0,11)^2_R ⊕ (0,1)^1_R`.
    pub fn render(&self) -> String {
        if self.factors.is_empty() {
            return "0".into();
        }
        self.factors.iter().map(render::factor).collect::<Vec<_>>().join(" ⊕ ")
    }
}

impl std::fmt::Display for LanglandsParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render())
    }
}

fn factor_close(a: &Factor, b: &Factor, tol: f64) -> bool {
    match (a, b) {
        (Factor::Arch(ArchFactor::Dim1 { s: s1, delta: d1 }), Factor::Arch(ArchFactor::Dim1 { s: s2, delta: d2 })) => {
            d1 == d2 && (s1 - s2).norm() <= tol
        }
        (Factor::Arch(ArchFactor::Dim2 { s: s1, l: l1 }), Factor::Arch(ArchFactor::Dim2 { s: s2, l: l2 })) => {
            l1 == l2 && (s1 - s2).norm() <= tol
        }
        (Factor::NonArch(f), Factor::NonArch(g)) => f.n == g.n && f.ramified == g.ramified && (f.s - g.s).norm() <= tol,
        _ => false,
    }
}

fn tensor_factor(a: &Factor, b: &Factor, out: &mut Vec<Factor>) {
    use ArchFactor::*;
    match (*a, *b) {
        (Factor::Arch(Dim1 { s: s1, delta: d1 }), Factor::Arch(Dim1 { s: s2, delta: d2 })) => {
            out.push(Factor::Arch(Dim1 { s: s1 + s2, delta: (d1 + d2) % 2 }))
        }
        (Factor::Arch(Dim1 { s: s1, .. }), Factor::Arch(Dim2 { s: s2, l }))
        | (Factor::Arch(Dim2 { s: s2, l }), Factor::Arch(Dim1 { s: s1, .. })) => {
            out.push(Factor::Arch(Dim2 { s: s1 + s2, l }))
        }
        (Factor::Arch(Dim2 { s: s1, l: l1 }), Factor::Arch(Dim2 { s: s2, l: l2 })) => {
            let s = s1 + s2;
            out.extend(ArchFactor::normalise(s, l1 as i64 + l2 as i64).into_iter().map(Factor::Arch));
            out.extend(ArchFactor::normalise(s, l1 as i64 - l2 as i64).into_iter().map(Factor::Arch));
        }
        (Factor::NonArch(f), Factor::NonArch(g)) => {
            // sp^m ⊗ sp^n = ⊕_{i<min} ‖·‖^i ⊗ sp^{m+n−2i−1}
            let (m, n) = (f.n.max(g.n), f.n.min(g.n));
            for i in 0..n {
                out.push(Factor::NonArch(NonArchFactor {
                    s: f.s + g.s + i as f64,
                    n: m + n - 2 * i - 1,
                    ramified: f.ramified || g.ramified,
                }));
            }
        }
        _ => unreachable!("place mismatch checked by caller"),
    }
}

fn pole_check(z: C64, f: &Factor, s: C64) -> Result<()> {
    if z.re <= EXPONENT_TOL && (z.re - z.re.round()).abs() < EXPONENT_TOL && z.im.abs() < EXPONENT_TOL {
        return Err(LanglandsError::Pole { s, factor: render::factor(f) });
    }
    Ok(())
}

fn factor_l(place: Place, f: &Factor, s: C64, conv: ZetaCConvention) -> Result<C64> {
    Ok(match (place, *f) {
        (_, Factor::Arch(ArchFactor::Dim1 { s: s0, delta })) => {
            let z = s + s0 + delta as f64;
            // ζ_ℝ has poles where z/2 ∈ −ℕ
            pole_check(z * 0.5, f, s)?;
            zeta_r(z)
        }
        (_, Factor::Arch(ArchFactor::Dim2 { s: s0, l })) => {
            let z = s + s0 + l as f64 / 2.0;
            pole_check(z, f, s)?;
            zeta_c(z, conv)
        }
        (Place::Finite(p), Factor::NonArch(g)) => {
            if g.ramified {
                return Err(LanglandsError::Unsupported(render::factor(f)));
            }
            let z = s + g.s + (g.n as f64 - 1.0);
            let x = (-z * (p as f64).ln()).exp();
            if (x - 1.0).norm() < EXPONENT_TOL {
                return Err(LanglandsError::Pole { s, factor: render::factor(f) });
            }
            zeta_p(z, p)
        }
        _ => unreachable!(),
    })
}

fn ln_factor_l(place: Place, f: &Factor, s: C64, conv: ZetaCConvention) -> Result<C64> {
    Ok(match (place, *f) {
        (_, Factor::Arch(ArchFactor::Dim1 { s: s0, delta })) => {
            let z = s + s0 + delta as f64;
            pole_check(z * 0.5, f, s)?;
            -z * 0.5 * PI.ln() + ln_gamma(z * 0.5)
        }
        (_, Factor::Arch(ArchFactor::Dim2 { s: s0, l })) => {
            let z = s + s0 + l as f64 / 2.0;
            pole_check(z, f, s)?;
            let c = match conv {
                ZetaCConvention::Tate => 2f64.ln(),
                ZetaCConvention::Printed => 0.0,
            };
            -z * (2.0 * PI).ln() + ln_gamma(z) + c
        }
        _ => factor_l(place, f, s, conv)?.ln(),
    })
}

/// Satake-type data of a degree-two unramified parameter:
/// the two exponents (ṡ, s̈) with p^{−ṡ}, p^{−s̈} the Satake roots.
pub fn unramified_exponents(p: u64, alpha: C64, beta: C64) -> (C64, C64) {
    let lp = (p as f64).ln();
    (-alpha.ln() / lp, -beta.ln() / lp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn characters_multiply() {
        let a = LanglandsParam::arch(vec![ArchFactor::Dim1 { s: c(0.3, 1.0), delta: 1 }]);
        let b = LanglandsParam::arch(vec![ArchFactor::Dim1 { s: c(-0.1, 2.0), delta: 1 }]);
        let t = a.tensor(&b).unwrap();
        let want = LanglandsParam::arch(vec![ArchFactor::Dim1 { s: c(0.2, 3.0), delta: 0 }]);
        assert!(t.approx_eq(&want, 1e-12));
    }

    #[test]
    fn holomorphic_square_splits_l_zero() {
        let r = LanglandsParam::holomorphic(12);
        let t = r.tensor(&r).unwrap();
        assert_eq!(t.render(), "(0,0)^1_R ⊕ (0,1)^1_R ⊕ (0,22)^2_R");
        assert_eq!(t.degree(), 4);
    }

    #[test]
    fn special_square() {
        let sp2 = LanglandsParam::nonarch(3, vec![NonArchFactor::special(c(0.0, 0.0), 2)]);
        let t = sp2.tensor(&sp2).unwrap();
        let want = LanglandsParam::nonarch(
            3,
            vec![NonArchFactor::unramified(c(1.0, 0.0)), NonArchFactor::special(c(0.0, 0.0), 3)],
        );
        assert!(t.approx_eq(&want, 1e-12));
    }

    #[test]
    fn special_dual() {
        let a = LanglandsParam::nonarch(5, vec![NonArchFactor::special(c(0.25, 1.0), 3)]);
        let d = a.dual();
        let want = LanglandsParam::nonarch(5, vec![NonArchFactor::special(c(-2.25, -1.0), 3)]);
        assert!(d.approx_eq(&want, 1e-12));
        assert!(d.dual().approx_eq(&a, 1e-12));
    }

    #[test]
    fn adjoint_rows() {
        let s = c(0.0, 4.2);
        let ad = LanglandsParam::principal_series(s, 1).adjoint().unwrap();
        let want = LanglandsParam::arch(vec![
            ArchFactor::Dim1 { s: s * 2.0, delta: 0 },
            ArchFactor::Dim1 { s: c(0.0, 0.0), delta: 0 },
            ArchFactor::Dim1 { s: -s * 2.0, delta: 0 },
        ]);
        assert!(ad.approx_eq(&want, 1e-12));

        let ad = LanglandsParam::holomorphic(12).adjoint().unwrap();
        assert_eq!(ad.render(), "(0,1)^1_R ⊕ (0,22)^2_R");

        let (s1, s2) = (c(0.0, 0.7), c(0.0, -0.7));
        let ad = LanglandsParam::unramified(7, s1, s2).adjoint().unwrap();
        let want = LanglandsParam::nonarch(
            7,
            vec![
                NonArchFactor::unramified(s1 - s2),
                NonArchFactor::unramified(c(0.0, 0.0)),
                NonArchFactor::unramified(s2 - s1),
            ],
        );
        assert!(ad.approx_eq(&want, 1e-12));
    }

    #[test]
    fn adjoint_rejects_wrong_degree() {
        let t = LanglandsParam::trivial(Place::Infinite);
        assert_eq!(t.adjoint(), Err(LanglandsError::NotDegreeTwo(1)));
    }

    #[test]
    fn l_factor_rows() {
        let r = LanglandsParam::holomorphic(12);
        let s = c(0.5, 0.0);
        let want = zeta_c_printed(s + 5.5);
        assert!((r.local_l(s, ZetaCConvention::Printed).unwrap() - want).norm() < 1e-15 * want.norm());
        let triv = LanglandsParam::trivial(Place::Finite(2));
        assert!((triv.local_l(c(1.0, 0.0), ZetaCConvention::Tate).unwrap() - 2.0).norm() < 1e-15);
        assert!(matches!(triv.local_l(c(0.0, 0.0), ZetaCConvention::Tate), Err(LanglandsError::Pole { .. })));
    }

    #[test]
    fn mixed_weight_triple_gamma() {
        let (k1, k2, k3) = (28u32, 16u32, 12u32);
        let t = LanglandsParam::holomorphic(k1)
            .tensor(&LanglandsParam::holomorphic(k2))
            .unwrap()
            .tensor(&LanglandsParam::holomorphic(k3))
            .unwrap();
        let s = c(0.5, 0.3);
        let got = t.local_l(s, ZetaCConvention::Printed).unwrap();
        let want = [k1 as f64 - 1.5, k2 as f64 - 0.5, k3 as f64 - 0.5, 0.5]
            .iter()
            .map(|&m| zeta_c_printed(s + m))
            .product::<C64>();
        assert!((got - want).norm() < 1e-12 * want.norm());
    }

    #[test]
    fn conductors_and_epsilon() {
        let r = LanglandsParam::holomorphic(12);
        assert!((r.analytic_conductor(0.0) - 6.5f64.powi(2)).abs() < 1e-12);
        assert!((LanglandsParam::trivial(Place::Infinite).analytic_conductor(0.0) - 1.0).abs() < 1e-15);
        assert!((r.epsilon(c(0.5, 0.0)).unwrap() - C64::new(1.0, 0.0)).norm() < 1e-15);
        let r = LanglandsParam::holomorphic(14);
        assert!((r.epsilon(c(0.5, 0.0)).unwrap() + 1.0).norm() < 1e-15);
        let sp = LanglandsParam::nonarch(3, vec![NonArchFactor::special(c(0.0, 0.0), 2)]);
        assert_eq!(sp.conductor().unwrap(), 3);
        let e = sp.epsilon(c(0.5, 0.0)).unwrap();
        assert!((e + 3f64.powf(-0.5)).norm() < 1e-15);
    }

    #[test]
    fn ramified_is_unsupported() {
        let f = NonArchFactor { s: c(0.0, 0.0), n: 1, ramified: true };
        let a = LanglandsParam::nonarch(5, vec![f]);
        assert!(matches!(a.epsilon(c(0.5, 0.0)), Err(LanglandsError::Unsupported(_))));
        assert!(matches!(a.conductor(), Err(LanglandsError::Unsupported(_))));
    }

    #[test]
    fn tensor_rejects_mixed_places() {
        let a = LanglandsParam::trivial(Place::Infinite);
        let b = LanglandsParam::trivial(Place::Finite(2));
        assert!(matches!(a.tensor(&b), Err(LanglandsError::PlaceMismatch(..))));
    }
}
