//! Completed global L-functions of level one, assembled from archimedean
//! Langlands parameters and unramified Satake roots, and evaluated by a
//! smoothed approximate functional equation.
//!
//! All Dirichlet coefficients are in the unitary normalisation, so every
//! series built here satisfies `Λ(s) = w·Λ̃(1 − s)` with `Λ = γ·L`.

mod afe;

use crate::langlands::{ArchFactor, Factor, LanglandsError, LanglandsParam, Place, ZetaCConvention};
use crate::qexp::HoloEigenform;
use crate::special::{zeta, zeta_r};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::sync::{Arc, RwLock};

pub use afe::{afe_value, AfeValue};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum LfunError {
    #[error("coefficient shortfall: need b_n for n <= {needed}, have n <= {available}")]
    Shortfall { needed: usize, available: usize },
    #[error("no Satake data for p = {0}")]
    MissingSatake(u64),
    #[error("pole at s = {0}")]
    Pole(C64),
    #[error("error bound {bound:e} exceeds the target {eps:e}")]
    Accuracy { bound: f64, eps: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Langlands(#[from] LanglandsError),
}

pub type Result<T> = std::result::Result<T, LfunError>;

/// A level-one automorphic representation of GL(2) as seen by the L-function builders.
pub trait GlobalRep: Send + Sync {
    fn label(&self) -> String;
    /// Archimedean parameter.
    fn arch(&self) -> LanglandsParam;
    /// Unitary Satake roots (p^{−ṡ}, p^{−s̈}).
    fn local_roots(&self, p: u64) -> Option<(C64, C64)>;
    /// Largest n with Satake data for every prime p ≤ n.
    fn supply(&self) -> usize;
    /// Exponent θ with |roots| ≤ p^θ.
    fn theta(&self) -> f64;
    /// Holomorphic weight, or `None` for a Maass form.
    fn weight(&self) -> Option<u32>;
}

impl GlobalRep for HoloEigenform {
    fn label(&self) -> String {
        HoloEigenform::label(self)
    }

    fn arch(&self) -> LanglandsParam {
        LanglandsParam::holomorphic(HoloEigenform::weight(self))
    }

    fn local_roots(&self, p: u64) -> Option<(C64, C64)> {
        self.satake(p).map(|s| s.roots())
    }

    fn supply(&self) -> usize {
        self.precision() - 1
    }

    fn theta(&self) -> f64 {
        0.0
    }

    fn weight(&self) -> Option<u32> {
        Some(HoloEigenform::weight(self))
    }
}

type LocalFn = Arc<dyn Fn(u64) -> Option<Vec<C64>> + Send + Sync>;

/// A completed L-function `Λ(s) = γ(s) Σ b_n n^{−s}` with `Λ(s) = w Λ̃(1−s)`.
pub struct LSeries {
    id: String,
    gamma: LanglandsParam,
    conv: ZetaCConvention,
    root_number: C64,
    local: LocalFn,
    degree: usize,
    supply: usize,
    theta: f64,
    /// Poles ρ of Λ with residues.
    poles: Vec<(C64, C64)>,
    cache: RwLock<Vec<C64>>,
}

impl std::fmt::Debug for LSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LSeries")
            .field("id", &self.id)
            .field("gamma", &self.gamma.render())
            .field("degree", &self.degree)
            .field("root_number", &self.root_number)
            .field("supply", &self.supply)
            .finish()
    }
}

impl LSeries {
    /// Low-level constructor; `local(p)` returns the d inverse roots of the Euler factor at p.
    pub fn from_parts(
        id: impl Into<String>,
        gamma: LanglandsParam,
        root_number: C64,
        local: impl Fn(u64) -> Option<Vec<C64>> + Send + Sync + 'static,
        supply: usize,
        theta: f64,
        poles: Vec<(C64, C64)>,
    ) -> Self {
        assert_eq!(gamma.place(), Place::Infinite, "gamma factors come from an archimedean parameter");
        Self {
            id: id.into(),
            degree: gamma.degree(),
            gamma,
            conv: ZetaCConvention::Tate,
            root_number,
            local: Arc::new(local),
            supply,
            theta,
            poles,
            cache: RwLock::new(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)]),
        }
    }

    pub fn with_convention(mut self, conv: ZetaCConvention) -> Self {
        self.conv = conv;
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn gamma(&self) -> &LanglandsParam {
        &self.gamma
    }

    pub fn convention(&self) -> ZetaCConvention {
        self.conv
    }

    pub fn root_number(&self) -> C64 {
        self.root_number
    }

    pub fn supply(&self) -> usize {
        self.supply
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn poles(&self) -> &[(C64, C64)] {
        &self.poles
    }

    /// Inverse roots of the Euler factor at p.
    pub fn local_roots(&self, p: u64) -> Result<Vec<C64>> {
        (self.local)(p).ok_or(LfunError::MissingSatake(p))
    }

    /// γ(s), the archimedean factor.
    pub fn gamma_value(&self, s: C64) -> Result<C64> {
        Ok(self.gamma.local_l(s, self.conv)?)
    }

    pub fn ln_gamma_value(&self, s: C64) -> Result<C64> {
        Ok(self.gamma.ln_local_l(s, self.conv)?)
    }

    /// b_0..=b_n (b_0 = 0), generated multiplicatively and memoised.
    pub fn coefficients(&self, n: usize) -> Result<Vec<C64>> {
        {
            let cache = self.cache.read().expect("coefficient cache poisoned");
            if cache.len() > n {
                return Ok(cache[..=n].to_vec());
            }
        }
        if n > self.supply {
            return Err(LfunError::Shortfall { needed: n, available: self.supply });
        }
        let target = (2 * self.cache.read().expect("coefficient cache poisoned").len()).max(n).min(self.supply);
        let b = self.generate(target)?;
        let mut cache = self.cache.write().expect("coefficient cache poisoned");
        if cache.len() < b.len() {
            *cache = b;
        }
        Ok(cache[..=n].to_vec())
    }

    fn generate(&self, n: usize) -> Result<Vec<C64>> {
        let mut b = vec![C64::new(0.0, 0.0); n + 1];
        if n >= 1 {
            b[1] = C64::new(1.0, 0.0);
        }
        let spf = smallest_prime_factors(n);
        for m in 2..=n {
            let p = spf[m];
            if p == m {
                let series = local_series(&self.local_roots(p as u64)?, max_power(p, n));
                let mut q = p;
                for c in series.into_iter().skip(1) {
                    b[q] = c;
                    if q > n / p {
                        break;
                    }
                    q *= p;
                }
                continue;
            }
            let mut rest = m;
            while rest % p == 0 {
                rest /= p;
            }
            if rest != 1 {
                b[m] = b[m / rest] * b[rest];
            }
        }
        Ok(b)
    }

    /// Π_{p ≤ pmax} ∏_i (1 − α_i p^{−s})^{−1}; converges absolutely for Re s > 1 + θ.
    pub fn euler_product(&self, s: C64, pmax: u64) -> Result<C64> {
        let mut log = C64::new(0.0, 0.0);
        for p in primes_up_to(pmax as usize) {
            let x = (-s * (p as f64).ln()).exp();
            for a in self.local_roots(p as u64)? {
                log -= (C64::new(1.0, 0.0) - a * x).ln();
            }
        }
        Ok(log.exp())
    }

    /// Σ_{n ≤ N} b_n n^{−s}.
    pub fn dirichlet_sum(&self, s: C64, n: usize) -> Result<C64> {
        let b = self.coefficients(n)?;
        Ok(b.iter().enumerate().skip(1).map(|(k, c)| c * (-s * (k as f64).ln()).exp()).sum())
    }

    /// Archimedean data for the dual: conjugated shifts.
    pub(crate) fn dual_gamma(&self) -> LanglandsParam {
        let f = self
            .gamma
            .factors()
            .iter()
            .map(|f| match *f {
                Factor::Arch(ArchFactor::Dim1 { s, delta }) => Factor::Arch(ArchFactor::Dim1 { s: s.conj(), delta }),
                Factor::Arch(ArchFactor::Dim2 { s, l }) => Factor::Arch(ArchFactor::Dim2 { s: s.conj(), l }),
                other => other,
            })
            .collect();
        LanglandsParam::new(Place::Infinite, f)
    }
}

fn max_power(p: usize, n: usize) -> usize {
    let mut e = 0;
    let mut q = 1usize;
    while q <= n / p {
        q *= p;
        e += 1;
    }
    e
}

/// Coefficients of ∏(1 − α_i X)^{−1} up to X^m.
pub fn local_series(roots: &[C64], m: usize) -> Vec<C64> {
    // P(X) = ∏(1 − α_i X) = Σ e_j X^j
    let mut e = vec![C64::new(1.0, 0.0)];
    for &a in roots {
        let mut next = vec![C64::new(0.0, 0.0); e.len() + 1];
        for (j, c) in e.iter().enumerate() {
            next[j] += c;
            next[j + 1] -= c * a;
        }
        e = next;
    }
    let mut out = vec![C64::new(0.0, 0.0); m + 1];
    out[0] = C64::new(1.0, 0.0);
    for k in 1..=m {
        let mut acc = C64::new(0.0, 0.0);
        for j in 1..e.len().min(k + 1) {
            acc -= e[j] * out[k - j];
        }
        out[k] = acc;
    }
    out
}

pub(crate) fn smallest_prime_factors(n: usize) -> Vec<usize> {
    let mut spf: Vec<usize> = (0..=n).collect();
    let mut i = 2;
    while i * i <= n {
        if spf[i] == i {
            for j in (i * i..=n).step_by(i) {
                if spf[j] == j {
                    spf[j] = i;
                }
            }
        }
        i += 1;
    }
    spf
}

pub fn primes_up_to(n: usize) -> Vec<usize> {
    let spf = smallest_prime_factors(n);
    (2..=n).filter(|&m| spf[m] == m).collect()
}

/// ζ*(s) = ζ_ℝ(s) ζ(s).
pub fn zeta_star(s: C64) -> Result<C64> {
    if s.norm() < 1e-12 || (s - 1.0).norm() < 1e-12 {
        return Err(LfunError::Pole(s));
    }
    Ok(zeta_r(s) * zeta(s))
}

/// ζ* as a degree-one series, with poles at 0 and 1 of residues ∓1.
pub fn zeta_series() -> LSeries {
    LSeries::from_parts(
        "zeta",
        LanglandsParam::trivial(Place::Infinite),
        C64::new(1.0, 0.0),
        |_| Some(vec![C64::new(1.0, 0.0)]),
        usize::MAX / 2,
        0.0,
        vec![(C64::new(0.0, 0.0), C64::new(-1.0, 0.0)), (C64::new(1.0, 0.0), C64::new(1.0, 0.0))],
    )
}

/// Root number from the archimedean ε-factors, asserted to be +1.
///
/// Every level-one case built here has trivial finite ε-factors and
/// archimedean product +1; anything else signals a construction bug.
fn root_number(gamma: &LanglandsParam) -> Result<C64> {
    let w = gamma.epsilon(C64::new(0.5, 0.0))?;
    if (w - 1.0).norm() > 1e-12 {
        return Err(LfunError::Unsupported(format!("archimedean root number {w} for {}", gamma.render())));
    }
    Ok(w)
}

fn supply_of(reps: &[&dyn GlobalRep]) -> usize {
    reps.iter().map(|r| r.supply()).min().unwrap_or(0)
}

fn collect_roots(rep: &dyn GlobalRep) -> Vec<Option<(C64, C64)>> {
    let n = rep.supply();
    let spf = smallest_prime_factors(n);
    (0..=n).map(|m| if m >= 2 && spf[m] == m { rep.local_roots(m as u64) } else { None }).collect()
}

/// L(s, Ad ϱ): roots α/β, 1, β/α; no poles.
pub fn build_adjoint(f: &dyn GlobalRep) -> Result<LSeries> {
    let gamma = f.arch().adjoint()?;
    let w = root_number(&gamma)?;
    let table = collect_roots(f);
    let local = move |p: u64| {
        let (a, b) = (*table.get(p as usize)?)?;
        Some(vec![a / b, C64::new(1.0, 0.0), b / a])
    };
    Ok(LSeries::from_parts(format!("Ad({})", f.label()), gamma, w, local, f.supply(), 2.0 * f.theta(), vec![]))
}

/// L(s, ϱ_f ⊗ ϱ̄_g). For f = g the poles of Λ at 1 and 0 have residues ±Λ(1, Ad f).
pub fn build_rankin_selberg(f: &dyn GlobalRep, g: &dyn GlobalRep) -> Result<LSeries> {
    let gamma = f.arch().tensor(&g.arch().dual())?;
    let w = root_number(&gamma)?;
    let same = std::ptr::addr_eq(f as *const dyn GlobalRep, g as *const dyn GlobalRep);
    let poles = if same {
        let ad = build_adjoint(f)?;
        let r = afe_value(&ad, C64::new(1.0, 0.0), 1e-13 * ad.gamma_value(C64::new(1.0, 0.0))?.norm())?.value;
        vec![(C64::new(1.0, 0.0), r), (C64::new(0.0, 0.0), -r)]
    } else {
        vec![]
    };
    let (tf, tg) = (collect_roots(f), collect_roots(g));
    let local = move |p: u64| {
        let (a1, b1) = (*tf.get(p as usize)?)?;
        let (a2, b2) = (*tg.get(p as usize)?)?;
        Some(vec![a1 / a2, a1 / b2, b1 / a2, b1 / b2])
    };
    let supply = supply_of(&[f, g]);
    Ok(LSeries::from_parts(
        format!("{}x{}~", f.label(), g.label()),
        gamma,
        w,
        local,
        supply,
        f.theta() + g.theta(),
        poles,
    ))
}

/// Inverse roots of the degree-8 triple Euler factor.
pub fn triple_local_roots(r: [(C64, C64); 3]) -> Vec<C64> {
    let mut out = Vec::with_capacity(8);
    for a in [r[0].0, r[0].1] {
        for b in [r[1].0, r[1].1] {
            for c in [r[2].0, r[2].1] {
                out.push(a * b * c);
            }
        }
    }
    out
}

/// Which archimedean row of the triple-product tables applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TriplePattern {
    /// Three Maass forms.
    Maass,
    /// Weights (k, k, 0).
    KK0,
    /// Holomorphic weights with k₁ = k₂ + k₃.
    Unbalanced,
}

pub fn triple_pattern(reps: [&dyn GlobalRep; 3]) -> Result<TriplePattern> {
    let mut w: Vec<u32> = reps.iter().map(|r| r.weight().unwrap_or(0)).collect();
    w.sort_unstable_by(|a, b| b.cmp(a));
    match (w[0], w[1], w[2]) {
        (0, 0, 0) => Ok(TriplePattern::Maass),
        (a, b, 0) if a == b => Ok(TriplePattern::KK0),
        (a, b, c) if c > 0 && a == b + c => Ok(TriplePattern::Unbalanced),
        _ => Err(LfunError::Unsupported(format!("weight pattern {w:?} has no archimedean row"))),
    }
}

/// L(s, ϱ₁ ⊗ ϱ₂ ⊗ ϱ₃), degree 8, centre 1/2.
pub fn build_triple(f1: &dyn GlobalRep, f2: &dyn GlobalRep, f3: &dyn GlobalRep) -> Result<LSeries> {
    triple_pattern([f1, f2, f3])?;
    let gamma = f1.arch().tensor(&f2.arch())?.tensor(&f3.arch())?;
    let w = root_number(&gamma)?;
    let tables = [collect_roots(f1), collect_roots(f2), collect_roots(f3)];
    let local = move |p: u64| {
        let get = |t: &Vec<Option<(C64, C64)>>| *t.get(p as usize)?;
        Some(triple_local_roots([get(&tables[0])?, get(&tables[1])?, get(&tables[2])?]))
    };
    Ok(LSeries::from_parts(
        format!("{}x{}x{}", f1.label(), f2.label(), f3.label()),
        gamma,
        w,
        local,
        supply_of(&[f1, f2, f3]),
        f1.theta() + f2.theta() + f3.theta(),
        vec![],
    ))
}

/// One line of the L-value report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LValueRecord {
    pub series_id: String,
    pub s0: [f64; 2],
    pub value: [f64; 2],
    pub error_bound: f64,
    pub coeffs_used: usize,
    pub wall_time_ms: f64,
}

impl LValueRecord {
    pub fn new(series: &LSeries, v: &AfeValue) -> Self {
        Self {
            series_id: series.id().to_string(),
            s0: [v.s0.re, v.s0.im],
            value: [v.value.re, v.value.im],
            error_bound: v.error_bound,
            coeffs_used: v.coeffs_used,
            wall_time_ms: v.wall_time_ms,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serialises")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qexp::cusp_eigenforms;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn zeta_star_values() {
        assert!((zeta_star(c(2.0, 0.0)).unwrap().re - PI / 6.0).abs() < 1e-14);
        let s = c(0.3, 0.7);
        let (a, b) = (zeta_star(s).unwrap(), zeta_star(c(1.0, 0.0) - s).unwrap());
        assert!((a - b).norm() < 1e-12 * a.norm());
        assert!(zeta_star(c(1.0, 0.0)).is_err());
        assert!((2.0 * zeta_star(c(2.0, 0.0)).unwrap().re - PI / 3.0).abs() < 1e-14);
    }

    #[test]
    fn local_series_matches_geometric() {
        let s = local_series(&[c(0.5, 0.0)], 4);
        assert!((s[4] - c(0.0625, 0.0)).norm() < 1e-16);
        let s = local_series(&[c(0.3, 0.1), c(-0.2, 0.4)], 3);
        let want = c(0.3, 0.1) + c(-0.2, 0.4);
        assert!((s[1] - want).norm() < 1e-16);
    }

    #[test]
    fn first_coefficients_of_builders() {
        let d = &cusp_eigenforms(12, 400).unwrap()[0];
        let l2 = d.lambda(2);
        let rs = build_rankin_selberg(d, d).unwrap();
        let b = rs.coefficients(10).unwrap();
        assert!((b[1] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((b[2].re - l2 * l2).abs() < 1e-14);
        let ad = build_adjoint(d).unwrap();
        assert_eq!(ad.gamma().render(), "(0,1)^1_R ⊕ (0,22)^2_R");
        let b = ad.coefficients(10).unwrap();
        assert!((b[2].re - (l2 * l2 - 1.0)).abs() < 1e-14);
        assert!((b[6] - b[2] * b[3]).norm() < 1e-15);
        let r = triple_local_roots([d.local_roots(2).unwrap(); 3]);
        let b = local_series(&r, 1);
        assert!((b[1].re - l2.powi(3)).abs() < 1e-14);
    }

    #[test]
    fn triple_rows() {
        let f28 = &cusp_eigenforms(28, 30).unwrap()[0];
        let f16 = &cusp_eigenforms(16, 30).unwrap()[0];
        let f12 = &cusp_eigenforms(12, 30).unwrap()[0];
        let t = build_triple(f28, f16, f12).unwrap();
        let want = LanglandsParam::arch(
            [26.5, 15.5, 11.5, 0.5].iter().map(|&m| ArchFactor::Dim2 { s: c(0.0, 0.0), l: (2.0 * m) as u32 }).collect(),
        );
        assert!(t.gamma().approx_eq(&want, 1e-12));
        assert_eq!(t.degree(), 8);
        assert_eq!(t.root_number(), c(1.0, 0.0));
        assert!(matches!(build_triple(f12, f12, f12), Err(LfunError::Unsupported(_))));
    }

    #[test]
    fn shortfall_and_missing_data() {
        let d = &cusp_eigenforms(12, 30).unwrap()[0];
        let ad = build_adjoint(d).unwrap();
        assert!(matches!(ad.coefficients(100), Err(LfunError::Shortfall { .. })));
        assert!(ad.coefficients(29).is_ok());
    }
}
