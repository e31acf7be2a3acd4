use super::kernel::cusp_basis;
use super::series::{dim_cusp_forms, hecke_apply, is_prime_u64, QSeries};
use super::{QexpError, Result};
use num_bigint::{BigInt, Sign};
use num_complex::Complex64 as C64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Default number of q-expansion coefficients.
pub const DEFAULT_PRECISION: usize = 4096;

/// Bits of the fixed-point √D used for the float bridge.
const SQRT_BITS: u64 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SatakeBranch {
    /// |p^{−ṡ}| = 1.
    Tempered,
    /// ṡ = σ + it with σ > 0.
    NonTempered,
}

/// Satake exponents at p with trivial central character, ṡ + s̈ = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Satake {
    pub p: u64,
    pub s1: C64,
    pub s2: C64,
    pub branch: SatakeBranch,
}

impl Satake {
    /// Roots p^{−ṡ}, p^{−s̈} of X² − λX + 1, λ the unitary eigenvalue.
    pub fn from_unitary(p: u64, lambda: C64) -> Self {
        let lp = (p as f64).ln();
        if lambda.im.abs() < 1e-14 && lambda.re.abs() <= 2.0 {
            let theta = (lambda.re / 2.0).acos();
            let s1 = C64::new(0.0, theta / lp);
            return Self { p, s1, s2: -s1, branch: SatakeBranch::Tempered };
        }
        let disc = (lambda * lambda - 4.0).sqrt();
        let (r1, r2) = ((lambda + disc) / 2.0, (lambda - disc) / 2.0);
        let alpha = if r1.norm() < r2.norm() { r1 } else { r2 };
        let s1 = -alpha.ln() / lp;
        let branch = if s1.re.abs() < 1e-12 { SatakeBranch::Tempered } else { SatakeBranch::NonTempered };
        Self { p, s1, s2: -s1, branch }
    }

    pub fn roots(&self) -> (C64, C64) {
        let lp = (self.p as f64).ln();
        ((-self.s1 * lp).exp(), (-self.s2 * lp).exp())
    }

    /// Unitary eigenvalue p^{−ṡ} + p^{−s̈}.
    pub fn lambda(&self) -> C64 {
        let (a, b) = self.roots();
        a + b
    }
}

/// Unitary λ_{p^n} = (α^{n+1} − β^{n+1})/(α − β), α = p^{−ṡ}, β = p^{−s̈}.
pub fn lambda_power(sat: &Satake, n: u32) -> C64 {
    let (a, b) = sat.roots();
    let gap = (a - b).norm();
    if gap < 1e-15 {
        return a.powu(n) * (n + 1) as f64;
    }
    if gap < 1e-3 {
        // the quotient loses ~ε/gap digits; the recursion is exact
        let lam = a + b;
        let (mut prev, mut cur) = (C64::new(1.0, 0.0), lam);
        if n == 0 {
            return prev;
        }
        for _ in 1..n {
            let next = lam * cur - prev * (a * b);
            prev = cur;
            cur = next;
        }
        return cur;
    }
    (a.powu(n + 1) - b.powu(n + 1)) / (a - b)
}

/// λ_{p^n} in the normalisation λ_p = p^{1/2}(p^{−ṡ} + p^{−s̈}).
pub fn paper_lambda(sat: &Satake, n: u32) -> C64 {
    lambda_power(sat, n) * (sat.p as f64).powf(n as f64 / 2.0)
}

/// Coefficient field of an eigenform.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoeffField {
    Rational,
    /// a_n = x_n + c·y_n with c = (trace + branch·√disc)/2 a root of X² − trace·X − norm.
    Quadratic { disc: BigInt, trace: BigInt, norm: BigInt, branch: i8 },
}

/// Exact coefficient `(u + v√D)/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadCoeff {
    pub u: BigInt,
    pub v: BigInt,
    pub disc: BigInt,
}

impl QuadCoeff {
    pub fn to_f64(&self) -> f64 {
        let s = (&self.disc << (2 * SQRT_BITS)).sqrt();
        let num = (&self.u << SQRT_BITS) + &self.v * s;
        scaled_to_f64(&num, SQRT_BITS + 1)
    }

    /// Decimal string with `frac` digits after the point.
    pub fn to_decimal(&self, frac: u32) -> String {
        let ten = BigInt::from(10).pow(frac);
        let s = (&self.disc * &ten * &ten).sqrt();
        let scaled = (&self.u * &ten + &self.v * s) >> 1usize;
        decimal_from_scaled(&scaled, frac)
    }
}

fn decimal_from_scaled(x: &BigInt, frac: u32) -> String {
    let neg = x.is_negative();
    let digits = x.abs().to_string();
    let frac = frac as usize;
    let padded = if digits.len() <= frac { format!("{}{}", "0".repeat(frac + 1 - digits.len()), digits) } else { digits };
    let (int, fr) = padded.split_at(padded.len() - frac);
    format!("{}{}.{}", if neg { "-" } else { "" }, int, fr)
}

/// x / 2^shift as f64 without overflow in the intermediate.
fn scaled_to_f64(x: &BigInt, shift: u64) -> f64 {
    let bits = x.bits();
    if bits > 1000 {
        let drop = bits - 960;
        return scaled_to_f64(&(x >> drop), shift - drop.min(shift)) * 2f64.powi(drop.saturating_sub(shift) as i32);
    }
    x.to_f64().unwrap_or(0.0) * 2f64.powi(-(shift as i32))
}

/// n^{(k−1)/2} for even k, as an integer power times one square root.
fn norm_factor(n: usize, k: u32) -> f64 {
    (n as f64).powi((k as i32 - 2) / 2) * (n as f64).sqrt()
}

/// A level-one holomorphic Hecke eigenform with a_1 = 1.
#[derive(Debug, Clone)]
pub struct HoloEigenform {
    weight: u32,
    field: CoeffField,
    x: Vec<BigInt>,
    y: Vec<BigInt>,
    lambda: Vec<f64>,
    satake: BTreeMap<u64, Satake>,
}

impl HoloEigenform {
    fn build(weight: u32, field: CoeffField, x: Vec<BigInt>, y: Vec<BigInt>) -> Self {
        let n = x.len();
        let mut f = Self { weight, field, x, y, lambda: Vec::new(), satake: BTreeMap::new() };
        let mut lambda = vec![0.0; n];
        for (i, l) in lambda.iter_mut().enumerate().skip(1) {
            *l = f.coeff_exact(i).to_f64() / norm_factor(i, weight);
        }
        f.lambda = lambda;
        for p in (2..n as u64).filter(|&p| is_prime_u64(p)) {
            f.satake.insert(p, Satake::from_unitary(p, C64::new(f.lambda[p as usize], 0.0)));
        }
        f
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn precision(&self) -> usize {
        self.x.len()
    }

    pub fn field(&self) -> &CoeffField {
        &self.field
    }

    /// Short label, e.g. `f28+`.
    pub fn label(&self) -> String {
        match &self.field {
            CoeffField::Rational => format!("f{}", self.weight),
            CoeffField::Quadratic { branch, .. } => format!("f{}{}", self.weight, if *branch > 0 { "+" } else { "-" }),
        }
    }

    /// a_n = (u + v√D)/2; D = 1 and v = 0 for rational forms.
    pub fn coeff_exact(&self, n: usize) -> QuadCoeff {
        assert!(n < self.precision(), "coefficient {n} beyond precision {}", self.precision());
        match &self.field {
            CoeffField::Rational => QuadCoeff { u: &self.x[n] * 2, v: BigInt::zero(), disc: BigInt::one() },
            CoeffField::Quadratic { disc, trace, branch, .. } => QuadCoeff {
                u: &self.x[n] * 2 + trace * &self.y[n],
                v: &self.y[n] * BigInt::from(*branch),
                disc: disc.clone(),
            },
        }
    }

    pub fn coeff_f64(&self, n: usize) -> f64 {
        self.coeff_exact(n).to_f64()
    }

    /// Unitary eigenvalue λ_n = a_n / n^{(k−1)/2}.
    pub fn lambda(&self, n: usize) -> f64 {
        self.lambda[n]
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambda
    }

    pub fn satake(&self, p: u64) -> Option<&Satake> {
        self.satake.get(&p)
    }

    pub fn satake_map(&self) -> &BTreeMap<u64, Satake> {
        &self.satake
    }

    /// Rational and irrational parts as q-series: f = X + c·Y.
    pub fn parts(&self) -> (QSeries, Option<QSeries>) {
        let x = QSeries::from_integers(self.x.iter().cloned(), self.weight).expect("nonempty");
        let y = (!self.y.is_empty())
            .then(|| QSeries::from_integers(self.y.iter().cloned(), self.weight).expect("nonempty"));
        (x, y)
    }

    /// Rational q-series of a rational form.
    pub fn qseries(&self) -> Option<QSeries> {
        match self.field {
            CoeffField::Rational => Some(self.parts().0),
            _ => None,
        }
    }

    /// Applies T_{p^n} by composing T_p and checks exactly that the result is
    /// a_{p^n}·f on the valid range. Returns the unitary eigenvalue read off
    /// the transformed series.
    pub fn hecke_power_check(&self, p: u64, n: u32) -> Result<(bool, f64)> {
        let (x, y) = self.parts();
        let tx = hecke_power(&x, p, n)?;
        let ty = y.as_ref().map(|y| hecke_power(y, p, n)).transpose()?;
        let ok = match (&self.field, &ty, &y) {
            (CoeffField::Rational, _, _) => {
                let mu = tx.coeff(1)?.clone();
                (0..tx.precision()).all(|i| tx.coeffs()[i] == &mu * &x.coeffs()[i])
            }
            (CoeffField::Quadratic { trace, norm, .. }, Some(ty), Some(y)) => {
                // (A + cB) = (A₁ + cB₁)(X + cY) with c² = trace·c + norm
                let (a1, b1) = (tx.coeff(1)?.clone(), ty.coeff(1)?.clone());
                let tr = BigRational::from_integer(trace.clone());
                let nm = BigRational::from_integer(norm.clone());
                (0..tx.precision()).all(|i| {
                    let (xi, yi) = (&x.coeffs()[i], &y.coeffs()[i]);
                    tx.coeffs()[i] == &a1 * xi + &nm * &b1 * yi
                        && ty.coeffs()[i] == &a1 * yi + &b1 * xi + &tr * &b1 * yi
                })
            }
            _ => false,
        };
        let a = match (&self.field, &ty) {
            (CoeffField::Rational, _) => QuadCoeff {
                u: tx.coeff(1)?.to_integer() * 2,
                v: BigInt::zero(),
                disc: BigInt::one(),
            },
            (CoeffField::Quadratic { disc, trace, branch, .. }, Some(ty)) => QuadCoeff {
                u: tx.coeff(1)?.to_integer() * 2 + trace * ty.coeff(1)?.to_integer(),
                v: ty.coeff(1)?.to_integer() * BigInt::from(*branch),
                disc: disc.clone(),
            },
            _ => unreachable!("quadratic forms carry both parts"),
        };
        let pn = (p as usize).pow(n);
        Ok((ok, a.to_f64() / norm_factor(pn, self.weight)))
    }

    pub fn to_json(&self) -> EigenformJson {
        let coefficients = (0..self.precision())
            .map(|n| match self.field {
                CoeffField::Rational => self.x[n].to_string(),
                _ => self.coeff_exact(n).to_decimal(30),
            })
            .collect();
        let exact = match &self.field {
            CoeffField::Rational => None,
            CoeffField::Quadratic { disc, trace, norm, branch } => Some(ExactQuadratic {
                disc: disc.to_string(),
                trace: trace.to_string(),
                norm: norm.to_string(),
                branch: *branch,
                x: self.x.iter().map(ToString::to_string).collect(),
                y: self.y.iter().map(ToString::to_string).collect(),
            }),
        };
        EigenformJson {
            weight: self.weight,
            precision: self.precision(),
            coefficients,
            satake: self.satake.iter().map(|(p, s)| (p.to_string(), [s.s1.re, s.s1.im])).collect(),
            exact,
        }
    }

    pub fn from_json(doc: &EigenformJson) -> Result<Self> {
        let parse = |s: &str| s.parse::<BigInt>().map_err(|e| QexpError::Parse(format!("{s}: {e}")));
        let f = match &doc.exact {
            None => {
                let x = doc.coefficients.iter().map(|s| parse(s)).collect::<Result<Vec<_>>>()?;
                Self::build(doc.weight, CoeffField::Rational, x, Vec::new())
            }
            Some(e) => {
                let x = e.x.iter().map(|s| parse(s)).collect::<Result<Vec<_>>>()?;
                let y = e.y.iter().map(|s| parse(s)).collect::<Result<Vec<_>>>()?;
                let field = CoeffField::Quadratic {
                    disc: parse(&e.disc)?,
                    trace: parse(&e.trace)?,
                    norm: parse(&e.norm)?,
                    branch: e.branch,
                };
                Self::build(doc.weight, field, x, y)
            }
        };
        if f.precision() != doc.precision {
            return Err(QexpError::Parse(format!("precision {} but {} coefficients", doc.precision, f.precision())));
        }
        Ok(f)
    }
}

/// JSON document for eigenform export and import.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenformJson {
    pub weight: u32,
    pub precision: usize,
    pub coefficients: Vec<String>,
    pub satake: BTreeMap<String, [f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactQuadratic>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExactQuadratic {
    pub disc: String,
    pub trace: String,
    pub norm: String,
    pub branch: i8,
    pub x: Vec<String>,
    pub y: Vec<String>,
}

/// T_{p^n} via T_{p^{m+1}} = T_p T_{p^m} − p^{k−1} T_{p^{m−1}}.
pub fn hecke_power(f: &QSeries, p: u64, n: u32) -> Result<QSeries> {
    if n == 0 {
        return Ok(f.clone());
    }
    let pk = BigRational::from_integer(BigInt::from(p).pow(f.weight() - 1));
    let mut prev = f.clone();
    let mut cur = hecke_apply(f, p)?;
    for _ in 1..n {
        let next = hecke_apply(&cur, p)?;
        let next = next.sub(&prev.scale(&pk))?;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Hecke eigenforms of S_k to `precision` terms, in exact arithmetic.
pub fn cusp_eigenforms(k: u32, precision: usize) -> Result<Vec<HoloEigenform>> {
    if k < 12 || k % 2 == 1 {
        return Err(QexpError::Weight(format!("cusp eigenforms need even k >= 12, got {k}")));
    }
    let d = dim_cusp_forms(k);
    match d {
        0 => Ok(Vec::new()),
        1 => {
            let b = cusp_basis(k, precision)?;
            Ok(vec![HoloEigenform::build(k, CoeffField::Rational, b[0].clone(), Vec::new())])
        }
        2 => {
            if precision < 5 {
                return Err(QexpError::Precision("dimension-two spaces need precision >= 5".into()));
            }
            let mut b = cusp_basis(k, precision)?;
            let f2 = b.pop().expect("two vectors");
            let f1 = b.pop().expect("two vectors");
            let trace = f2[4].clone();
            let norm = &f1[4] + (BigInt::one() << (k - 1) as usize);
            let disc: BigInt = &trace * &trace + &norm * 4;
            if disc.sign() != Sign::Plus {
                return Err(QexpError::Diagonalize(format!("T_2 discriminant {disc} on S_{k} is not positive")));
            }
            Ok([1i8, -1]
                .into_iter()
                .map(|branch| {
                    let field =
                        CoeffField::Quadratic { disc: disc.clone(), trace: trace.clone(), norm: norm.clone(), branch };
                    HoloEigenform::build(k, field, f1.clone(), f2.clone())
                })
                .collect())
        }
        _ => Err(QexpError::Unsupported(format!(
            "dim S_{k} = {d}: eigenforms beyond quadratic coefficient fields are not implemented"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn delta_coefficients_and_lambda() {
        let f = &cusp_eigenforms(12, 200).unwrap()[0];
        let want = [0i64, 1, -24, 252, -1472, 4830, -6048];
        for (n, w) in want.iter().enumerate() {
            assert_eq!(f.coeff_exact(n).u, BigInt::from(2 * w));
        }
        assert!((f.lambda(2) + 0.530_330_085_889_910_6).abs() < 1e-13);
        let s = f.satake(2).unwrap();
        assert!((lambda_power(s, 2).re + 0.71875).abs() < 1e-13);
        assert_eq!(s.branch, SatakeBranch::Tempered);
    }

    #[test]
    fn weight_28_pair_matches_hecke_matrix() {
        let forms = cusp_eigenforms(28, 40).unwrap();
        assert_eq!(forms.len(), 2);
        // T_2 in the echelon basis f1 = q + ..., f2 = q² + ...:
        // T_2 f_i = (T_2 f_i)_1 f1 + (T_2 f_i)_2 f2
        let b = cusp_basis(28, 40).unwrap();
        let s = |v: &Vec<BigInt>| QSeries::from_integers(v.iter().cloned(), 28).unwrap();
        let t1 = hecke_apply(&s(&b[0]), 2).unwrap();
        let t2 = hecke_apply(&s(&b[1]), 2).unwrap();
        let m = [[t1.coeff(1).unwrap(), t2.coeff(1).unwrap()], [t1.coeff(2).unwrap(), t2.coeff(2).unwrap()]];
        let tr = (m[0][0] + m[1][1]).to_integer().to_f64().unwrap();
        let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).to_integer().to_f64().unwrap();
        for f in &forms {
            let a2 = f.coeff_f64(2);
            assert!((a2 * a2 - tr * a2 + det).abs() < 1e-9 * a2 * a2, "char poly at {a2}");
        }
        assert!((forms[0].coeff_f64(2) - forms[1].coeff_f64(2)).abs() > 1.0);
    }

    #[test]
    fn empty_and_unsupported_weights() {
        assert!(cusp_eigenforms(14, 50).unwrap().is_empty());
        assert!(matches!(cusp_eigenforms(13, 50), Err(QexpError::Weight(_))));
        assert!(matches!(cusp_eigenforms(36, 50), Err(QexpError::Unsupported(_))));
    }

    #[test]
    fn lambda_power_edge_cases() {
        let s = Satake::from_unitary(3, c(0.7));
        assert!((lambda_power(&s, 0) - c(1.0)).norm() < 1e-15);
        assert!((lambda_power(&s, 1) - c(0.7)).norm() < 1e-15);
        let deg = Satake::from_unitary(5, c(2.0));
        assert!(deg.s1.norm() < 1e-15);
        assert!((lambda_power(&deg, 4) - c(5.0)).norm() < 1e-12);
        let neg = Satake::from_unitary(5, c(-2.0));
        assert!((lambda_power(&neg, 3) - c(-4.0)).norm() < 1e-12);
        assert!((paper_lambda(&s, 1) - c(0.7 * 3f64.sqrt())).norm() < 1e-14);
        let ex = Satake::from_unitary(2, c(2.5));
        assert_eq!(ex.branch, SatakeBranch::NonTempered);
        assert!(ex.s1.re > 0.0);
        assert!((ex.lambda() - c(2.5)).norm() < 1e-14);
    }

    #[test]
    fn json_roundtrip_quadratic() {
        let f = &cusp_eigenforms(28, 30).unwrap()[1];
        let doc = f.to_json();
        let text = serde_json::to_string(&doc).unwrap();
        let back = HoloEigenform::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.lambdas(), f.lambdas());
        let a2: f64 = doc.coefficients[2].parse().unwrap();
        assert!((a2 - f.coeff_f64(2)).abs() < 1e-6 * a2.abs());
    }

    #[test]
    fn decimal_strings() {
        let q = QuadCoeff { u: BigInt::from(1), v: BigInt::from(1), disc: BigInt::from(5) };
        assert!(q.to_decimal(20).starts_with("1.61803398874989484820"));
        let q = QuadCoeff { u: BigInt::from(-3), v: BigInt::from(0), disc: BigInt::from(1) };
        assert_eq!(q.to_decimal(2), "-1.50");
    }
}
